#include "hypmap/spin_evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypmap/gauge.hpp"

namespace hypmap {

void EvolveConfig::validate(const Grid2D& g) const {
    if (dt <= 0.0) throw std::invalid_argument("EvolveConfig: dt must be positive");
    if (steps < 0) throw std::invalid_argument("EvolveConfig: negative step count");
    if (sign != 1 && sign != -1) throw std::invalid_argument("EvolveConfig: sign must be +1 or -1");
    if (renormalize_every < 1)
        throw std::invalid_argument("EvolveConfig: renormalize_every must be >= 1");
    const double h = std::min(g.hx, g.hy);
    if (dt > cfl_c * h * h)
        throw std::invalid_argument("EvolveConfig: dt violates the CFL guard dt <= " +
                                    std::to_string(cfl_c) + " * h^2 = " +
                                    std::to_string(cfl_c * h * h));
}

SpinField evolution_rhs(const SpinField& S, int sign) {
    const RealField l1 = laplacian(S.s1);
    const RealField l2 = laplacian(S.s2);
    const RealField l3 = laplacian(S.s3);
    SpinField out(S.grid());
    out.sheet = S.sheet;
    const double sg = static_cast<double>(sign);
    for (std::size_t k = 0; k < out.s1.v.size(); ++k) {
        const Vec3 c = pseudo_cross({S.s1.v[k], S.s2.v[k], S.s3.v[k]}, {l1.v[k], l2.v[k], l3.v[k]});
        out.s1.v[k] = sg * c.s1;
        out.s2.v[k] = sg * c.s2;
        out.s3.v[k] = sg * c.s3;
    }
    return out;
}

namespace {

void axpy(SpinField& y, double a, const SpinField& x) {
    for (std::size_t k = 0; k < y.s1.v.size(); ++k) {
        y.s1.v[k] += a * x.s1.v[k];
        y.s2.v[k] += a * x.s2.v[k];
        y.s3.v[k] += a * x.s3.v[k];
    }
}

SpinField rk4(const SpinField& S, double dt, int sign) {
    const SpinField k1 = evolution_rhs(S, sign);
    SpinField tmp = S;
    axpy(tmp, 0.5 * dt, k1);
    const SpinField k2 = evolution_rhs(tmp, sign);
    tmp = S;
    axpy(tmp, 0.5 * dt, k2);
    const SpinField k3 = evolution_rhs(tmp, sign);
    tmp = S;
    axpy(tmp, dt, k3);
    const SpinField k4 = evolution_rhs(tmp, sign);
    SpinField out = S;
    const double w = dt / 6.0;
    for (std::size_t k = 0; k < out.s1.v.size(); ++k) {
        out.s1.v[k] += w * (k1.s1.v[k] + 2.0 * k2.s1.v[k] + 2.0 * k3.s1.v[k] + k4.s1.v[k]);
        out.s2.v[k] += w * (k1.s2.v[k] + 2.0 * k2.s2.v[k] + 2.0 * k3.s2.v[k] + k4.s2.v[k]);
        out.s3.v[k] += w * (k1.s3.v[k] + 2.0 * k2.s3.v[k] + 2.0 * k3.s3.v[k] + k4.s3.v[k]);
    }
    return out;
}

void retract(SpinField& S, int step_index) {
    const Grid2D& g = S.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Vec3 s = S.at(i, j);
            const double n = minkowski_norm(s);
            if (n >= 0.0)
                throw ConeExitError("spin evolution left the timelike cone at node (" +
                                        std::to_string(i) + "," + std::to_string(j) + "), step " +
                                        std::to_string(step_index),
                                    i, j, step_index);
            const double inv = 1.0 / std::sqrt(-n);
            S.set(i, j, {s.s1 * inv, s.s2 * inv, s.s3 * inv});
        }
}

}  // namespace

SpinField step(const SpinField& S, const EvolveConfig& cfg, int step_index) {
    cfg.validate(S.grid());
    SpinField out = rk4(S, cfg.dt, cfg.sign);
    if ((step_index + 1) % cfg.renormalize_every == 0) retract(out, step_index);
    return out;
}

double energy(const SpinField& S) {
    const Grid2D& g = S.grid();
    RealField density(g);
    int comp = 0;
    for (const RealField* f : {&S.s1, &S.s2, &S.s3}) {
        const RealField gx = d_x1(*f);
        const RealField gy = d_x2(*f);
        const double sg = (comp == 2) ? -1.0 : 1.0;
        for (std::size_t k = 0; k < density.v.size(); ++k)
            density.v[k] += sg * (gx.v[k] * gx.v[k] + gy.v[k] * gy.v[k]);
        ++comp;
    }
    return integrate(density);
}

double sup_gradient(const SpinField& S, int margin) {
    return max_abs_interior(spin_gradient_sum(S), margin);
}

EvolveResult run_evolution(const SpinField& S0, const EvolveConfig& cfg,
                           const SpinReference& boundary, int diag_every,
                           const std::function<void(int, double, const SpinField&)>& on_snapshot,
                           int snapshot_every) {
    cfg.validate(S0.grid());
    const Grid2D& g = S0.grid();
    const bool pin = g.boundary == BoundaryMode::dirichlet_reference;

    auto pin_edges = [&](SpinField& S, double t) {
        if (!pin) return;
        auto value = [&](int i, int j) {
            return boundary ? boundary(t, g.x1(i), g.x2(j)) : S0.at(i, j);
        };
        for (int i = 0; i < g.nx; ++i) {
            S.set(i, 0, value(i, 0));
            S.set(i, g.ny - 1, value(i, g.ny - 1));
        }
        for (int j = 0; j < g.ny; ++j) {
            S.set(0, j, value(0, j));
            S.set(g.nx - 1, j, value(g.nx - 1, j));
        }
    };

    EvolveResult res{S0, {}, 0.0, energy(S0), 0.0};
    auto sample = [&](int n, double t) {
        res.series.push_back({n, t, energy(res.final), sup_gradient(res.final),
                              res.final.max_hyperboloid_violation()});
    };
    sample(0, 0.0);
    for (int n = 0; n < cfg.steps; ++n) {
        res.final = step(res.final, cfg, n);
        const double t = (n + 1) * cfg.dt;
        pin_edges(res.final, t);
        res.max_constraint_violation =
            std::max(res.max_constraint_violation, res.final.max_hyperboloid_violation());
        if (diag_every > 0 && (n + 1) % diag_every == 0 && n + 1 != cfg.steps) sample(n + 1, t);
        if (on_snapshot && snapshot_every > 0 && (n + 1) % snapshot_every == 0)
            on_snapshot(n + 1, t, res.final);
    }
    if (cfg.steps > 0) sample(cfg.steps, cfg.steps * cfg.dt);
    res.energy_final = energy(res.final);
    return res;
}

SpinField bump_initial_data(const Grid2D& g, const Vec3& base, double amp1, double amp2,
                            double radius, double x1c, double x2c) {
    if (radius <= 0.0) throw std::invalid_argument("bump_initial_data: radius must be positive");
    SpinField S(g, base);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.x1(i) - x1c, dy = g.x2(j) - x2c;
            const double r2 = (dx * dx + dy * dy) / (radius * radius);
            if (r2 >= 1.0) continue;
            const double chi = std::exp(1.0 - 1.0 / (1.0 - r2));
            S.set(i, j, project_to_hyperboloid(
                            {base.s1 + amp1 * chi, base.s2 + amp2 * chi, base.s3}));
        }
    S.sheet = base.s3 < 0.0 ? -1 : +1;
    return S;
}

}  // namespace hypmap
