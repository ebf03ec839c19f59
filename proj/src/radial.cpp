#include "hypmap/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypmap {

void RadialState::validate() const {
    grid.validate();
    if (Q.size() != static_cast<std::size_t>(grid.n))
        throw std::invalid_argument("RadialState: sample count mismatch");
    for (const Complex& c : Q)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::invalid_argument("RadialState: non-finite sample");
}

std::vector<Complex> qq_rhs(const RadialState& state, const RadialRhsOptions& opt) {
    state.validate();
    const RadialGrid& g = state.grid;
    const int n = g.n;
    const double h = g.h_rho;

    // u at every node from the cumulative quadratures (one O(n) pass)
    std::vector<double> cum_from_zero(n + 1, 0.0);   // \int_0^{rho_k}
    {
        double prev_g = 0.0;   // integrand -> 0 at the origin for Q ~ c rho
        for (int k = 0; k < n; ++k) {
            const double gk = std::norm(state.Q[k]) / g.rho(k);
            cum_from_zero[k + 1] = cum_from_zero[k] + 0.5 * h * (prev_g + gk);
            prev_g = gk;
        }
    }
    const double total = cum_from_zero[n] + opt.u_tail_beyond_R;

    std::vector<Complex> out(n);
    const Complex I(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        const double rho = g.rho(k);
        const Complex Qm = (k == 0) ? Complex(0.0, 0.0) : state.Q[k - 1];
        const Complex Qp = (k == n - 1) ? opt.outer_ghost : state.Q[k + 1];
        const Complex Q0 = state.Q[k];
        const Complex lap = (Qp - 2.0 * Q0 + Qm) / (h * h) + (Qp - Qm) / (2.0 * h * rho) -
                            Q0 / (rho * rho);
        const double u = (opt.anchor == UAnchor::origin_zero)
                             ? std::norm(Q0) + 2.0 * cum_from_zero[k + 1]
                             : std::norm(Q0) - 2.0 * (total - cum_from_zero[k + 1]);
        out[k] = I * (lap - 2.0 * Q0 * u);
    }
    return out;
}

double radial_mass(const RadialState& state) {
    const RadialGrid& g = state.grid;
    double sum = 0.0;
    double prev = 0.0;   // |Q|^2 rho -> 0 at the origin
    for (int k = 0; k < g.n; ++k) {
        const double cur = std::norm(state.Q[k]) * g.rho(k);
        sum += 0.5 * g.h_rho * (prev + cur);
        prev = cur;
    }
    return sum;
}

void RadialEvolveOptions::validate(const RadialGrid& g) const {
    g.validate();
    if (dt <= 0.0) throw std::invalid_argument("RadialEvolveOptions: dt must be positive");
    if (steps < 0) throw std::invalid_argument("RadialEvolveOptions: negative step count");
    if (dt > cfl_c * g.h_rho * g.h_rho)
        throw std::invalid_argument("RadialEvolveOptions: dt violates the CFL guard dt <= " +
                                    std::to_string(cfl_c * g.h_rho * g.h_rho));
}

RadialTrajectory evolve_radial(const RadialState& initial, const RadialEvolveOptions& opt) {
    initial.validate();
    opt.validate(initial.grid);
    const int n = initial.grid.n;

    RadialTrajectory traj;
    RadialState cur = initial;
    const Complex pinned_initial = initial.Q[n - 1];
    auto pin = [&](RadialState& s, double t) {
        s.Q[n - 1] = opt.boundary ? opt.boundary(t) : pinned_initial;
    };
    auto record_mass = [&](const RadialState& s) {
        traj.mass_series.emplace_back(s.t, radial_mass(s));
    };

    traj.snapshots.push_back(cur);
    record_mass(cur);
    traj.mass_initial = traj.mass_series.front().second;

    std::vector<Complex> k1, k2, k3, k4;
    RadialState tmp = cur;
    for (int step = 0; step < opt.steps; ++step) {
        k1 = qq_rhs(cur, opt.rhs);
        for (int k = 0; k < n; ++k) tmp.Q[k] = cur.Q[k] + 0.5 * opt.dt * k1[k];
        k2 = qq_rhs(tmp, opt.rhs);
        for (int k = 0; k < n; ++k) tmp.Q[k] = cur.Q[k] + 0.5 * opt.dt * k2[k];
        k3 = qq_rhs(tmp, opt.rhs);
        for (int k = 0; k < n; ++k) tmp.Q[k] = cur.Q[k] + opt.dt * k3[k];
        k4 = qq_rhs(tmp, opt.rhs);
        for (int k = 0; k < n; ++k)
            cur.Q[k] += opt.dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        cur.t = initial.t + (step + 1) * opt.dt;
        pin(cur, cur.t);

        double qmax = 0.0;
        for (const Complex& c : cur.Q) qmax = std::max(qmax, std::abs(c));
        if (!(qmax < opt.blowup_threshold)) {
            traj.status = RadialStatus::blowup_suspected;
            traj.halted_step = step + 1;
            break;
        }
        if (opt.snapshot_every > 0 && (step + 1) % opt.snapshot_every == 0 &&
            step + 1 != opt.steps) {
            traj.snapshots.push_back(cur);
            record_mass(cur);
        }
    }
    traj.snapshots.push_back(cur);
    record_mass(cur);
    traj.mass_final = traj.mass_series.back().second;
    return traj;
}

GaugeFields embed_radial(const RadialState& state, const Grid2D& grid, UAnchor anchor,
                         double u_tail_beyond_R) {
    state.validate();
    grid.validate();
    const RadialProfile profile(state.grid, state.Q, anchor, u_tail_beyond_R);
    GaugeFields out(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const GaugePoint f = radial_ansatz_fields(profile, grid.z(i, j));
            out.p.at(i, j) = f.p;
            out.q.at(i, j) = f.q;
            out.r.at(i, j) = f.r;
            out.u.at(i, j) = f.u;
        }
    return out;
}

RadialState blowup_radial_state(const BlowupParams& P, double t, const RadialGrid& g) {
    g.validate();
    RadialState s{g, std::vector<Complex>(g.n), t};
    for (int k = 0; k < g.n; ++k) s.Q[k] = blowup_radial_profile(P, t, g.rho(k));
    return s;
}

}  // namespace hypmap
