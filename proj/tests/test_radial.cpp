#include <doctest.h>

#include <cmath>

#include "hypmap/gauge.hpp"
#include "hypmap/radial.hpp"

using namespace hypmap;

namespace {

RadialState gauss_state(const RadialGrid& g, double amp) {
    RadialState s{g, std::vector<Complex>(g.n), 0.0};
    for (int k = 0; k < g.n; ++k) s.Q[k] = amp * g.rho(k) * std::exp(-g.rho(k) * g.rho(k));
    return s;
}

}  // namespace

TEST_CASE("qq_rhs: zero state") {
    RadialGrid g{64, 0.05};
    RadialState s{g, std::vector<Complex>(g.n, Complex(0)), 0.0};
    for (const Complex& v : qq_rhs(s)) CHECK(v == Complex(0));
}

TEST_CASE("qq_rhs matches the closed form for Q = rho e^{-rho^2}") {
    // L = Q'' + Q'/rho - Q/rho^2 = e^{-rho^2} (4 rho^3 - 8 rho),
    // u = |Q|^2 - 2 int_rho^inf tau e^{-2 tau^2} dtau = rho^2 e^{-2rho^2} - e^{-2rho^2}/2
    double errs[2];
    int idx = 0;
    for (double h : {0.02, 0.01}) {
        RadialGrid g{static_cast<int>(std::lround(4.0 / h)), h};
        const RadialState s = gauss_state(g, 1.0);
        RadialRhsOptions opt;
        opt.u_tail_beyond_R = std::exp(-2.0 * g.R() * g.R()) / 4.0;
        const std::vector<Complex> rhs = qq_rhs(s, opt);
        double e = 0.0;
        for (int k = 0; k < g.n; ++k) {
            const double rho = g.rho(k);
            if (rho < 0.1 || rho > g.R() - 0.1) continue;
            const double ex = std::exp(-rho * rho);
            const double L = ex * (4.0 * rho * rho * rho - 8.0 * rho);
            const double u = rho * rho * ex * ex - 0.5 * ex * ex;
            const Complex ref = Complex(0, 1) * (L - 2.0 * rho * ex * u);
            e = std::max(e, std::abs(rhs[k] - ref));
        }
        errs[idx++] = e;
    }
    CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("qq_rhs on the blow-up profile matches its analytic time derivative") {
    const BlowupParams P{1.0, -4.0, 1.0};
    double errs[3];
    int idx = 0;
    for (double h : {0.02, 0.01, 0.005}) {
        RadialGrid g{static_cast<int>(std::lround(3.0 / h)), h};
        const RadialState s = blowup_radial_state(P, 0.0, g);
        RadialRhsOptions opt;
        opt.anchor = UAnchor::origin_zero;   // the profile grows linearly: no decaying tail
        const std::vector<Complex> rhs = qq_rhs(s, opt);
        double e = 0.0;
        for (int k = 0; k < g.n; ++k) {
            const double rho = g.rho(k);
            if (rho < 0.1 || rho > g.R() - 0.1) continue;
            e = std::max(e, std::abs(rhs[k] - blowup_radial_profile_dt(P, 0.0, rho)));
        }
        errs[idx++] = e;
    }
    CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(errs[1] / errs[2]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(errs[1] <= 3e-3);
}

TEST_CASE("evolve_radial: zero data, mass conservation, divergence flag") {
    RadialGrid g{60, 0.05};
    RadialEvolveOptions opt;
    opt.dt = 1e-5;
    opt.steps = 200;

    const RadialState zero{g, std::vector<Complex>(g.n, Complex(0)), 0.0};
    const RadialTrajectory tz = evolve_radial(zero, opt);
    CHECK(tz.status == RadialStatus::completed);
    for (const Complex& v : tz.snapshots.back().Q) CHECK(v == Complex(0));

    RadialEvolveOptions mass_opt;
    mass_opt.dt = 1e-5;
    mass_opt.steps = 1000;
    const RadialTrajectory tm = evolve_radial(gauss_state(g, 0.01), mass_opt);
    CHECK(tm.status == RadialStatus::completed);
    CHECK(std::abs(tm.mass_final - tm.mass_initial) / tm.mass_initial <= 1e-6);

    RadialEvolveOptions div_opt;
    div_opt.dt = 1e-5;
    div_opt.steps = 4000;
    div_opt.blowup_threshold = 0.4;   // below the initial amplitude: fires immediately
    const RadialTrajectory td = evolve_radial(gauss_state(g, 1.1), div_opt);
    CHECK(td.status == RadialStatus::blowup_suspected);
    CHECK(td.halted_step > 0);

    RadialEvolveOptions bad = opt;
    bad.dt = 1.0;
    CHECK_THROWS_AS((void)evolve_radial(zero, bad), std::invalid_argument);
}

TEST_CASE("evolve_radial tracks the blow-up profile with a pinned boundary") {
    const BlowupParams P{1.0, -4.0, 1.0};
    RadialGrid g{60, 0.05};
    const RadialState s0 = blowup_radial_state(P, 0.0, g);
    RadialEvolveOptions opt;
    opt.dt = 2e-5;
    opt.steps = 1000;   // to t = 0.02
    opt.rhs.anchor = UAnchor::origin_zero;
    opt.boundary = [&](double t) { return blowup_radial_profile(P, t, g.R()); };
    const RadialTrajectory traj = evolve_radial(s0, opt);
    CHECK(traj.status == RadialStatus::completed);
    const RadialState& fin = traj.snapshots.back();
    double err = 0.0;
    for (int k = 0; k < g.n; ++k) {
        if (g.rho(k) > g.R() - 0.2) continue;   // boundary layer from the truncation
        err = std::max(err, std::abs(fin.Q[k] - blowup_radial_profile(P, fin.t, g.rho(k))));
    }
    CHECK(err <= 5e-3);   // O(h^2) + O(dt^4) at h = 0.05
}

TEST_CASE("embed_radial: zeros, constraints of a smooth profile, blow-up consistency") {
    RadialGrid rg{300, 0.01};
    const Grid2D g2 = Grid2D::centered(41, 0.05, BoundaryMode::dirichlet_reference);

    const RadialState zero{rg, std::vector<Complex>(rg.n, Complex(0)), 0.0};
    const GaugeFields fz = embed_radial(zero, g2);
    CHECK(max_abs_interior(fz.q, 0) == 0.0);
    CHECK(max_abs_interior(fz.u, 0) == 0.0);

    // smooth decaying profile: constraints and the third equation hold to
    // stencil + interpolation tolerance
    const RadialState gs = gauss_state(rg, 1.0);
    const GaugeFields fg = embed_radial(gs, g2, UAnchor::infinity_zero,
                                        std::exp(-2.0 * rg.R() * rg.R()) / 4.0);
    const ConstraintResidual c = constraint_residual(fg);
    CHECK(max_abs_interior(c.res1, 1) <= 1e-10);
    CHECK(max_abs_interior(c.res2, 1) <= 5e-3);
    const SystemResidual sys = system_residual(fg, fg, fg, 1.0);
    CHECK(max_abs_interior(sys.R_p, 1) <= 5e-3);

    // blow-up family profile embeds to the closed-form fields
    const BlowupParams P{1.0, -4.0, 1.0};
    const RadialState lem = blowup_radial_state(P, 0.0, rg);
    const GaugeFields fl = embed_radial(lem, g2, UAnchor::origin_zero);
    double worst = 0.0;
    for (int j = 0; j < g2.ny; ++j)
        for (int i = 0; i < g2.nx; ++i) {
            const GaugePoint ref = blowup_fields(P, 0.0, g2.z(i, j));
            worst = std::max(worst, std::abs(fl.q.at(i, j) - ref.q));
            worst = std::max(worst, std::abs(fl.r.at(i, j) - ref.r));
            worst = std::max(worst, std::abs(fl.u.at(i, j) - ref.u));
        }
    CHECK(worst <= 1e-6);
}

TEST_CASE("radial_mass of a known profile") {
    // mass of rho e^{-rho^2}: int rho^3 e^{-2 rho^2} drho over [0, inf) = 1/8
    RadialGrid g{800, 0.01};
    CHECK(radial_mass(gauss_state(g, 1.0)) == doctest::Approx(0.125).epsilon(1e-5));
}
