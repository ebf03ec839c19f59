#include "hypmap/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hypmap/spin_evolve.hpp"

namespace hypmap {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int nodes_for(double extent, double h) {
    const int n = static_cast<int>(std::lround(2.0 * extent / h)) + 1;
    if (std::abs((n - 1) * h - 2.0 * extent) > 1e-9 * extent)
        throw std::invalid_argument("ladder spacing does not tile the domain");
    return n;
}

template <class FieldT>
double max_abs_physical_interior_impl(const FieldT& f, double margin) {
    const Grid2D& g = f.grid;
    double m = 0.0;
    for (int j = 1; j < g.ny - 1; ++j) {
        if (std::abs(g.x2(j)) > g.x2(g.ny - 1) - margin + 1e-12) continue;
        for (int i = 1; i < g.nx - 1; ++i) {
            if (std::abs(g.x1(i)) > g.x1(g.nx - 1) - margin + 1e-12) continue;
            m = std::max(m, std::abs(f.at(i, j)));
        }
    }
    return m;
}

}  // namespace

double max_abs_physical_interior(const ScalarField& f, double margin) {
    return max_abs_physical_interior_impl(f, margin);
}
double max_abs_physical_interior(const RealField& f, double margin) {
    return max_abs_physical_interior_impl(f, margin);
}

std::vector<double> convergence_orders(const std::vector<double>& residuals) {
    std::vector<double> orders;
    for (std::size_t k = 1; k < residuals.size(); ++k)
        orders.push_back(std::log2(residuals[k - 1] / residuals[k]));
    return orders;
}

ExplicitLadderReport run_explicit_ladder(const ExplicitLadderConfig& cfg) {
    const auto t0 = Clock::now();
    if (cfg.ladder.empty()) throw std::invalid_argument("run_explicit_ladder: empty ladder");
    ExplicitLadderReport rep;
    rep.amplitude_ok = std::abs(cfg.params.amplitude_defect()) <= 1e-12;

    const char* names[5] = {"R_q", "R_r", "R_p", "constraint1", "constraint2"};
    rep.equations.assign(5, {});
    for (int e = 0; e < 5; ++e) rep.equations[e].name = names[e];

    for (std::size_t rung = 0; rung < cfg.ladder.size(); ++rung) {
        const double h = cfg.ladder[rung];
        const double dt = cfg.dt_base * h / cfg.ladder.front();
        const Grid2D grid =
            Grid2D::centered(nodes_for(cfg.extent, h), h, BoundaryMode::dirichlet_reference);
        auto sampled = [&](double t) {
            GaugeFields f(grid);
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i) {
                    const GaugePoint gp = blowup_fields(cfg.params, t, grid.z(i, j));
                    f.p.at(i, j) = gp.p;
                    f.q.at(i, j) = gp.q;
                    f.r.at(i, j) = gp.r;
                    f.u.at(i, j) = gp.u;
                }
            return f;
        };
        const GaugeFields prev = sampled(cfg.t - dt);
        const GaugeFields cur = sampled(cfg.t);
        const GaugeFields next = sampled(cfg.t + dt);
        const SystemResidual sys = system_residual(prev, cur, next, dt);
        const ConstraintResidual con = constraint_residual(cur);

        const ScalarField* fields[5] = {&sys.R_q, &sys.R_r, &sys.R_p, &con.res1, &con.res2};
        for (int e = 0; e < 5; ++e)
            rep.equations[e].residuals.push_back(max_abs_interior(*fields[e], 1));

        if (rung + 1 == cfg.ladder.size()) {
            // per-equation field scale: interior max of the sum of term moduli
            const ScalarField lq = laplacian(cur.q);
            const ScalarField lr = laplacian(cur.r);
            const ScalarField qzb = d_zbar(cur.q);
            const ScalarField uz = d_z(cur.u);
            ScalarField qr(grid);
            for (std::size_t k = 0; k < grid.size(); ++k) qr.v[k] = cur.q.v[k] * cur.r.v[k];
            const ScalarField qrzb = d_zbar(qr);
            double sq = 0.0, sr = 0.0, sp = 0.0, s1 = 0.0, s2 = 0.0;
            const double idt = 1.0 / (2.0 * dt);
            for (int j = 1; j < grid.ny - 1; ++j)
                for (int i = 1; i < grid.nx - 1; ++i) {
                    const std::size_t k = grid.index(i, j);
                    const double qt = std::abs(next.q.v[k] - prev.q.v[k]) * idt;
                    const double rt = std::abs(next.r.v[k] - prev.r.v[k]) * idt;
                    sq = std::max(sq, qt + std::abs(lq.v[k]) +
                                          2.0 * std::abs(cur.u.v[k] * cur.q.v[k]));
                    sr = std::max(sr, rt + std::abs(lr.v[k]) +
                                          2.0 * std::abs(cur.u.v[k] * cur.r.v[k]));
                    sp = std::max(sp, std::abs(qrzb.v[k]) + std::abs(uz.v[k]));
                    s1 = std::max(s1, std::norm(cur.q.v[k]) + std::norm(cur.r.v[k]));
                    s2 = std::max(s2, std::abs(qzb.v[k]) + std::abs(d_z(conj(cur.r)).v[k]));
                }
            const double scales[5] = {sq, sr, sp, s1, s2};
            for (int e = 0; e < 5; ++e) rep.equations[e].finest_scale = std::max(scales[e], 1e-30);

            // distance of R_q to the analytic nonzero limit (amplitude-violating runs)
            ScalarField lim(grid);
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i)
                    lim.at(i, j) = blowup_first_equation_limit(cfg.params, cfg.t, grid.z(i, j));
            ScalarField diff(grid);
            for (std::size_t k = 0; k < grid.size(); ++k) diff.v[k] = sys.R_q.v[k] - lim.v[k];
            const double lim_max = max_abs_interior(lim, 1);
            rep.limit_rel_distance =
                lim_max > 0.0 ? max_abs_interior(diff, 1) / lim_max : 0.0;
        }
    }

    bool all = true;
    for (auto& eq : rep.equations) {
        eq.exact_floor = eq.residuals.back() <= cfg.exact_floor_rel * eq.finest_scale;
        eq.orders = convergence_orders(eq.residuals);
        eq.pass_order =
            !eq.orders.empty() &&
            std::all_of(eq.orders.begin(), eq.orders.end(),
                        [&](double o) { return o >= cfg.order_lo && o <= cfg.order_hi; });
        eq.pass_threshold = eq.residuals.back() <= cfg.residual_rel * eq.finest_scale;
        eq.pass = eq.exact_floor || (eq.pass_order && eq.pass_threshold);
        all = all && eq.pass;
    }
    rep.pass = all;
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

GaugeRoundtripReport run_gauge_roundtrip(const GaugeRoundtripConfig& cfg) {
    const auto t0 = Clock::now();
    if (cfg.ladder.empty()) throw std::invalid_argument("run_gauge_roundtrip: empty ladder");
    GaugeRoundtripReport rep;

    const BlowupSampler base(cfg.params);
    const bool injected = cfg.inject_q_eps != Complex(0.0, 0.0);
    const FunctionSampler perturbed([&](double t, double x1, double x2) {
        GaugeSample s = base(t, x1, x2);
        s.q += cfg.inject_q_eps;   // constant: leaves q_zbar unchanged
        return s;
    });
    const GaugeSampler& sampler = injected ? static_cast<const GaugeSampler&>(perturbed)
                                           : static_cast<const GaugeSampler&>(base);

    std::array<double, 4> coarse_C{};
    for (std::size_t rung = 0; rung < cfg.ladder.size(); ++rung) {
        const double h = cfg.ladder[rung];
        const double dt = cfg.dt_base * h / cfg.ladder.front();
        const Grid2D grid =
            Grid2D::centered(nodes_for(cfg.extent, h), h, BoundaryMode::dirichlet_reference);
        const std::vector<double> times{cfg.t - dt, cfg.t, cfg.t + dt};

        FrameIntegrationOptions fopt;
        if (injected) fopt.check_admissibility = false;   // diagnosed via the path flag below
        const FrameTrajectory traj = integrate_frame(sampler, grid, times, cfg.G0, fopt);
        rep.max_su_defect = std::max(rep.max_su_defect, traj.max_unit_defect);

        const SpinField Sm = reconstruct_spin(traj.slices[0]);
        const SpinField S0 = reconstruct_spin(traj.slices[1]);
        const SpinField Sp = reconstruct_spin(traj.slices[2]);
        rep.max_hyp_violation = std::max(rep.max_hyp_violation, S0.max_hyperboloid_violation());

        // residual of the matrix flow on the reconstructed spin:
        // s_t + s x. (Laplacian s), central dt
        const RealField l1 = laplacian(S0.s1), l2 = laplacian(S0.s2), l3 = laplacian(S0.s3);
        RealField resid(grid);
        const double idt = 1.0 / (2.0 * dt);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const Vec3 st{(Sp.s1.v[k] - Sm.s1.v[k]) * idt, (Sp.s2.v[k] - Sm.s2.v[k]) * idt,
                          (Sp.s3.v[k] - Sm.s3.v[k]) * idt};
            const Vec3 c = pseudo_cross({S0.s1.v[k], S0.s2.v[k], S0.s3.v[k]},
                                        {l1.v[k], l2.v[k], l3.v[k]});
            resid.v[k] = std::abs(st.s1 + c.s1) + std::abs(st.s2 + c.s2) + std::abs(st.s3 + c.s3);
        }
        rep.r5_residuals.push_back(max_abs_physical_interior(resid, cfg.margin));

        // decomposition recovery (diagonal-killing gamma pins p and u)
        DecomposeOptions dopt;
        dopt.gamma = DecomposeOptions::Gamma::diagonal_killing;
        dopt.u_imag_tol = std::max(1e-8, 50.0 * dt * dt * 100.0);
        const Decomposition dec = decompose_spin(Sm, S0, Sp, dt, dopt);

        const GaugeFields truth = sample_gauge_fields(sampler, grid, cfg.t);
        ScalarField ep(grid), eq(grid), er(grid);
        RealField eu(grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            ep.v[k] = std::abs(dec.fields.p.v[k]) - std::abs(truth.p.v[k]);
            eq.v[k] = std::abs(dec.fields.q.v[k]) - std::abs(truth.q.v[k]);
            er.v[k] = std::abs(dec.fields.r.v[k]) - std::abs(truth.r.v[k]);
            eu.v[k] = dec.fields.u.v[k] - truth.u.v[k];
        }
        const double scale_q = std::max(max_abs_physical_interior(truth.q, cfg.margin), 1e-30);
        const double scale_u = std::max(max_abs_physical_interior(truth.u, cfg.margin), 1e-30);
        rep.recovery_errors.push_back(
            {max_abs_physical_interior(ep, cfg.margin) / scale_q,
             max_abs_physical_interior(eq, cfg.margin) / scale_q,
             max_abs_physical_interior(er, cfg.margin) / scale_q,
             max_abs_physical_interior(eu, cfg.margin) / scale_u});
        if (rung == 0)
            for (int e = 0; e < 4; ++e) coarse_C[e] = rep.recovery_errors[0][e] / (h * h);

        if (rung + 1 == cfg.ladder.size()) {
            rep.bound = gradient_bound_check(S0, truth);
            // path independence: compare against the transposed sweep order
            FrameIntegrationOptions alt = fopt;
            alt.sweep = SweepOrder::x2_major;
            const FrameTrajectory tr2 =
                integrate_frame(sampler, grid, std::vector<double>{cfg.t}, cfg.G0, alt);
            FrameIntegrationOptions fwd = fopt;
            const FrameTrajectory tr1 =
                integrate_frame(sampler, grid, std::vector<double>{cfg.t}, cfg.G0, fwd);
            rep.path_independence = frame_distance(tr1.slices[0], tr2.slices[0]);
            rep.path_flagged = rep.path_independence > cfg.path_tol;
            for (int e = 0; e < 4; ++e)
                rep.recovery_limits[e] = cfg.recovery_factor * coarse_C[e] * h * h;
        }
    }

    rep.r5_orders = convergence_orders(rep.r5_residuals);
    const bool orders_ok =
        std::all_of(rep.r5_orders.begin(), rep.r5_orders.end(),
                    [&](double o) { return o >= cfg.order_lo && o <= cfg.order_hi; });
    rep.recovery_pass = true;
    for (int e = 0; e < 4; ++e)
        rep.recovery_pass =
            rep.recovery_pass && rep.recovery_errors.back()[e] <= rep.recovery_limits[e];
    rep.pass = orders_ok && rep.max_su_defect <= cfg.su_tol &&
               rep.max_hyp_violation <= cfg.hyp_tol && rep.recovery_pass && rep.bound.holds &&
               !rep.path_flagged;
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

BlowupScanReport run_blowup_scan(const BlowupScanConfig& cfg) {
    const auto t0 = Clock::now();
    if (cfg.t_samples.empty()) throw std::invalid_argument("run_blowup_scan: empty sample list");
    const double tstar = cfg.params.blow_time();
    for (double t : cfg.t_samples)
        if (t >= tstar - 1e-12)
            throw std::invalid_argument("run_blowup_scan: sample t=" + std::to_string(t) +
                                        " at or past the blow-up time " + std::to_string(tstar));
    if (!std::is_sorted(cfg.t_samples.begin(), cfg.t_samples.end()))
        throw std::invalid_argument("run_blowup_scan: samples must be increasing");

    const Grid2D grid =
        Grid2D::centered(nodes_for(cfg.extent, cfg.h), cfg.h, BoundaryMode::dirichlet_reference);
    const BlowupSampler sampler(cfg.params);
    const FrameTrajectory traj = integrate_frame(sampler, grid, cfg.t_samples, GroupElement{});

    // sup |z| over the interior node set used for the gradient sup
    double zmax = 0.0;
    for (int j = 1; j < grid.ny - 1; ++j)
        for (int i = 1; i < grid.nx - 1; ++i) zmax = std::max(zmax, std::abs(grid.z(i, j)));

    BlowupScanReport rep;
    bool monotone = true;
    double prev = -1.0;
    for (std::size_t k = 0; k < cfg.t_samples.size(); ++k) {
        const double t = cfg.t_samples[k];
        const SpinField S = reconstruct_spin(traj.slices[k]);
        BlowupScanRow row;
        row.t = t;
        row.sup_grad = sup_gradient(S);
        row.lower_bound = 2.0 * std::abs(cfg.params.alpha) * zmax / (cfg.params.a + cfg.params.b * t);
        row.ratio = row.sup_grad / row.lower_bound;
        monotone = monotone && row.sup_grad > prev;
        prev = row.sup_grad;
        rep.rows.push_back(row);
    }
    rep.monotone = monotone;
    rep.growth_ratio = rep.rows.back().sup_grad / rep.rows.front().sup_grad;
    bool ratios_ok = true;
    for (const auto& row : rep.rows) ratios_ok = ratios_ok && row.ratio >= 1.0 - cfg.ratio_tol;
    rep.pass = ratios_ok && rep.monotone &&
               (cfg.t_samples.size() < 2 || rep.growth_ratio >= cfg.growth_min);
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

}  // namespace hypmap
