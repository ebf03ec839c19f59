#pragma once

#include <array>
#include <string>
#include <vector>

#include "hypmap/exact.hpp"
#include "hypmap/gauge.hpp"

// Grid-refinement ladders and quantitative verdicts for the manufactured
// solution family: the machinery behind the verification commands.

namespace hypmap {

// The time step is refined proportionally with h along a ladder (dt_base at
// the coarsest h) so the joint space/time discretization error converges at
// a single order.
struct ExplicitLadderConfig {
    BlowupParams params{1.0, -4.0, 1.0};
    double extent = 2.0;                     // domain [-extent, extent]^2
    std::vector<double> ladder{0.1, 0.05, 0.025};
    double t = 0.0;
    double dt_base = 1e-3;
    double order_lo = 1.8, order_hi = 2.2;
    double residual_rel = 1e-2;              // finest max residual <= rel * field scale
    double exact_floor_rel = 1e-10;          // below this * scale an equation counts as exact
};

struct EquationVerdict {
    std::string name;
    std::vector<double> residuals;   // interior max per rung
    std::vector<double> orders;      // log2 ratios between consecutive rungs
    double finest_scale = 0.0;       // field scale (sum of term moduli) at the finest rung
    bool exact_floor = false;
    bool pass_order = false;
    bool pass_threshold = false;
    bool pass = false;
};

struct ExplicitLadderReport {
    std::vector<EquationVerdict> equations;   // R_q, R_r, R_p, constraint1, constraint2
    bool amplitude_ok = false;                // params on the solution family
    // relative sup-distance of the finest-grid first-equation residual to
    // the analytic nonzero limit (meaningful for amplitude-violating params)
    double limit_rel_distance = 0.0;
    bool pass = false;
    double elapsed_seconds = 0.0;
};

ExplicitLadderReport run_explicit_ladder(const ExplicitLadderConfig& cfg);

struct GaugeRoundtripConfig {
    BlowupParams params{1.0, -4.0, 1.0};
    double extent = 2.0;
    std::vector<double> ladder{0.1, 0.05, 0.025};
    double t = 0.0;
    double dt_base = 1e-3;
    GroupElement G0{};
    double margin = 0.4;        // physical margin for interior measurements
    double su_tol = 1e-8;
    double hyp_tol = 1e-8;
    double order_lo = 1.7, order_hi = 2.3;
    double recovery_factor = 5.0;   // finest error <= factor * (coarse-fit C) * h^2
    double path_tol = 1e-4;
    Complex inject_q_eps{0.0, 0.0};   // constant perturbation of q (breaks admissibility)
};

struct GaugeRoundtripReport {
    std::vector<double> r5_residuals;   // per rung
    std::vector<double> r5_orders;
    double max_su_defect = 0.0;
    double max_hyp_violation = 0.0;
    // recovery of (|p|, |q|, |r|, u) per rung, relative errors
    std::vector<std::array<double, 4>> recovery_errors;
    std::array<double, 4> recovery_limits{};   // allowed finest errors
    bool recovery_pass = false;
    GradientBoundReport bound;
    double path_independence = 0.0;   // x1-major vs x2-major frame distance, finest rung
    bool path_flagged = false;
    bool pass = false;
    double elapsed_seconds = 0.0;
};

GaugeRoundtripReport run_gauge_roundtrip(const GaugeRoundtripConfig& cfg);

struct BlowupScanConfig {
    BlowupParams params{1.0, -4.0, 1.0};
    double extent = 2.0;
    double h = 0.05;
    std::vector<double> t_samples{0.0, 0.1, 0.2};
    double ratio_tol = 0.05;     // sup|grad S| >= (1 - tol) * lower bound
    double growth_min = 4.75;    // last/first sup-gradient ratio
};

struct BlowupScanRow {
    double t = 0.0, sup_grad = 0.0, lower_bound = 0.0, ratio = 0.0;
};

struct BlowupScanReport {
    std::vector<BlowupScanRow> rows;
    double growth_ratio = 0.0;
    bool monotone = false;
    bool pass = false;
    double elapsed_seconds = 0.0;
};

/// Rejects (std::invalid_argument) an empty sample list or samples at or
/// past the blow-up time -a/b.
BlowupScanReport run_blowup_scan(const BlowupScanConfig& cfg);

/// log2(coarse/fine) for successive rungs.
std::vector<double> convergence_orders(const std::vector<double>& residuals);

/// Max modulus over nodes with |x1|,|x2| <= extent - margin, at least one
/// ring inside the boundary.
double max_abs_physical_interior(const ScalarField& f, double margin);
double max_abs_physical_interior(const RealField& f, double margin);

}  // namespace hypmap
