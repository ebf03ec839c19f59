#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hypmap/fields.hpp"

// Direct time evolution of the spin field under the hyperbolic
// Landau-Lifshitz flow s_t = sign * s x. (Laplacian s), with per-step
// retraction onto the hyperboloid and blow-up diagnostics.

namespace hypmap {

struct EvolveConfig {
    double dt = 1e-4;
    int steps = 0;
    int sign = +1;               // +1: s3 > 0 sheet convention, -1: mirrored flow
    int renormalize_every = 1;   // retraction cadence (per step)
    double cfl_c = 0.1;          // guard dt <= cfl_c * min(h)^2

    void validate(const Grid2D& g) const;
};

struct ConeExitError : std::runtime_error {
    int i = -1, j = -1, step = -1;
    ConeExitError(const std::string& msg, int i_, int j_, int step_)
        : std::runtime_error(msg), i(i_), j(j_), step(step_) {}
};

/// sign * pseudo_cross(s, laplacian s) per node. Tangent to the hyperboloid
/// wherever s lies on it.
SpinField evolution_rhs(const SpinField& S, int sign = +1);

/// One RK4 step; retraction fires when (step_index + 1) is a multiple of
/// cfg.renormalize_every. Throws ConeExitError if a node leaves the
/// timelike cone.
SpinField step(const SpinField& S, const EvolveConfig& cfg, int step_index = 0);

/// Dirichlet energy with the (+,+,-) metric on tangent vectors; nonnegative
/// for fields on the hyperboloid, zero for constant maps.
double energy(const SpinField& S);

/// Max over interior nodes of the six-term derivative modulus sum.
double sup_gradient(const SpinField& S, int margin = 1);

struct EvolveSample {
    int step = 0;
    double t = 0.0;
    double energy = 0.0;
    double sup_gradient = 0.0;
    double max_constraint_violation = 0.0;
};

struct EvolveResult {
    SpinField final;
    std::vector<EvolveSample> series;   // one entry per diagnostics cadence
    double max_constraint_violation = 0.0;
    double energy_initial = 0.0, energy_final = 0.0;
};

using SpinReference = std::function<Vec3(double t, double x1, double x2)>;

// Run `cfg.steps` steps from S0. With dirichlet_reference boundaries the
// edge nodes are pinned: to `boundary(t, x1, x2)` when provided, else to
// their initial values. `diag_every` controls the diagnostics cadence
// (0: only first/last). Optional `on_snapshot` receives (step, t, field).
EvolveResult run_evolution(
    const SpinField& S0, const EvolveConfig& cfg, const SpinReference& boundary = nullptr,
    int diag_every = 0,
    const std::function<void(int, double, const SpinField&)>& on_snapshot = nullptr,
    int snapshot_every = 0);

/// Constant map `base` plus a compactly supported tangent bump of the given
/// amplitudes and support radius (mollifier exp(1 - 1/(1 - (rho/R)^2))),
/// retracted onto the hyperboloid. Smooth, equals `base` outside the bump.
SpinField bump_initial_data(const Grid2D& g, const Vec3& base, double amp1, double amp2,
                            double radius, double x1c = 0.0, double x2c = 0.0);

}  // namespace hypmap
