#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hypmap/exact.hpp"
#include "hypmap/fields.hpp"
#include "hypmap/grid.hpp"

// The 1-D radial reduction: evolution and residuals for the
// integro-differential radial flow
//   i Q_t + Q_rr + Q_r/rho - Q/rho^2 - 2 Q u(Q) = 0
// and its embedding back into the 2-D gauged system.

namespace hypmap {

struct RadialState {
    RadialGrid grid;
    std::vector<Complex> Q;
    double t = 0.0;

    void validate() const;
};

struct RadialRhsOptions {
    UAnchor anchor = UAnchor::infinity_zero;
    double u_tail_beyond_R = 0.0;
    Complex outer_ghost{0.0, 0.0};   // Q value just beyond R (decay model)
};

/// dQ/dt = i [Q_rr + Q_r/rho - Q/rho^2 - 2 Q u]; central stencils with a
/// regularity ghost Q(0) = 0 at the origin and the decay-model ghost at the
/// outer edge; u from the trapezoid quadratures per the anchor convention.
std::vector<Complex> qq_rhs(const RadialState& state, const RadialRhsOptions& opt = {});

/// \int |Q|^2 rho drho (trapezoid, including the [0, rho_0] segment).
double radial_mass(const RadialState& state);

struct RadialEvolveOptions {
    double dt = 1e-5;
    int steps = 0;
    double cfl_c = 0.1;
    RadialRhsOptions rhs;
    /// Pinned value at the outer node; default holds the initial value.
    std::function<Complex(double t)> boundary;
    double blowup_threshold = 1e6;
    int snapshot_every = 0;   // 0: first and last only

    void validate(const RadialGrid& g) const;
};

enum class RadialStatus { completed, blowup_suspected };

struct RadialTrajectory {
    std::vector<RadialState> snapshots;
    std::vector<std::pair<double, double>> mass_series;   // (t, mass)
    RadialStatus status = RadialStatus::completed;
    int halted_step = -1;
    double mass_initial = 0.0, mass_final = 0.0;
};

/// RK4 trajectory with pinned outer boundary and a divergence detector:
/// when max|Q| exceeds the threshold the run halts with a flagged (not
/// erroneous) blow-up status.
RadialTrajectory evolve_radial(const RadialState& initial, const RadialEvolveOptions& opt);

/// Embed a radial state into 2-D gauge fields via the e^{-i theta} ansatz
/// with cubic interpolation of Q; nodes beyond R use the zero extension.
/// Throws std::domain_error when Q does not vanish linearly at the origin
/// (the phase is singular there) and the grid contains the origin.
GaugeFields embed_radial(const RadialState& state, const Grid2D& grid,
                         UAnchor anchor = UAnchor::infinity_zero, double u_tail_beyond_R = 0.0);

/// Radial state sampled from the blow-up family profile at time t.
RadialState blowup_radial_state(const BlowupParams& P, double t, const RadialGrid& g);

}  // namespace hypmap
