#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hypmap/fields.hpp"

// Everything connecting a spin field S and the gauged fields (p, q, r, u):
// constraint and system residuals, the connection matrices and their
// compatibility, path-ordered frame integration, reconstruction
// S = -i G sigma3 G^{-1}, and the inverse decomposition S -> G -> fields.

namespace hypmap {

struct ConstraintResidual {
    ScalarField res1;   // pbar_z + p_zbar + |q|^2 - |r|^2
    ScalarField res2;   // -rbar_z + q_zbar + 2 (p rbar + pbar q)
};

/// Discrete residuals of the two first-order constraints.
ConstraintResidual constraint_residual(const GaugeFields& f, int order = 2);

struct SystemResidual {
    ScalarField R_q, R_r, R_p;
};

/// Discrete residuals of the three evolution equations, with a central time
/// difference over three consecutive slices.
SystemResidual system_residual(const GaugeFields& prev, const GaugeFields& cur,
                               const GaugeFields& next, double dt, int order = 2);

using MatrixField = Field<Mat2>;

// Connection matrices per node: U = ((p, q), (r, -p)), P = ((pbar, -rbar),
// (-qbar, -pbar)), H = ((0, -2 q pbar), (-2 r pbar, 0)).
MatrixField connection_U(const GaugeFields& f);
MatrixField connection_P(const GaugeFields& f);
MatrixField connection_H(const GaugeFields& f);

// Accessors for the real-coordinate form of the frame system:
// psi = (q + rbar)/2, phi = i (q - rbar)/2, p = Re p + i Im p.
ScalarField psi_field(const GaugeFields& f);
ScalarField phi_field(const GaugeFields& f);

/// P_z + U_zbar + [P, U] per node. Entrywise this assembles the constraint
/// residuals: ((res1, res2), (-conj res2, -res1)) at stencil level.
MatrixField compatibility_residual(const GaugeFields& f, int order = 2);

double max_abs_interior(const MatrixField& m, int margin = 1);

// ---- frame integration ---------------------------------------------------

struct FrameSlice {
    Grid2D grid;
    double t = 0.0;
    std::vector<GroupElement> g;

    GroupElement& at(int i, int j) { return g[grid.index(i, j)]; }
    const GroupElement& at(int i, int j) const { return g[grid.index(i, j)]; }
    double max_unit_defect() const;
};

enum class SweepOrder { x1_major, x2_major };

struct FrameIntegrationOptions {
    SweepOrder sweep = SweepOrder::x1_major;
    int spatial_substeps = 1;        // RK4 steps per grid cell
    double time_substep_cap = 0.05;  // target generator-norm * dt per substep
    int min_time_substeps = 4;
    bool check_admissibility = true;
    double admissibility_tol = -1.0;   // < 0: auto, 100 h^2 * field scale
    double projection_limit = 1e-4;    // max tolerated re-projection factor |sqrt(d)-1|
};

struct FrameTrajectory {
    std::vector<FrameSlice> slices;
    double max_unit_defect = 0.0;            // after re-projection
    double max_projection_correction = 0.0;  // largest |sqrt(|nu|^2-|chi|^2) - 1| seen
    double max_constraint_residual = 0.0;    // admissibility measure of the input
};

// Path-ordered integration of the linear frame system
//   G_x1 = -G ((i Im p, psi), (conj psi, -i Im p)),
//   G_x2 = -G ((i Re p, phi), (conj phi, -i Re p)),
//   G_t  =  G i ((u, -(q_zbar + 2 pbar q)), (r_zbar - 2 pbar r, -u)),
// by RK4 from the grid's center node: along the x1 axis, then along x2 per
// column (or transposed, per options.sweep), then in t per node for the
// remaining requested times. Every step is followed by re-projection onto
// SU(1,1). The grid must have odd nx, ny (center node = path origin).
//
// Throws std::invalid_argument for non-admissible fields (constraint
// residual above tolerance) and std::runtime_error when the re-projection
// correction exceeds options.projection_limit (step size too large).
FrameTrajectory integrate_frame(const GaugeSampler& fields, const Grid2D& grid,
                                std::span<const double> times, const GroupElement& G0 = {},
                                const FrameIntegrationOptions& options = {});

/// max over nodes of |dnu| + |dchi| between two frames on one grid.
double frame_distance(const FrameSlice& A, const FrameSlice& B);

/// S = -i G sigma3 G^{-1} per node; lands on the s3 < 0 sheet and satisfies
/// the hyperboloid constraint to the frame's unit defect.
SpinField reconstruct_spin(const FrameSlice& frame);

// ---- decomposition --------------------------------------------------------

struct DecomposeOptions {
    enum class Gamma { unit, diagonal_killing } gamma = Gamma::unit;
    /// Explicit phase field theta (gamma = e^{i theta}); overrides `gamma`.
    const RealField* gamma_phase = nullptr;
    double sigma3_tol = 1e-10;
    double u_imag_tol = 1e-8;
    int stencil_order = 2;
};

struct Decomposition {
    FrameSlice frame;
    GaugeFields fields;
    double max_sigma3_defect = 0.0;
    double max_u_imag = 0.0;   // su(1,1) defect of the extracted time generator
};

// Inverse of the reconstruction: per node G = (S - i sigma3)/sqrt(2(1-s3))
// times diag(gamma, conj gamma), then U = -G^{-1} G_z (central stencils),
// P = G^{-1} G_zbar, and u from the diagonal of -i G^{-1} G_t (central time
// difference over the three slices). Requires s3 < 0 everywhere.
//
// gamma = unit reproduces fields up to the gauge freedom (phases of q, r and
// the whole of p, u shift with gamma); diagonal_killing integrates a phase
// along the sweep path to null the recovered p, which also pins u.
Decomposition decompose_spin(const SpinField& prev, const SpinField& cur, const SpinField& next,
                             double dt, const DecomposeOptions& options = {});

// ---- gradient bound --------------------------------------------------------

struct GradientBoundReport {
    double min_slack = 0.0;   // min over interior of |grad S| + allowance - (|q|+|r|)
    double max_qr = 0.0;
    double max_grad = 0.0;
    double allowance = 0.0;
    bool holds = false;
};

/// Checks |q| + |r| <= |grad S| + allowance per interior node, where
/// |grad S| is the six-term sum of derivative moduli of the components.
/// allowance < 0 selects 10 h^2 * (third-derivative estimate).
GradientBoundReport gradient_bound_check(const SpinField& S, const GaugeFields& f,
                                         double allowance = -1.0);

/// Six-term derivative modulus sum per node.
RealField spin_gradient_sum(const SpinField& S, int order = 2);

}  // namespace hypmap
