#pragma once

#include <stdexcept>

#include "hypmap/fields.hpp"
#include "hypmap/grid.hpp"

// Closed-form solution families: the explicit blow-up family of the gauged
// system and the radially symmetric ansatz. Evaluators here are the oracles
// for the rest of the library.

namespace hypmap {

struct ParamSignError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ParamAmplitudeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Parameters (a, b, alpha) of the blow-up family
//   p = 0,
//   q = e^{i b z zbar / (2(a+bt))} alpha zbar / (a+bt),
//   r = e^{-i b z zbar / (2(a+bt))} alpha zbar / (a+bt),
//   u = 2 alpha^2 z zbar / (a+bt)^2,
// a solution of the gauged system iff alpha^2 = b^2/16; defined for
// a + b t != 0 and blowing up as t -> -a/b when ab < 0.
struct BlowupParams {
    double a = 1.0;
    double b = -4.0;
    double alpha = 1.0;

    double blow_time() const { return -a / b; }
    /// alpha^2 - b^2/16; zero for members of the solution family.
    double amplitude_defect() const { return alpha * alpha - b * b / 16.0; }
};

/// Checked constructor: requires ab < 0 and |alpha^2 - b^2/16| <= 1e-12.
/// Distinct error types for the sign and amplitude violations.
BlowupParams validate_params(double a, double b, double alpha);

struct GaugePoint {
    Complex p{}, q{}, r{};
    double u = 0.0;
};

/// Field values at (t, z). Throws std::domain_error when |a+bt| < 1e-14
/// (at or past the blow-up time). Accepts any params, including
/// amplitude-violating ones (the resulting fields then fail the system's
/// first two equations by a computable amount).
GaugePoint blowup_fields(const BlowupParams& P, double t, Complex z);

/// 2 |alpha| |z| / (a+bt); equals |q| + |r| of blowup_fields.
double blowup_gradient_lower_bound(const BlowupParams& P, double t, Complex z);

/// Pointwise residual that the first equation of the system converges to
/// for amplitude-violating params: (b^2/4 - 4 alpha^2) z zbar alpha zbar
/// e^{i b z zbar/(2(a+bt))} / (a+bt)^3. Zero exactly on the family.
Complex blowup_first_equation_limit(const BlowupParams& P, double t, Complex z);

/// Sampler feeding the frame integrator: closed-form fields plus their
/// analytic zbar-derivatives.
class BlowupSampler final : public GaugeSampler {
public:
    explicit BlowupSampler(const BlowupParams& P) : P_(P) {}
    GaugeSample operator()(double t, double x1, double x2) const override;
    const BlowupParams& params() const { return P_; }

private:
    BlowupParams P_;
};

/// Radial profile of the blow-up family: Q(t, rho) = alpha rho
/// e^{i b rho^2/(8(a+bt))} / (2(a+bt)), with rho = 2|z|.
Complex blowup_radial_profile(const BlowupParams& P, double t, double rho);
/// Closed-form dQ/dt of the profile above, the oracle for the radial flow.
Complex blowup_radial_profile_dt(const BlowupParams& P, double t, double rho);

// Radial ansatz p = 0, q = e^{-i theta} Q(rho), r = e^{-i theta} conj(Q),
// u per the profile's anchor convention; rho = 2|z|, theta = arg z.
// At z = 0 returns zeros when Q vanishes linearly at the origin, else
// throws std::domain_error (the phase is undefined there).
GaugePoint radial_ansatz_fields(const RadialProfile& Q, Complex z);

/// Sampler for the ansatz fields (q_zbar = Q' + Q/rho, r_zbar = conj thereof).
class RadialAnsatzSampler final : public GaugeSampler {
public:
    explicit RadialAnsatzSampler(const RadialProfile& Q) : Q_(&Q) {}
    GaugeSample operator()(double t, double x1, double x2) const override;

private:
    const RadialProfile* Q_;
};

}  // namespace hypmap
