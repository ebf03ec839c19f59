#include "hypmap/exact.hpp"

#include <cmath>
#include <string>

namespace hypmap {

namespace {
constexpr double kBlowupGuard = 1e-14;

double scale_or_throw(const BlowupParams& P, double t) {
    const double T = P.a + P.b * t;
    if (std::abs(T) < kBlowupGuard)
        throw std::domain_error("blowup_fields: a + b t = " + std::to_string(T) +
                                " (at or past the blow-up time)");
    return T;
}
}  // namespace

BlowupParams validate_params(double a, double b, double alpha) {
    if (a * b >= 0.0)
        throw ParamSignError("blow-up family requires ab < 0 (got a=" + std::to_string(a) +
                             ", b=" + std::to_string(b) + ")");
    const BlowupParams P{a, b, alpha};
    if (std::abs(P.amplitude_defect()) > 1e-12)
        throw ParamAmplitudeError("amplitude condition alpha^2 = b^2/16 violated by " +
                                  std::to_string(P.amplitude_defect()));
    return P;
}

GaugePoint blowup_fields(const BlowupParams& P, double t, Complex z) {
    const double T = scale_or_throw(P, t);
    const Complex zb = std::conj(z);
    const double w = std::norm(z);
    const Complex E = std::exp(Complex(0.0, P.b * w / (2.0 * T)));
    GaugePoint out;
    out.p = Complex(0.0, 0.0);
    out.q = E * P.alpha * zb / T;
    out.r = std::conj(E) * P.alpha * zb / T;
    out.u = 2.0 * P.alpha * P.alpha * w / (T * T);
    return out;
}

double blowup_gradient_lower_bound(const BlowupParams& P, double t, Complex z) {
    const double T = scale_or_throw(P, t);
    return 2.0 * std::abs(P.alpha) * std::abs(z) / T;
}

Complex blowup_first_equation_limit(const BlowupParams& P, double t, Complex z) {
    const double T = scale_or_throw(P, t);
    const double w = std::norm(z);
    const Complex E = std::exp(Complex(0.0, P.b * w / (2.0 * T)));
    return (P.b * P.b / 4.0 - 4.0 * P.alpha * P.alpha) * w * P.alpha * std::conj(z) * E / (T * T * T);
}

GaugeSample BlowupSampler::operator()(double t, double x1, double x2) const {
    const Complex z(x1 / 2.0, x2 / 2.0);
    const double T = scale_or_throw(P_, t);
    const double w = std::norm(z);
    const Complex E = std::exp(Complex(0.0, P_.b * w / (2.0 * T)));
    const Complex phase_slope(0.0, P_.b * w / (2.0 * T));
    GaugeSample s;
    s.p = Complex(0.0, 0.0);
    s.q = E * P_.alpha * std::conj(z) / T;
    s.r = std::conj(E) * P_.alpha * std::conj(z) / T;
    s.u = 2.0 * P_.alpha * P_.alpha * w / (T * T);
    s.q_zbar = (P_.alpha / T) * E * (1.0 + phase_slope);
    s.r_zbar = (P_.alpha / T) * std::conj(E) * (1.0 - phase_slope);
    return s;
}

Complex blowup_radial_profile(const BlowupParams& P, double t, double rho) {
    const double T = scale_or_throw(P, t);
    return P.alpha * rho * std::exp(Complex(0.0, P.b * rho * rho / (8.0 * T))) / (2.0 * T);
}

Complex blowup_radial_profile_dt(const BlowupParams& P, double t, double rho) {
    const double T = scale_or_throw(P, t);
    const Complex Q = blowup_radial_profile(P, t, rho);
    return (-P.b / T) * Q - Complex(0.0, P.b * P.b * rho * rho / (8.0 * T * T)) * Q;
}

GaugePoint radial_ansatz_fields(const RadialProfile& Q, Complex z) {
    GaugePoint out;
    if (z == Complex(0.0, 0.0)) {
        if (!Q.vanishes_at_origin())
            throw std::domain_error(
                "radial_ansatz_fields: phase undefined at z = 0 for a profile with Q(0) != 0");
        out.u = Q.u(0.0);   // q, r vanish with Q ~ c rho; u has a finite limit
        return out;
    }
    const double rho = 2.0 * std::abs(z);
    const double theta = std::arg(z);
    const Complex phase = std::exp(Complex(0.0, -theta));
    const Complex Qv = Q.eval(rho);
    out.p = Complex(0.0, 0.0);
    out.q = phase * Qv;
    out.r = phase * std::conj(Qv);
    out.u = Q.u(rho);
    return out;
}

GaugeSample RadialAnsatzSampler::operator()(double /*t*/, double x1, double x2) const {
    const Complex z(x1 / 2.0, x2 / 2.0);
    const GaugePoint f = radial_ansatz_fields(*Q_, z);
    GaugeSample s;
    s.p = f.p;
    s.q = f.q;
    s.r = f.r;
    s.u = f.u;
    if (z == Complex(0.0, 0.0)) {
        // q_zbar = Q' + Q/rho -> 2 Q'(0) for Q ~ c rho.
        const Complex slope = Q_->eval_dQ(0.0);
        s.q_zbar = 2.0 * slope;
        s.r_zbar = std::conj(s.q_zbar);
    } else {
        const double rho = 2.0 * std::abs(z);
        const Complex Qv = Q_->eval(rho);
        const Complex dQ = Q_->eval_dQ(rho);
        s.q_zbar = dQ + Qv / rho;
        s.r_zbar = std::conj(s.q_zbar);
    }
    return s;
}

}  // namespace hypmap
