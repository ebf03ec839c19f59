#include <doctest.h>

#include <cmath>
#include <random>

#include "hypmap/exact.hpp"

using namespace hypmap;

TEST_CASE("validate_params: sign and amplitude conditions") {
    CHECK_NOTHROW((void)validate_params(1.0, -4.0, 1.0));
    CHECK_NOTHROW((void)validate_params(1.0, -4.0, -1.0));
    CHECK_NOTHROW((void)validate_params(-2.0, 8.0, 2.0));
    CHECK_THROWS_AS((void)validate_params(1.0, -4.0, 0.9), ParamAmplitudeError);
    CHECK_THROWS_AS((void)validate_params(1.0, 4.0, 1.0), ParamSignError);
    CHECK_THROWS_AS((void)validate_params(0.0, -4.0, 1.0), ParamSignError);
    CHECK(validate_params(1.0, -4.0, 1.0).blow_time() == doctest::Approx(0.25));
}

TEST_CASE("blowup_fields closed-form values") {
    const BlowupParams P{1.0, -4.0, 1.0};

    // z = 0: every term carries zbar or z zbar
    const GaugePoint at0 = blowup_fields(P, 0.1, Complex(0, 0));
    CHECK(at0.p == Complex(0, 0));
    CHECK(at0.q == Complex(0, 0));
    CHECK(at0.r == Complex(0, 0));
    CHECK(at0.u == 0.0);

    // t = 0, z = 1: q = e^{-2i}, r = e^{2i}, u = 2
    const GaugePoint f = blowup_fields(P, 0.0, Complex(1, 0));
    CHECK(std::abs(f.q - std::exp(Complex(0, -2))) <= 1e-15);
    CHECK(std::abs(f.r - std::exp(Complex(0, 2))) <= 1e-15);
    CHECK(f.u == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(f.p == Complex(0, 0));

    // at the blow-up time a + b t = 0
    CHECK_THROWS_AS((void)blowup_fields(P, 0.25, Complex(1, 0)), std::domain_error);
}

TEST_CASE("gradient lower bound equals |q| + |r|") {
    const BlowupParams P{1.0, -4.0, 1.0};
    CHECK(blowup_gradient_lower_bound(P, 0.0, Complex(0, 0)) == 0.0);
    CHECK(blowup_gradient_lower_bound(P, 0.0, Complex(1, 0)) == doctest::Approx(2.0));
    // amplification by 5 between t=0 and t=0.2
    CHECK(blowup_gradient_lower_bound(P, 0.2, Complex(1, 0)) == doctest::Approx(10.0));

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> d(-2.0, 2.0), tt(-0.5, 0.2);
    for (int k = 0; k < 300; ++k) {
        const Complex z(d(rng), d(rng));
        const double t = tt(rng);
        const GaugePoint f = blowup_fields(P, t, z);
        CHECK(std::abs(std::abs(f.q) + std::abs(f.r) - blowup_gradient_lower_bound(P, t, z)) <=
              1e-13);
    }
}

TEST_CASE("first-equation limit for amplitude-violating parameters") {
    // frozen from independent symbolic evaluation: |R_q| at z=1, t=0 for
    // (1, -4, 0.9) is |b^2/4 - 4 a^2| * zzb * |alpha zbar| = 0.76 * 0.9
    const BlowupParams P{1.0, -4.0, 0.9};
    CHECK(std::abs(blowup_first_equation_limit(P, 0.0, Complex(1, 0))) ==
          doctest::Approx(0.684).epsilon(1e-12));
    // exactly zero on the family
    const BlowupParams P0{1.0, -4.0, 1.0};
    CHECK(std::abs(blowup_first_equation_limit(P0, 0.0, Complex(1.3, -0.4))) <= 1e-15);
}

TEST_CASE("BlowupSampler zbar-derivatives match finite differences") {
    const BlowupParams P{1.0, -4.0, 1.0};
    const BlowupSampler s(P);
    const double eps = 1e-5;
    for (auto [x1, x2, t] : {std::array{0.7, -0.3, 0.0}, std::array{1.5, 1.1, 0.15}}) {
        // d_zbar = d_x1 + i d_x2 on the sampled q, r
        auto q_at = [&](double a, double b) { return s(t, a, b).q; };
        auto r_at = [&](double a, double b) { return s(t, a, b).r; };
        const Complex q_zb_fd = (q_at(x1 + eps, x2) - q_at(x1 - eps, x2)) / (2 * eps) +
                                Complex(0, 1) * (q_at(x1, x2 + eps) - q_at(x1, x2 - eps)) / (2 * eps);
        const Complex r_zb_fd = (r_at(x1 + eps, x2) - r_at(x1 - eps, x2)) / (2 * eps) +
                                Complex(0, 1) * (r_at(x1, x2 + eps) - r_at(x1, x2 - eps)) / (2 * eps);
        const GaugeSample gs = s(t, x1, x2);
        CHECK(std::abs(gs.q_zbar - q_zb_fd) <= 1e-8);
        CHECK(std::abs(gs.r_zbar - r_zb_fd) <= 1e-8);
    }
}

TEST_CASE("radial profile of the family and its time derivative") {
    const BlowupParams P{1.0, -4.0, 1.0};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int k = 0; k < 100; ++k) {
        const Complex z(d(rng), d(rng));
        if (std::abs(z) < 1e-3) continue;
        const double rho = 2.0 * std::abs(z);
        const Complex phase = std::exp(Complex(0, -std::arg(z)));
        const GaugePoint f = blowup_fields(P, 0.05, z);
        CHECK(std::abs(f.q - phase * blowup_radial_profile(P, 0.05, rho)) <= 1e-14);
    }
    // dQ/dt against a centered difference
    const double dt = 1e-6;
    for (double rho : {0.3, 1.0, 2.4}) {
        const Complex fd =
            (blowup_radial_profile(P, 0.1 + dt, rho) - blowup_radial_profile(P, 0.1 - dt, rho)) /
            (2 * dt);
        CHECK(std::abs(blowup_radial_profile_dt(P, 0.1, rho) - fd) <= 1e-7);
    }
}

TEST_CASE("radial_ansatz_fields") {
    RadialGrid g{300, 0.01};

    // zero profile: zero fields everywhere including the origin
    RadialProfile zero(g, std::vector<Complex>(g.n, Complex(0)), UAnchor::infinity_zero);
    const GaugePoint z0 = radial_ansatz_fields(zero, Complex(0.4, -0.2));
    CHECK(z0.q == Complex(0));
    CHECK(z0.u == 0.0);
    CHECK(radial_ansatz_fields(zero, Complex(0, 0)).q == Complex(0));

    // real profile on the positive x1 axis: theta = 0, q = Q real
    std::vector<Complex> smooth(g.n);
    for (int k = 0; k < g.n; ++k) smooth[k] = g.rho(k) * std::exp(-g.rho(k) * g.rho(k));
    RadialProfile prof(g, smooth, UAnchor::infinity_zero);
    const GaugePoint ax = radial_ansatz_fields(prof, Complex(0.5, 0.0));   // rho = 1
    CHECK(ax.q.imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ax.q.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(std::abs(ax.r - std::conj(ax.q)) <= 1e-14);

    // non-vanishing profile: phase singular at the origin
    std::vector<Complex> ones(g.n, Complex(1.0));
    RadialProfile bad(g, ones, UAnchor::infinity_zero);
    CHECK_THROWS_AS((void)radial_ansatz_fields(bad, Complex(0, 0)), std::domain_error);
    CHECK_NOTHROW((void)radial_ansatz_fields(bad, Complex(0.3, 0.0)));

    // Lemma-family profile embeds back to the closed-form fields
    const BlowupParams P{1.0, -4.0, 1.0};
    std::vector<Complex> lem(g.n);
    for (int k = 0; k < g.n; ++k) lem[k] = blowup_radial_profile(P, 0.0, g.rho(k));
    RadialProfile lemp(g, lem, UAnchor::origin_zero);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-0.7, 0.7);
    for (int k = 0; k < 50; ++k) {
        const Complex z(d(rng), d(rng));
        const GaugePoint emb = radial_ansatz_fields(lemp, z);
        const GaugePoint ref = blowup_fields(P, 0.0, z);
        CHECK(std::abs(emb.q - ref.q) <= 1e-6);
        CHECK(std::abs(emb.r - ref.r) <= 1e-6);
        CHECK(std::abs(emb.u - ref.u) <= 1e-6);
    }
}

TEST_CASE("RadialAnsatzSampler derivative identity q_zbar = Q' + Q/rho") {
    RadialGrid g{300, 0.01};
    std::vector<Complex> smooth(g.n);
    for (int k = 0; k < g.n; ++k)
        smooth[k] = g.rho(k) * std::exp(Complex(0.0, 0.5 * g.rho(k) * g.rho(k)));
    RadialProfile prof(g, smooth, UAnchor::origin_zero);
    RadialAnsatzSampler s(prof);
    const double eps = 1e-5;
    for (auto [x1, x2] : {std::array{0.8, 0.1}, std::array{-0.4, 1.2}}) {
        auto q_at = [&](double a, double b) { return s(0.0, a, b).q; };
        const Complex fd = (q_at(x1 + eps, x2) - q_at(x1 - eps, x2)) / (2 * eps) +
                           Complex(0, 1) * (q_at(x1, x2 + eps) - q_at(x1, x2 - eps)) / (2 * eps);
        CHECK(std::abs(s(0.0, x1, x2).q_zbar - fd) <= 1e-5);
    }
}
