#include <doctest.h>

#include <cmath>

#include "hypmap/grid.hpp"

using namespace hypmap;

namespace {

ScalarField sample(const Grid2D& g, Complex (*f)(double, double)) {
    return ScalarField::sampled(g, [&](double x1, double x2) { return f(x1, x2); });
}

double order_of(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_CASE("Grid2D validation") {
    CHECK_THROWS_AS(Grid2D::centered(4, 0.1, BoundaryMode::periodic), std::invalid_argument);
    CHECK_THROWS_AS((Grid2D{3, 3, 0.1, 0.1, 0, 0, BoundaryMode::periodic}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((Grid2D{9, 9, -0.1, 0.1, 0, 0, BoundaryMode::periodic}.validate()),
                    std::invalid_argument);
    const Grid2D g = Grid2D::centered(11, 0.5, BoundaryMode::dirichlet_reference);
    CHECK(g.x1(5) == 0.0);
    CHECK(g.z(5, 5) == Complex(0, 0));
}

TEST_CASE("d_z and d_zbar on linear fields are exact in the interior") {
    const Grid2D g = Grid2D::centered(21, 0.1, BoundaryMode::dirichlet_reference);
    const ScalarField fz = sample(g, [](double x1, double x2) { return Complex(x1, x2) / 2.0; });
    const ScalarField fzb = sample(g, [](double x1, double x2) { return Complex(x1, -x2) / 2.0; });

    const ScalarField dz_z = d_z(fz), dz_zb = d_z(fzb);
    const ScalarField dzb_z = d_zbar(fz), dzb_zb = d_zbar(fzb);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            CHECK(std::abs(dz_z.at(i, j) - 1.0) <= 1e-13);
            CHECK(std::abs(dz_zb.at(i, j)) <= 1e-13);
            CHECK(std::abs(dzb_zb.at(i, j) - 1.0) <= 1e-13);
            CHECK(std::abs(dzb_z.at(i, j)) <= 1e-13);
        }
}

TEST_CASE("second-order convergence of d_z on exp(x1)") {
    double errs[2];
    int idx = 0;
    for (double h : {0.1, 0.05}) {
        const int n = static_cast<int>(std::lround(2.0 / h)) + 1;
        const Grid2D g = Grid2D::centered(n, h, BoundaryMode::dirichlet_reference);
        const ScalarField f = sample(g, [](double x1, double) { return Complex(std::exp(x1)); });
        const ScalarField df = d_z(f);
        double e = 0.0;
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i)
                e = std::max(e, std::abs(df.at(i, j) - std::exp(g.x1(i))));
        errs[idx++] = e;
    }
    CHECK(order_of(errs[0], errs[1]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("d_z(d_zbar(z zbar)) = 1 and matches the Laplacian") {
    const Grid2D g = Grid2D::centered(41, 0.05, BoundaryMode::dirichlet_reference);
    const ScalarField f =
        sample(g, [](double x1, double x2) { return Complex((x1 * x1 + x2 * x2) / 4.0); });
    const ScalarField dd = d_z(d_zbar(f));
    const ScalarField lap = laplacian(f);
    for (int j = 2; j < g.ny - 2; ++j)
        for (int i = 2; i < g.nx - 2; ++i) {
            CHECK(std::abs(dd.at(i, j) - 1.0) <= 1e-11);
            CHECK(std::abs(lap.at(i, j) - 1.0) <= 1e-11);
        }
}

TEST_CASE("laplacian: polynomial exactness, constants, and convergence") {
    const Grid2D g = Grid2D::centered(21, 0.1, BoundaryMode::dirichlet_reference);
    const ScalarField f =
        sample(g, [](double x1, double x2) { return Complex(x1 * x1 + x2 * x2); });
    const ScalarField lf = laplacian(f);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) CHECK(std::abs(lf.at(i, j) - 4.0) <= 1e-12);

    const ScalarField c = sample(g, [](double, double) { return Complex(3.25); });
    CHECK(max_abs_interior(laplacian(c), 0) <= 1e-12);

    double errs[2];
    int idx = 0;
    for (double h : {0.1, 0.05}) {
        const int n = static_cast<int>(std::lround(2.0 / h)) + 1;
        const Grid2D gg = Grid2D::centered(n, h, BoundaryMode::dirichlet_reference);
        const ScalarField s =
            sample(gg, [](double x1, double x2) { return Complex(std::sin(x1) * std::sin(x2)); });
        const ScalarField ls = laplacian(s);
        double e = 0.0;
        for (int j = 1; j < gg.ny - 1; ++j)
            for (int i = 1; i < gg.nx - 1; ++i)
                e = std::max(e,
                             std::abs(ls.at(i, j) + 2.0 * std::sin(gg.x1(i)) * std::sin(gg.x2(j))));
        errs[idx++] = e;
    }
    CHECK(order_of(errs[0], errs[1]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("composition identity converges at 2nd order") {
    double errs[2];
    int idx = 0;
    for (double h : {0.1, 0.05}) {
        const int n = static_cast<int>(std::lround(2.0 / h)) + 1;
        const Grid2D g = Grid2D::centered(n, h, BoundaryMode::dirichlet_reference);
        const ScalarField f = sample(
            g, [](double x1, double x2) { return std::exp(Complex(0.3 * x1, 0.7 * x2)); });
        const ScalarField a = laplacian(f);
        const ScalarField b = d_z(d_zbar(f));
        double e = 0.0;
        for (int j = 2; j < g.ny - 2; ++j)
            for (int i = 2; i < g.nx - 2; ++i) e = std::max(e, std::abs(a.at(i, j) - b.at(i, j)));
        errs[idx++] = e;
    }
    CHECK(order_of(errs[0], errs[1]) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("conjugate compatibility d_zbar(conj f) == conj(d_z f) exactly") {
    for (BoundaryMode mode : {BoundaryMode::dirichlet_reference, BoundaryMode::periodic}) {
        const Grid2D g = Grid2D::centered(17, 0.13, mode);
        const ScalarField f = sample(g, [](double x1, double x2) {
            return std::exp(Complex(0.2 * x2, 1.1 * x1)) + Complex(x1, -0.3 * x2);
        });
        const ScalarField lhs = d_zbar(conj(f));
        const ScalarField rhs = conj(d_z(f));
        for (std::size_t k = 0; k < lhs.v.size(); ++k) CHECK(lhs.v[k] == rhs.v[k]);
    }
}

TEST_CASE("periodic wrap and 4th-order stencils") {
    const double pi = 3.14159265358979323846;
    double errs2[2], errs4[2];
    int idx = 0;
    for (int n : {32, 64}) {
        Grid2D g;
        g.nx = g.ny = n;
        g.hx = g.hy = 2.0 * pi / n;
        g.x1_min = g.x2_min = 0.0;
        g.boundary = BoundaryMode::periodic;
        const ScalarField f =
            sample(g, [](double x1, double x2) { return Complex(std::sin(x1 + 2.0 * x2)); });
        double e2 = 0.0, e4 = 0.0;
        const ScalarField d2 = d_x1(f, 2), d4 = d_x1(f, 4);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double ref = std::cos(g.x1(i) + 2.0 * g.x2(j));
                e2 = std::max(e2, std::abs(d2.at(i, j) - ref));
                e4 = std::max(e4, std::abs(d4.at(i, j) - ref));
            }
        errs2[idx] = e2;
        errs4[idx] = e4;
        ++idx;
    }
    CHECK(order_of(errs2[0], errs2[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(order_of(errs4[0], errs4[1]) == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("integrate: trapezoid weights recover the cell count") {
    const Grid2D g = Grid2D::centered(11, 0.25, BoundaryMode::dirichlet_reference);
    RealField one(g, 1.0);
    // trapezoid of a constant over [-1.25, 1.25]^2
    CHECK(integrate(one) == doctest::Approx(2.5 * 2.5).epsilon(1e-12));
}

TEST_CASE("radial_tail_integral") {
    RadialGrid g{3000, 1e-3};
    std::vector<Complex> zero(g.n, Complex(0.0));
    for (int k : {0, 1000, 2999}) CHECK(radial_tail_integral(g, zero, k) == 0.0);

    // indicator of [1, e]: integral from rho=1 is log(e) - log(1) = 1
    std::vector<Complex> ind(g.n);
    for (int k = 0; k < g.n; ++k) {
        const double rho = g.rho(k);
        ind[k] = (rho >= 1.0 && rho <= std::exp(1.0)) ? 1.0 : 0.0;
    }
    const int k1 = 999;   // rho = 1
    CHECK(g.rho(k1) == doctest::Approx(1.0));
    CHECK(radial_tail_integral(g, ind, k1) == doctest::Approx(1.0).epsilon(2e-3));

    // support entirely below rho: zero
    const int khigh = 2800;   // rho = 2.801 > e
    CHECK(radial_tail_integral(g, ind, khigh) == 0.0);

    CHECK_THROWS_AS((void)radial_tail_integral(g, ind, -1), std::out_of_range);
    CHECK_THROWS_AS((void)radial_tail_integral(g, ind, g.n), std::out_of_range);

    // smooth profile: 2nd-order convergence to the closed form
    // |Q|^2 = rho^2 e^{-2 rho^2}  =>  int_rho^inf |Q|^2/tau dtau = e^{-2 rho^2}/4
    double errs[2];
    int idx = 0;
    for (double h : {0.01, 0.005}) {
        RadialGrid gg{static_cast<int>(std::lround(6.0 / h)), h};
        std::vector<Complex> Q(gg.n);
        for (int k = 0; k < gg.n; ++k) Q[k] = gg.rho(k) * std::exp(-gg.rho(k) * gg.rho(k));
        double e = 0.0;
        for (int k = 0; k < gg.n; k += 37) {
            const double ref = std::exp(-2.0 * gg.rho(k) * gg.rho(k)) / 4.0;
            e = std::max(e, std::abs(radial_tail_integral(gg, Q, k) - ref));
        }
        errs[idx++] = e;
    }
    CHECK(order_of(errs[0], errs[1]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("RadialProfile interpolation and u anchors") {
    RadialGrid g{400, 0.01};
    std::vector<Complex> Q(g.n);
    for (int k = 0; k < g.n; ++k) Q[k] = g.rho(k) * std::exp(-g.rho(k) * g.rho(k));

    RadialProfile prof(g, Q, UAnchor::infinity_zero);
    CHECK(prof.vanishes_at_origin());
    for (double rho : {0.004, 0.503, 1.2505, 3.33}) {
        const double ref = rho * std::exp(-rho * rho);
        CHECK(std::abs(prof.eval(rho) - ref) <= 1e-8);
        const double dref = (1.0 - 2.0 * rho * rho) * std::exp(-rho * rho);
        CHECK(std::abs(prof.eval_dQ(rho) - dref) <= 1e-6);
    }
    CHECK(prof.eval(g.R() + 0.5) == Complex(0.0));
    // u with decay anchor: |Q|^2 - 2 * e^{-2 rho^2}/4 (tail beyond R ~ e^{-32})
    for (double rho : {0.5, 1.0, 2.0}) {
        const double q2 = rho * rho * std::exp(-2.0 * rho * rho);
        const double ref = q2 - 0.5 * std::exp(-2.0 * rho * rho);
        CHECK(prof.u(rho) == doctest::Approx(ref).epsilon(1e-4));
    }

    // step profile: u(1) = |Q(1)|^2 - 2 * 1 = -1
    RadialGrid gs{3000, 1e-3};
    std::vector<Complex> ind(gs.n);
    for (int k = 0; k < gs.n; ++k)
        ind[k] = (gs.rho(k) >= 1.0 && gs.rho(k) <= std::exp(1.0)) ? 1.0 : 0.0;
    RadialProfile step(gs, ind, UAnchor::infinity_zero);
    CHECK(step.u(1.0) == doctest::Approx(-1.0).epsilon(5e-3));
    CHECK_FALSE(step.vanishes_at_origin() == false);   // vanishes: Q = 0 near 0

    // origin anchor on a linear-growth profile reproduces the quadratic closed form:
    // Q = rho/2 => |Q|^2 + 2 int_0^rho tau/4 dtau = rho^2/2
    std::vector<Complex> lin(g.n);
    for (int k = 0; k < g.n; ++k) lin[k] = 0.5 * g.rho(k);
    RadialProfile linp(g, lin, UAnchor::origin_zero);
    for (double rho : {0.3, 1.7, 3.9})
        CHECK(linp.u(rho) == doctest::Approx(rho * rho / 2.0).epsilon(1e-10));
}
