#pragma once

#include <cassert>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hypmap/minkowski.hpp"

// Uniform 2-D grids, the z/zbar derivative convention, finite-difference
// stencils and quadrature. The single home for discretization choices.
//
// Convention: z = (x1 + i x2)/2, so d_z = d/dx1 - i d/dx2 and
// d_zbar = d/dx1 + i d/dx2; d_z d_zbar is the plain Laplacian.

namespace hypmap {

enum class BoundaryMode { dirichlet_reference, periodic };

std::string to_string(BoundaryMode m);
BoundaryMode boundary_mode_from_string(const std::string& s);

struct Grid2D {
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;
    double x1_min = 0.0, x2_min = 0.0;
    BoundaryMode boundary = BoundaryMode::dirichlet_reference;

    double x1(int i) const { return x1_min + i * hx; }
    double x2(int j) const { return x2_min + j * hy; }
    Complex z(int i, int j) const { return Complex(x1(i), x2(j)) / 2.0; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }

    bool operator==(const Grid2D&) const = default;

    /// Throws std::invalid_argument unless nx,ny >= 5 and hx,hy > 0.
    void validate() const;

    /// Symmetric grid [-L, L]^2 with n nodes per side; n must be odd so the
    /// origin is a grid node (required by radial sampling and the frame path).
    static Grid2D centered(int n, double h, BoundaryMode mode);
};

template <class T>
struct Field {
    Grid2D grid;
    std::vector<T> v;

    Field() = default;
    explicit Field(const Grid2D& g, T fill = T{}) : grid(g), v(g.size(), fill) {}

    T& at(int i, int j) { return v[grid.index(i, j)]; }
    const T& at(int i, int j) const { return v[grid.index(i, j)]; }

    template <class F>
    static Field sampled(const Grid2D& g, F&& f) {
        Field out(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) out.at(i, j) = f(g.x1(i), g.x2(j));
        return out;
    }
};

using ScalarField = Field<Complex>;
using RealField = Field<double>;

// First and second partial derivatives along each axis. `order` is 2
// (default) or 4; with dirichlet_reference boundaries the edge closure is
// one-sided 2nd order in either case, periodic grids wrap exactly.
ScalarField d_x1(const ScalarField& f, int order = 2);
ScalarField d_x2(const ScalarField& f, int order = 2);
RealField d_x1(const RealField& f, int order = 2);
RealField d_x2(const RealField& f, int order = 2);

/// d_z f = d_x1 f - i d_x2 f.
ScalarField d_z(const ScalarField& f, int order = 2);
/// d_zbar f = d_x1 f + i d_x2 f.
ScalarField d_zbar(const ScalarField& f, int order = 2);
ScalarField d_z(const RealField& f, int order = 2);
ScalarField d_zbar(const RealField& f, int order = 2);

/// 5-point (or 9-point for order 4) Laplacian; equals d_z(d_zbar(.)) up to
/// truncation under the convention above.
ScalarField laplacian(const ScalarField& f, int order = 2);
RealField laplacian(const RealField& f, int order = 2);

ScalarField conj(const ScalarField& f);

/// Max modulus over nodes at least `margin` rings inside the boundary.
double max_abs_interior(const ScalarField& f, int margin = 1);
double max_abs_interior(const RealField& f, int margin = 1);

/// Trapezoid sum with half-weights on dirichlet_reference edges and plain
/// cell-area weights on periodic grids.
double integrate(const RealField& f);

// ---- radial grid and quadrature ----------------------------------------

// Uniform radial grid rho_k = (k+1) h_rho, k = 0..n-1; the origin is
// excluded (1/rho and 1/rho^2 terms are singular there), R = n h_rho.
struct RadialGrid {
    int n = 0;
    double h_rho = 0.0;

    double rho(int k) const { return (k + 1) * h_rho; }
    double R() const { return n * h_rho; }
    void validate() const;   // n >= 8, h_rho > 0
};

/// Composite trapezoid of \int_{rho_k}^{R} |Q|^2 / tau dtau plus an analytic
/// tail correction for the region beyond R (zero for the default decaying
/// extension). Throws std::out_of_range for a bad index.
double radial_tail_integral(const RadialGrid& grid, std::span<const Complex> Q, int rho_index,
                            double tail_beyond_R = 0.0);

// Anchoring convention for the nonlocal potential u built from Q:
//  - infinity_zero: u = |Q|^2 - 2 \int_rho^inf |Q|^2/tau dtau (needs decay),
//  - origin_zero:   u = |Q|^2 + 2 \int_0^rho |Q|^2/tau dtau (u(0) = 0).
// The two differ by a constant in rho, a residual gauge freedom of the
// system; origin_zero is the usable form for profiles that grow at infinity.
enum class UAnchor { infinity_zero, origin_zero };

std::string to_string(UAnchor a);

// Radial profile with cubic interpolation: samples on a RadialGrid, a ghost
// value Q(0) = 0, zero extension beyond R (plus optional analytic tail for
// the u integral). eval/eval_dQ are 4-point Lagrange formulas, O(h^4).
class RadialProfile {
public:
    RadialProfile(RadialGrid grid, std::vector<Complex> Q, UAnchor anchor = UAnchor::infinity_zero,
                  double u_tail_beyond_R = 0.0);

    const RadialGrid& grid() const { return grid_; }
    std::span<const Complex> samples() const { return Q_; }
    UAnchor anchor() const { return anchor_; }

    Complex eval(double rho) const;
    Complex eval_dQ(double rho) const;
    /// Nonlocal potential per the anchor convention.
    double u(double rho) const;
    /// True when |Q| vanishes linearly at the origin (smoothness of the
    /// e^{-i theta} ansatz requires it).
    bool vanishes_at_origin() const;

private:
    double cum_at(double rho) const;   // interpolated \int_0^rho |Q|^2/tau

    RadialGrid grid_;
    std::vector<Complex> Q_;           // with ghost at index 0: Q(0) = 0
    std::vector<double> cum_;          // cumulative trapezoid of |Q|^2/tau from 0
    UAnchor anchor_;
    double u_tail_ = 0.0;
};

}  // namespace hypmap
