#include "hypmap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypmap {

std::string to_string(BoundaryMode m) {
    return m == BoundaryMode::periodic ? "periodic" : "dirichlet_reference";
}

BoundaryMode boundary_mode_from_string(const std::string& s) {
    if (s == "periodic") return BoundaryMode::periodic;
    if (s == "dirichlet_reference") return BoundaryMode::dirichlet_reference;
    throw std::invalid_argument("unknown boundary mode: " + s);
}

void Grid2D::validate() const {
    if (nx < 5 || ny < 5)
        throw std::invalid_argument("Grid2D: need nx, ny >= 5");
    if (hx <= 0.0 || hy <= 0.0)
        throw std::invalid_argument("Grid2D: need hx, hy > 0");
}

Grid2D Grid2D::centered(int n, double h, BoundaryMode mode) {
    if (n % 2 == 0)
        throw std::invalid_argument("Grid2D::centered: n must be odd (origin on a node)");
    Grid2D g;
    g.nx = g.ny = n;
    g.hx = g.hy = h;
    g.x1_min = g.x2_min = -h * (n / 2);
    g.boundary = mode;
    g.validate();
    return g;
}

namespace {

// One-dimensional derivative pass along an axis. `stride` walks the axis,
// `count` nodes per line, `lines` lines, `line_stride` between lines.
template <class T>
void deriv_line(const T* in, T* out, int count, std::ptrdiff_t stride, double h, bool periodic,
                int order, bool second) {
    auto at = [&](int k) { return in[k * stride]; };
    auto wrap = [&](int k) { return in[((k % count) + count) % count * stride]; };
    if (second) {
        const double ih2 = 1.0 / (h * h);
        for (int k = 0; k < count; ++k) {
            T val;
            if (periodic) {
                if (order == 4)
                    val = (-wrap(k + 2) + 16.0 * wrap(k + 1) - 30.0 * wrap(k) + 16.0 * wrap(k - 1) -
                           wrap(k - 2)) * (ih2 / 12.0);
                else
                    val = (wrap(k + 1) - 2.0 * wrap(k) + wrap(k - 1)) * ih2;
            } else if (k == 0) {
                val = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) * ih2;
            } else if (k == count - 1) {
                val = (2.0 * at(k) - 5.0 * at(k - 1) + 4.0 * at(k - 2) - at(k - 3)) * ih2;
            } else if (order == 4 && k >= 2 && k <= count - 3) {
                val = (-at(k + 2) + 16.0 * at(k + 1) - 30.0 * at(k) + 16.0 * at(k - 1) - at(k - 2)) *
                      (ih2 / 12.0);
            } else {
                val = (at(k + 1) - 2.0 * at(k) + at(k - 1)) * ih2;
            }
            out[k * stride] = val;
        }
    } else {
        const double ih = 1.0 / h;
        for (int k = 0; k < count; ++k) {
            T val;
            if (periodic) {
                if (order == 4)
                    val = (-wrap(k + 2) + 8.0 * wrap(k + 1) - 8.0 * wrap(k - 1) + wrap(k - 2)) *
                          (ih / 12.0);
                else
                    val = (wrap(k + 1) - wrap(k - 1)) * (0.5 * ih);
            } else if (k == 0) {
                val = (-3.0 * at(0) + 4.0 * at(1) - at(2)) * (0.5 * ih);
            } else if (k == count - 1) {
                val = (3.0 * at(k) - 4.0 * at(k - 1) + at(k - 2)) * (0.5 * ih);
            } else if (order == 4 && k >= 2 && k <= count - 3) {
                val = (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) * (ih / 12.0);
            } else {
                val = (at(k + 1) - at(k - 1)) * (0.5 * ih);
            }
            out[k * stride] = val;
        }
    }
}

template <class T>
Field<T> axis_deriv(const Field<T>& f, int axis, int order, bool second) {
    f.grid.validate();
    if (order != 2 && order != 4)
        throw std::invalid_argument("stencil order must be 2 or 4");
    Field<T> out(f.grid);
    const bool periodic = f.grid.boundary == BoundaryMode::periodic;
    if (axis == 0) {
        for (int j = 0; j < f.grid.ny; ++j)
            deriv_line(f.v.data() + f.grid.index(0, j), out.v.data() + f.grid.index(0, j),
                       f.grid.nx, 1, f.grid.hx, periodic, order, second);
    } else {
        for (int i = 0; i < f.grid.nx; ++i)
            deriv_line(f.v.data() + f.grid.index(i, 0), out.v.data() + f.grid.index(i, 0),
                       f.grid.ny, f.grid.nx, f.grid.hy, periodic, order, second);
    }
    return out;
}

}  // namespace

ScalarField d_x1(const ScalarField& f, int order) { return axis_deriv(f, 0, order, false); }
ScalarField d_x2(const ScalarField& f, int order) { return axis_deriv(f, 1, order, false); }
RealField d_x1(const RealField& f, int order) { return axis_deriv(f, 0, order, false); }
RealField d_x2(const RealField& f, int order) { return axis_deriv(f, 1, order, false); }

namespace {

ScalarField combine_dz(const ScalarField& fx, const ScalarField& fy, double sign) {
    ScalarField out(fx.grid);
    for (std::size_t k = 0; k < out.v.size(); ++k)
        out.v[k] = fx.v[k] + Complex(0.0, sign) * fy.v[k];
    return out;
}

ScalarField combine_dz(const RealField& fx, const RealField& fy, double sign) {
    ScalarField out(fx.grid);
    for (std::size_t k = 0; k < out.v.size(); ++k)
        out.v[k] = Complex(fx.v[k], sign * fy.v[k]);
    return out;
}

}  // namespace

ScalarField d_z(const ScalarField& f, int order) { return combine_dz(d_x1(f, order), d_x2(f, order), -1.0); }
ScalarField d_zbar(const ScalarField& f, int order) { return combine_dz(d_x1(f, order), d_x2(f, order), +1.0); }
ScalarField d_z(const RealField& f, int order) { return combine_dz(d_x1(f, order), d_x2(f, order), -1.0); }
ScalarField d_zbar(const RealField& f, int order) { return combine_dz(d_x1(f, order), d_x2(f, order), +1.0); }

namespace {
template <class T>
Field<T> laplacian_impl(const Field<T>& f, int order) {
    Field<T> xx = axis_deriv(f, 0, order, true);
    const Field<T> yy = axis_deriv(f, 1, order, true);
    for (std::size_t k = 0; k < xx.v.size(); ++k) xx.v[k] += yy.v[k];
    return xx;
}
}  // namespace

ScalarField laplacian(const ScalarField& f, int order) { return laplacian_impl(f, order); }
RealField laplacian(const RealField& f, int order) { return laplacian_impl(f, order); }

ScalarField conj(const ScalarField& f) {
    ScalarField out(f.grid);
    for (std::size_t k = 0; k < f.v.size(); ++k) out.v[k] = std::conj(f.v[k]);
    return out;
}

namespace {
template <class T>
double max_abs_interior_impl(const Field<T>& f, int margin) {
    double m = 0.0;
    for (int j = margin; j < f.grid.ny - margin; ++j)
        for (int i = margin; i < f.grid.nx - margin; ++i)
            m = std::max(m, std::abs(f.at(i, j)));
    return m;
}
}  // namespace

double max_abs_interior(const ScalarField& f, int margin) { return max_abs_interior_impl(f, margin); }
double max_abs_interior(const RealField& f, int margin) { return max_abs_interior_impl(f, margin); }

double integrate(const RealField& f) {
    const Grid2D& g = f.grid;
    double sum = 0.0;
    if (g.boundary == BoundaryMode::periodic) {
        for (double x : f.v) sum += x;
    } else {
        for (int j = 0; j < g.ny; ++j) {
            const double wj = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
            for (int i = 0; i < g.nx; ++i) {
                const double wi = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
                sum += wi * wj * f.at(i, j);
            }
        }
    }
    return sum * g.hx * g.hy;
}

// ---- radial -------------------------------------------------------------

void RadialGrid::validate() const {
    if (n < 8) throw std::invalid_argument("RadialGrid: need n >= 8");
    if (h_rho <= 0.0) throw std::invalid_argument("RadialGrid: need h_rho > 0");
}

double radial_tail_integral(const RadialGrid& grid, std::span<const Complex> Q, int rho_index,
                            double tail_beyond_R) {
    grid.validate();
    if (Q.size() != static_cast<std::size_t>(grid.n))
        throw std::invalid_argument("radial_tail_integral: sample count mismatch");
    if (rho_index < 0 || rho_index >= grid.n)
        throw std::out_of_range("radial_tail_integral: rho_index out of range");
    double sum = 0.0;
    for (int k = rho_index; k + 1 < grid.n; ++k) {
        const double gk = std::norm(Q[k]) / grid.rho(k);
        const double gk1 = std::norm(Q[k + 1]) / grid.rho(k + 1);
        sum += 0.5 * grid.h_rho * (gk + gk1);
    }
    return sum + tail_beyond_R;
}

std::string to_string(UAnchor a) {
    return a == UAnchor::origin_zero ? "origin_zero" : "infinity_zero";
}

RadialProfile::RadialProfile(RadialGrid grid, std::vector<Complex> Q, UAnchor anchor,
                             double u_tail_beyond_R)
    : grid_(grid), anchor_(anchor), u_tail_(u_tail_beyond_R) {
    grid_.validate();
    if (Q.size() != static_cast<std::size_t>(grid_.n))
        throw std::invalid_argument("RadialProfile: sample count mismatch");
    Q_.resize(Q.size() + 1);
    Q_[0] = Complex(0.0, 0.0);            // regularity ghost at the origin
    std::copy(Q.begin(), Q.end(), Q_.begin() + 1);
    // cumulative trapezoid of |Q|^2 / tau from 0; integrand limit 0 at the
    // origin for profiles vanishing linearly there.
    cum_.resize(Q_.size());
    cum_[0] = 0.0;
    for (std::size_t j = 1; j < Q_.size(); ++j) {
        const double tj = j * grid_.h_rho;
        const double gj = std::norm(Q_[j]) / tj;
        const double gjm = (j == 1) ? 0.0 : std::norm(Q_[j - 1]) / (tj - grid_.h_rho);
        cum_[j] = cum_[j - 1] + 0.5 * grid_.h_rho * (gj + gjm);
    }
}

namespace {

// 4-point Lagrange interpolation on equally spaced samples y[k-1..k+2],
// local coordinate t in [0,1] between y[k] and y[k+1].
template <class T>
T lagrange4(const std::vector<T>& y, int k, double t) {
    const T ym = y[k - 1], y0 = y[k], y1 = y[k + 1], y2 = y[k + 2];
    return -t * (t - 1.0) * (t - 2.0) / 6.0 * ym + (t * t - 1.0) * (t - 2.0) / 2.0 * y0 -
           t * (t + 1.0) * (t - 2.0) / 2.0 * y1 + t * (t * t - 1.0) / 6.0 * y2;
}

template <class T>
T lagrange4_deriv(const std::vector<T>& y, int k, double t, double h) {
    const T ym = y[k - 1], y0 = y[k], y1 = y[k + 1], y2 = y[k + 2];
    const T d = -(3.0 * t * t - 6.0 * t + 2.0) / 6.0 * ym + (3.0 * t * t - 4.0 * t - 1.0) / 2.0 * y0 -
                (3.0 * t * t - 2.0 * t - 2.0) / 2.0 * y1 + (3.0 * t * t - 1.0) / 6.0 * y2;
    return d * (1.0 / h);
}

// clamp the stencil anchor so k-1..k+2 stay in [0, last]
inline int anchor_cell(double rho, double h, int last) {
    int k = static_cast<int>(std::floor(rho / h));
    return std::clamp(k, 1, last - 2);
}

}  // namespace

Complex RadialProfile::eval(double rho) const {
    if (rho < 0.0) throw std::domain_error("RadialProfile::eval: negative radius");
    if (rho >= grid_.R()) return Complex(0.0, 0.0);
    const int last = static_cast<int>(Q_.size()) - 1;
    const int k = anchor_cell(rho, grid_.h_rho, last);
    return lagrange4(Q_, k, rho / grid_.h_rho - k);
}

Complex RadialProfile::eval_dQ(double rho) const {
    if (rho < 0.0) throw std::domain_error("RadialProfile::eval_dQ: negative radius");
    if (rho >= grid_.R()) return Complex(0.0, 0.0);
    const int last = static_cast<int>(Q_.size()) - 1;
    const int k = anchor_cell(rho, grid_.h_rho, last);
    return lagrange4_deriv(Q_, k, rho / grid_.h_rho - k, grid_.h_rho);
}

double RadialProfile::cum_at(double rho) const {
    const int last = static_cast<int>(cum_.size()) - 1;
    if (rho >= grid_.R()) return cum_[last];
    const int k = anchor_cell(rho, grid_.h_rho, last);
    return lagrange4(cum_, k, rho / grid_.h_rho - k);
}

double RadialProfile::u(double rho) const {
    const double q2 = std::norm(eval(rho));
    if (anchor_ == UAnchor::origin_zero) return q2 + 2.0 * cum_at(rho);
    const double total = cum_.back() + u_tail_;
    return q2 - 2.0 * (total - cum_at(rho));
}

bool RadialProfile::vanishes_at_origin() const {
    const double slope = std::abs(Q_[2] - Q_[1]) / grid_.h_rho;
    return std::abs(Q_[1]) <= std::max(1e-14, 10.0 * grid_.h_rho * slope);
}

}  // namespace hypmap
