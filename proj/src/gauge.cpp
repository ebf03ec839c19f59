#include "hypmap/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hypmap {

ConstraintResidual constraint_residual(const GaugeFields& f, int order) {
    require_same_grid(f.p.grid, f.q.grid, "constraint_residual");
    require_same_grid(f.p.grid, f.r.grid, "constraint_residual");
    const ScalarField pbz = d_z(conj(f.p), order);
    const ScalarField pzb = d_zbar(f.p, order);
    const ScalarField rbz = d_z(conj(f.r), order);
    const ScalarField qzb = d_zbar(f.q, order);
    ConstraintResidual out{ScalarField(f.grid()), ScalarField(f.grid())};
    for (std::size_t k = 0; k < out.res1.v.size(); ++k) {
        out.res1.v[k] = pbz.v[k] + pzb.v[k] + std::norm(f.q.v[k]) - std::norm(f.r.v[k]);
        out.res2.v[k] = -rbz.v[k] + qzb.v[k] +
                        2.0 * (f.p.v[k] * std::conj(f.r.v[k]) + std::conj(f.p.v[k]) * f.q.v[k]);
    }
    return out;
}

SystemResidual system_residual(const GaugeFields& prev, const GaugeFields& cur,
                               const GaugeFields& next, double dt, int order) {
    require_same_grid(prev.grid(), cur.grid(), "system_residual");
    require_same_grid(cur.grid(), next.grid(), "system_residual");
    if (dt <= 0.0) throw std::invalid_argument("system_residual: dt must be positive");
    const Grid2D& g = cur.grid();
    const Complex I(0.0, 1.0);

    ScalarField pbq(g), pbr(g), qr(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        pbq.v[k] = std::conj(cur.p.v[k]) * cur.q.v[k];
        pbr.v[k] = std::conj(cur.p.v[k]) * cur.r.v[k];
        qr.v[k] = cur.q.v[k] * cur.r.v[k];
    }
    const ScalarField lq = laplacian(cur.q, order);
    const ScalarField lr = laplacian(cur.r, order);
    const ScalarField qzb = d_zbar(cur.q, order);
    const ScalarField rzb = d_zbar(cur.r, order);
    const ScalarField pbq_z = d_z(pbq, order);
    const ScalarField pbr_z = d_z(pbr, order);
    const ScalarField qr_zb = d_zbar(qr, order);
    const ScalarField u_z = d_z(cur.u, order);

    SystemResidual out{ScalarField(g), ScalarField(g), ScalarField(g)};
    const double idt = 1.0 / (2.0 * dt);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Complex qt = (next.q.v[k] - prev.q.v[k]) * idt;
        const Complex rt = (next.r.v[k] - prev.r.v[k]) * idt;
        const Complex pt = (next.p.v[k] - prev.p.v[k]) * idt;
        const Complex p = cur.p.v[k];
        const double p2 = std::norm(p);
        out.R_q.v[k] = I * qt + lq.v[k] - 2.0 * cur.u.v[k] * cur.q.v[k] + 2.0 * pbq_z.v[k] -
                       2.0 * p * qzb.v[k] - 4.0 * p2 * cur.q.v[k];
        out.R_r.v[k] = I * rt - lr.v[k] + 2.0 * cur.u.v[k] * cur.r.v[k] + 2.0 * pbr_z.v[k] -
                       2.0 * p * rzb.v[k] + 4.0 * p2 * cur.r.v[k];
        out.R_p.v[k] = I * pt + qr_zb.v[k] - u_z.v[k];
    }
    return out;
}

MatrixField connection_U(const GaugeFields& f) {
    MatrixField m(f.grid());
    for (std::size_t k = 0; k < m.v.size(); ++k)
        m.v[k] = {f.p.v[k], f.q.v[k], f.r.v[k], -f.p.v[k]};
    return m;
}

MatrixField connection_P(const GaugeFields& f) {
    MatrixField m(f.grid());
    for (std::size_t k = 0; k < m.v.size(); ++k)
        m.v[k] = {std::conj(f.p.v[k]), -std::conj(f.r.v[k]), -std::conj(f.q.v[k]),
                  -std::conj(f.p.v[k])};
    return m;
}

MatrixField connection_H(const GaugeFields& f) {
    MatrixField m(f.grid());
    for (std::size_t k = 0; k < m.v.size(); ++k) {
        const Complex pb = std::conj(f.p.v[k]);
        m.v[k] = {Complex(0.0), -2.0 * f.q.v[k] * pb, -2.0 * f.r.v[k] * pb, Complex(0.0)};
    }
    return m;
}

ScalarField psi_field(const GaugeFields& f) {
    ScalarField out(f.grid());
    for (std::size_t k = 0; k < out.v.size(); ++k)
        out.v[k] = 0.5 * (f.q.v[k] + std::conj(f.r.v[k]));
    return out;
}

ScalarField phi_field(const GaugeFields& f) {
    ScalarField out(f.grid());
    for (std::size_t k = 0; k < out.v.size(); ++k)
        out.v[k] = Complex(0.0, 0.5) * (f.q.v[k] - std::conj(f.r.v[k]));
    return out;
}

namespace {

// Entrywise d_z / d_zbar of a matrix field via four scalar passes.
MatrixField matrix_d(const MatrixField& m, bool zbar, int order) {
    ScalarField a(m.grid), b(m.grid), c(m.grid), d(m.grid);
    for (std::size_t k = 0; k < m.v.size(); ++k) {
        a.v[k] = m.v[k].a;
        b.v[k] = m.v[k].b;
        c.v[k] = m.v[k].c;
        d.v[k] = m.v[k].d;
    }
    const ScalarField da = zbar ? d_zbar(a, order) : d_z(a, order);
    const ScalarField db = zbar ? d_zbar(b, order) : d_z(b, order);
    const ScalarField dc = zbar ? d_zbar(c, order) : d_z(c, order);
    const ScalarField dd = zbar ? d_zbar(d, order) : d_z(d, order);
    MatrixField out(m.grid);
    for (std::size_t k = 0; k < m.v.size(); ++k)
        out.v[k] = {da.v[k], db.v[k], dc.v[k], dd.v[k]};
    return out;
}

}  // namespace

MatrixField compatibility_residual(const GaugeFields& f, int order) {
    const MatrixField U = connection_U(f);
    const MatrixField P = connection_P(f);
    const MatrixField Pz = matrix_d(P, false, order);
    const MatrixField Uzb = matrix_d(U, true, order);
    MatrixField out(f.grid());
    for (std::size_t k = 0; k < out.v.size(); ++k)
        out.v[k] = Pz.v[k] + Uzb.v[k] + commutator(P.v[k], U.v[k]);
    return out;
}

double max_abs_interior(const MatrixField& m, int margin) {
    double r = 0.0;
    for (int j = margin; j < m.grid.ny - margin; ++j)
        for (int i = margin; i < m.grid.nx - margin; ++i) r = std::max(r, max_abs(m.at(i, j)));
    return r;
}

double FrameSlice::max_unit_defect() const {
    double m = 0.0;
    for (const auto& e : g) m = std::max(m, std::abs(e.unit_defect()));
    return m;
}

double frame_distance(const FrameSlice& A, const FrameSlice& B) {
    require_same_grid(A.grid, B.grid, "frame_distance");
    double m = 0.0;
    for (std::size_t k = 0; k < A.g.size(); ++k)
        m = std::max(m, std::abs(A.g[k].nu - B.g[k].nu) + std::abs(A.g[k].chi - B.g[k].chi));
    return m;
}

// ---- frame integration ----------------------------------------------------

namespace {

// su(1,1) generator in (nu, chi) coordinates: for dG = sign * G * M with
// M = ((m11, m12), (m21, m22)) the first-row flow is
//   nu'  = sign (nu m11 + chi m21),
//   chi' = sign (nu m12 + chi m22);
// the second row stays the conjugate of the first by construction.
struct Gen {
    Complex m11, m12, m21, m22;
};

inline Gen spatial_generator(const GaugeSample& s, int axis) {
    if (axis == 0) {
        const Complex psi = 0.5 * (s.q + std::conj(s.r));
        const Complex d(0.0, s.p.imag());
        return {-d, -psi, -std::conj(psi), d};   // includes the -G A sign
    }
    const Complex phi = Complex(0.0, 0.5) * (s.q - std::conj(s.r));
    const Complex d(0.0, s.p.real());
    return {-d, -phi, -std::conj(phi), d};
}

inline Gen time_generator(const GaugeSample& s) {
    const Complex pb = std::conj(s.p);
    const Complex I(0.0, 1.0);
    return {I * s.u, -I * (s.q_zbar + 2.0 * pb * s.q), I * (s.r_zbar - 2.0 * pb * s.r), -I * s.u};
}

inline void apply(const Gen& g, const GroupElement& x, GroupElement& out) {
    out.nu = x.nu * g.m11 + x.chi * g.m21;
    out.chi = x.nu * g.m12 + x.chi * g.m22;
}

struct StepStats {
    double max_correction = 0.0;
};

// One RK4 step for dG/ds = Gen(s) applied to G, with stage generators g0,
// gm (midpoint), g1; then re-projection.
inline GroupElement rk4_step(const GroupElement& G, const Gen& g0, const Gen& gm, const Gen& g1,
                             double h, StepStats& stats, double projection_limit) {
    GroupElement k1, k2, k3, k4, tmp;
    apply(g0, G, k1);
    tmp = {G.nu + 0.5 * h * k1.nu, G.chi + 0.5 * h * k1.chi};
    apply(gm, tmp, k2);
    tmp = {G.nu + 0.5 * h * k2.nu, G.chi + 0.5 * h * k2.chi};
    apply(gm, tmp, k3);
    tmp = {G.nu + h * k3.nu, G.chi + h * k3.chi};
    apply(g1, tmp, k4);
    GroupElement out{G.nu + h / 6.0 * (k1.nu + 2.0 * k2.nu + 2.0 * k3.nu + k4.nu),
                     G.chi + h / 6.0 * (k1.chi + 2.0 * k2.chi + 2.0 * k3.chi + k4.chi)};
    const double d = std::norm(out.nu) - std::norm(out.chi);
    if (d <= 0.0)
        throw std::runtime_error("integrate_frame: frame left SU(1,1) (step size too large)");
    const double corr = std::abs(std::sqrt(d) - 1.0);
    stats.max_correction = std::max(stats.max_correction, corr);
    if (corr > projection_limit)
        throw std::runtime_error("integrate_frame: re-projection correction " +
                                 std::to_string(corr) + " exceeds limit (step size too large)");
    return out.normalized();
}

// Integrate one node along an axis segment [s0, s0+h] with substeps.
GroupElement sweep_cell(const GaugeSampler& f, double t, const GroupElement& G, int axis,
                        double fixed, double s0, double h, int substeps, StepStats& stats,
                        double projection_limit) {
    GroupElement cur = G;
    const double hs = h / substeps;
    for (int m = 0; m < substeps; ++m) {
        const double a0 = s0 + m * hs;
        auto sample = [&](double s) {
            return axis == 0 ? f(t, s, fixed) : f(t, fixed, s);
        };
        const Gen g0 = spatial_generator(sample(a0), axis);
        const Gen gm = spatial_generator(sample(a0 + 0.5 * hs), axis);
        const Gen g1 = spatial_generator(sample(a0 + hs), axis);
        cur = rk4_step(cur, g0, gm, g1, hs, stats, projection_limit);
    }
    return cur;
}

double generator_norm(const Gen& g) {
    return std::abs(g.m11) + std::abs(g.m12) + std::abs(g.m21) + std::abs(g.m22);
}

}  // namespace

FrameTrajectory integrate_frame(const GaugeSampler& fields, const Grid2D& grid,
                                std::span<const double> times, const GroupElement& G0,
                                const FrameIntegrationOptions& options) {
    grid.validate();
    if (times.empty()) throw std::invalid_argument("integrate_frame: no output times");
    if (grid.nx % 2 == 0 || grid.ny % 2 == 0)
        throw std::invalid_argument("integrate_frame: grid must have odd nx, ny");
    const int ic = grid.nx / 2, jc = grid.ny / 2;

    FrameTrajectory traj;

    // Admissibility of the supplied fields, measured on the grid per slice.
    // The auto tolerance estimates the stencil truncation floor from the
    // difference between the 2nd- and 4th-order residuals: for admissible
    // fields the two differ by the whole (O(h^2)) residual, for genuinely
    // non-admissible fields both converge to the same nonzero function.
    if (options.check_admissibility) {
        double worst = 0.0, floor_est = 0.0;
        for (double t : times) {
            const GaugeFields f = sample_gauge_fields(fields, grid, t);
            const ConstraintResidual c2 = constraint_residual(f, 2);
            worst = std::max(worst, std::max(max_abs_interior(c2.res1, 2),
                                             max_abs_interior(c2.res2, 2)));
            if (options.admissibility_tol < 0.0) {
                const ConstraintResidual c4 = constraint_residual(f, 4);
                ScalarField d1(grid), d2(grid);
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    d1.v[k] = c2.res1.v[k] - c4.res1.v[k];
                    d2.v[k] = c2.res2.v[k] - c4.res2.v[k];
                }
                floor_est = std::max(floor_est,
                                     std::max(max_abs_interior(d1, 2), max_abs_interior(d2, 2)));
            }
        }
        traj.max_constraint_residual = worst;
        const double tol = options.admissibility_tol >= 0.0 ? options.admissibility_tol
                                                            : 25.0 * floor_est + 1e-7;
        if (worst > tol)
            throw std::invalid_argument("integrate_frame: fields not admissible (constraint residual " +
                                        std::to_string(worst) + " > " + std::to_string(tol) + ")");
    }

    StepStats stats;
    const double t0 = times[0];

    FrameSlice slice;
    slice.grid = grid;
    slice.t = t0;
    slice.g.assign(grid.size(), GroupElement{});
    slice.at(ic, jc) = G0;

    auto sweep_axis_line = [&](int axis, int fixed_idx) {
        // integrate the center line of `axis` from the center outwards
        if (axis == 0) {
            const double x2c = grid.x2(fixed_idx);
            for (int i = ic; i < grid.nx - 1; ++i)
                slice.at(i + 1, fixed_idx) =
                    sweep_cell(fields, t0, slice.at(i, fixed_idx), 0, x2c, grid.x1(i), grid.hx,
                               options.spatial_substeps, stats, options.projection_limit);
            for (int i = ic; i > 0; --i)
                slice.at(i - 1, fixed_idx) =
                    sweep_cell(fields, t0, slice.at(i, fixed_idx), 0, x2c, grid.x1(i), -grid.hx,
                               options.spatial_substeps, stats, options.projection_limit);
        } else {
            const double x1c = grid.x1(fixed_idx);
            for (int j = jc; j < grid.ny - 1; ++j)
                slice.at(fixed_idx, j + 1) =
                    sweep_cell(fields, t0, slice.at(fixed_idx, j), 1, x1c, grid.x2(j), grid.hy,
                               options.spatial_substeps, stats, options.projection_limit);
            for (int j = jc; j > 0; --j)
                slice.at(fixed_idx, j - 1) =
                    sweep_cell(fields, t0, slice.at(fixed_idx, j), 1, x1c, grid.x2(j), -grid.hy,
                               options.spatial_substeps, stats, options.projection_limit);
        }
    };

    if (options.sweep == SweepOrder::x1_major) {
        sweep_axis_line(0, jc);                                   // x1 axis
        for (int i = 0; i < grid.nx; ++i) sweep_axis_line(1, i);  // each column
    } else {
        sweep_axis_line(1, ic);                                   // x2 axis
        for (int j = 0; j < grid.ny; ++j) sweep_axis_line(0, j);  // each row
    }
    traj.slices.push_back(slice);

    // time advance per node between consecutive requested times
    for (std::size_t n = 1; n < times.size(); ++n) {
        const double ta = times[n - 1], tb = times[n];
        FrameSlice nextSlice = traj.slices.back();
        nextSlice.t = tb;
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                const double x1 = grid.x1(i), x2 = grid.x2(j);
                const double norm_a = generator_norm(time_generator(fields(ta, x1, x2)));
                const double norm_b = generator_norm(time_generator(fields(tb, x1, x2)));
                const double span = std::abs(tb - ta);
                int nsub = options.min_time_substeps;
                if (options.time_substep_cap > 0.0)
                    nsub = std::max(nsub, static_cast<int>(std::ceil(
                                              span * std::max(norm_a, norm_b) /
                                              options.time_substep_cap)));
                const double hs = (tb - ta) / nsub;
                GroupElement G = nextSlice.at(i, j);
                for (int m = 0; m < nsub; ++m) {
                    const double s0 = ta + m * hs;
                    const Gen g0 = time_generator(fields(s0, x1, x2));
                    const Gen gm = time_generator(fields(s0 + 0.5 * hs, x1, x2));
                    const Gen g1 = time_generator(fields(s0 + hs, x1, x2));
                    G = rk4_step(G, g0, gm, g1, hs, stats, options.projection_limit);
                }
                nextSlice.at(i, j) = G;
            }
        }
        traj.slices.push_back(std::move(nextSlice));
    }

    traj.max_projection_correction = stats.max_correction;
    for (const auto& s : traj.slices)
        traj.max_unit_defect = std::max(traj.max_unit_defect, s.max_unit_defect());
    return traj;
}

SpinField reconstruct_spin(const FrameSlice& frame) {
    SpinField S(frame.grid, Vec3{0.0, 0.0, -1.0});
    S.sheet = -1;
    for (int j = 0; j < frame.grid.ny; ++j)
        for (int i = 0; i < frame.grid.nx; ++i) S.set(i, j, frame_to_spin(frame.at(i, j)));
    return S;
}

// ---- decomposition ---------------------------------------------------------

namespace {

FrameSlice appendix_frame(const SpinField& S) {
    FrameSlice F;
    F.grid = S.grid();
    F.g.resize(F.grid.size());
    for (std::size_t k = 0; k < F.g.size(); ++k) {
        const double s3 = S.s3.v[k];
        const double den = std::sqrt(2.0 * (1.0 - s3));
        F.g[k].nu = Complex(0.0, s3 - 1.0) / den;
        F.g[k].chi = Complex(S.s1.v[k], S.s2.v[k]) / den;
    }
    return F;
}

void require_lower_sheet(const SpinField& S, const char* what) {
    if (S.sheet != -1)
        throw std::invalid_argument(std::string(what) + ": spin field not flagged s3 < 0");
    for (double x : S.s3.v)
        if (x >= 0.0)
            throw std::invalid_argument(std::string(what) +
                                        ": node with s3 >= 0 (wrong hyperboloid sheet)");
}

// theta with theta_x1 = Im p, theta_x2 = Re p, integrated by trapezoid along
// the x1 center line and then each column; gamma = e^{i theta} then cancels
// the diagonal of -G^{-1}G_z.
RealField diagonal_killing_phase(const ScalarField& p) {
    const Grid2D& g = p.grid;
    const int ic = g.nx / 2, jc = g.ny / 2;
    RealField th(g);
    for (int i = ic; i < g.nx - 1; ++i)
        th.at(i + 1, jc) =
            th.at(i, jc) + 0.5 * g.hx * (p.at(i, jc).imag() + p.at(i + 1, jc).imag());
    for (int i = ic; i > 0; --i)
        th.at(i - 1, jc) =
            th.at(i, jc) - 0.5 * g.hx * (p.at(i, jc).imag() + p.at(i - 1, jc).imag());
    for (int i = 0; i < g.nx; ++i) {
        for (int j = jc; j < g.ny - 1; ++j)
            th.at(i, j + 1) = th.at(i, j) + 0.5 * g.hy * (p.at(i, j).real() + p.at(i, j + 1).real());
        for (int j = jc; j > 0; --j)
            th.at(i, j - 1) = th.at(i, j) - 0.5 * g.hy * (p.at(i, j).real() + p.at(i, j - 1).real());
    }
    return th;
}

void apply_phase(FrameSlice& F, const RealField& theta) {
    for (std::size_t k = 0; k < F.g.size(); ++k) {
        const Complex gamma = std::exp(Complex(0.0, theta.v[k]));
        F.g[k].nu *= gamma;
        F.g[k].chi *= std::conj(gamma);
    }
}

// U = -G^{-1} G_z evaluated entrywise with scalar stencils on nu, chi.
// Returns (p, q, r) = (U11, U12, U21).
struct FirstOrderData {
    ScalarField p, q, r;
};

FirstOrderData frame_connection(const FrameSlice& F, int order) {
    const Grid2D& g = F.grid;
    ScalarField nu(g), chi(g);
    for (std::size_t k = 0; k < F.g.size(); ++k) {
        nu.v[k] = F.g[k].nu;
        chi.v[k] = F.g[k].chi;
    }
    const ScalarField nu_z = d_z(nu, order);
    const ScalarField chi_z = d_z(chi, order);
    const ScalarField nu_zb = d_zbar(nu, order);
    const ScalarField chi_zb = d_zbar(chi, order);
    FirstOrderData out{ScalarField(g), ScalarField(g), ScalarField(g)};
    for (std::size_t k = 0; k < F.g.size(); ++k) {
        // rows of G_z: (nu_z, chi_z; conj(chi_zbar), conj(nu_zbar))
        const Complex a = nu_z.v[k], b = chi_z.v[k];
        const Complex c = std::conj(chi_zb.v[k]), d = std::conj(nu_zb.v[k]);
        // G^{-1} = ((conj nu, -chi), (-conj chi, nu)) for unit pseudo-determinant
        const Complex i11 = std::conj(F.g[k].nu), i12 = -F.g[k].chi;
        const Complex i21 = -std::conj(F.g[k].chi), i22 = F.g[k].nu;
        out.p.v[k] = -(i11 * a + i12 * c);
        out.q.v[k] = -(i11 * b + i12 * d);
        out.r.v[k] = -(i21 * a + i22 * c);
    }
    return out;
}

}  // namespace

Decomposition decompose_spin(const SpinField& prev, const SpinField& cur, const SpinField& next,
                             double dt, const DecomposeOptions& options) {
    require_same_grid(prev.grid(), cur.grid(), "decompose_spin");
    require_same_grid(cur.grid(), next.grid(), "decompose_spin");
    if (dt <= 0.0) throw std::invalid_argument("decompose_spin: dt must be positive");
    require_lower_sheet(prev, "decompose_spin");
    require_lower_sheet(cur, "decompose_spin");
    require_lower_sheet(next, "decompose_spin");

    FrameSlice Fm = appendix_frame(prev);
    FrameSlice F0 = appendix_frame(cur);
    FrameSlice Fp = appendix_frame(next);

    // conjugation check sigma3 = i G^{-1} S G before differentiating
    double sigma_defect = 0.0;
    for (int j = 0; j < cur.grid().ny; ++j)
        for (int i = 0; i < cur.grid().nx; ++i) {
            const Mat2 Ginv = F0.at(i, j).inverse().to_matrix();
            const Mat2 S = spin_to_matrix(cur.at(i, j));
            const Mat2 sig = Complex(0.0, 1.0) * (Ginv * S * F0.at(i, j).to_matrix());
            sigma_defect = std::max(sigma_defect, max_abs(sig - kSigma3));
        }
    if (sigma_defect > options.sigma3_tol)
        throw std::invalid_argument("decompose_spin: sigma3 conjugation defect " +
                                    std::to_string(sigma_defect) + " exceeds tolerance");

    if (options.gamma_phase != nullptr) {
        apply_phase(Fm, *options.gamma_phase);
        apply_phase(F0, *options.gamma_phase);
        apply_phase(Fp, *options.gamma_phase);
    } else if (options.gamma == DecomposeOptions::Gamma::diagonal_killing) {
        // per-slice phase from each slice's own recovered diagonal
        apply_phase(Fm, diagonal_killing_phase(frame_connection(Fm, options.stencil_order).p));
        apply_phase(F0, diagonal_killing_phase(frame_connection(F0, options.stencil_order).p));
        apply_phase(Fp, diagonal_killing_phase(frame_connection(Fp, options.stencil_order).p));
    }

    const FirstOrderData U = frame_connection(F0, options.stencil_order);

    Decomposition out{std::move(F0), GaugeFields(cur.grid()), sigma_defect, 0.0};
    out.fields.p = U.p;
    out.fields.q = U.q;
    out.fields.r = U.r;
    const double idt = 1.0 / (2.0 * dt);
    for (std::size_t k = 0; k < out.frame.g.size(); ++k) {
        const GroupElement& G = out.frame.g[k];
        const Complex dnu = (Fp.g[k].nu - Fm.g[k].nu) * idt;
        const Complex dchi = (Fp.g[k].chi - Fm.g[k].chi) * idt;
        // (G^{-1} G_t)_{11} = conj(nu) dnu - chi conj(dchi); equals i u + O(dt^2)
        const Complex w11 = std::conj(G.nu) * dnu - G.chi * std::conj(dchi);
        out.fields.u.v[k] = w11.imag();
        out.max_u_imag = std::max(out.max_u_imag, std::abs(w11.real()));
    }
    if (out.max_u_imag > options.u_imag_tol)
        throw std::invalid_argument("decompose_spin: time generator has real diagonal part " +
                                    std::to_string(out.max_u_imag) +
                                    " (u extraction not trustworthy at this tolerance)");
    return out;
}

RealField spin_gradient_sum(const SpinField& S, int order) {
    const Grid2D& g = S.grid();
    RealField out(g);
    for (const RealField* comp : {&S.s1, &S.s2, &S.s3}) {
        const ScalarField dz = d_z(*comp, order);
        const ScalarField dzb = d_zbar(*comp, order);
        for (std::size_t k = 0; k < out.v.size(); ++k)
            out.v[k] += std::abs(dz.v[k]) + std::abs(dzb.v[k]);
    }
    return out;
}

GradientBoundReport gradient_bound_check(const SpinField& S, const GaugeFields& f,
                                         double allowance) {
    require_same_grid(S.grid(), f.grid(), "gradient_bound_check");
    const Grid2D& g = S.grid();
    const RealField grad = spin_gradient_sum(S);
    if (allowance < 0.0) {
        // third-derivative scale from differenced Laplacians
        double est = 0.0;
        for (const RealField* comp : {&S.s1, &S.s2, &S.s3}) {
            const RealField lap = laplacian(*comp);
            est = std::max(est, max_abs_interior(d_x1(lap), 2));
            est = std::max(est, max_abs_interior(d_x2(lap), 2));
        }
        allowance = 10.0 * g.hx * g.hx * est;
    }
    GradientBoundReport rep;
    rep.allowance = allowance;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            const double qr = std::abs(f.q.at(i, j)) + std::abs(f.r.at(i, j));
            const double slack = grad.at(i, j) + allowance - qr;
            rep.min_slack = std::min(rep.min_slack, slack);
            rep.max_qr = std::max(rep.max_qr, qr);
            rep.max_grad = std::max(rep.max_grad, grad.at(i, j));
        }
    rep.holds = rep.min_slack >= 0.0;
    return rep;
}

}  // namespace hypmap
