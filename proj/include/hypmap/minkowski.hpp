#pragma once

#include <complex>
#include <cmath>

// Algebra of the Minkowski 3-space R^{2,1}, the hyperboloid
// s1^2 + s2^2 - s3^2 = -1, and the matrix groups su(1,1) / SU(1,1).
// Everything here is grid-free and pure.

namespace hypmap {

using Complex = std::complex<double>;

// Default absolute tolerance for algebraic identity checks.
inline constexpr double kAlgebraTol = 1e-10;

struct Vec3 {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.s1 + b.s1, a.s2 + b.s2, a.s3 + b.s3}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.s1 - b.s1, a.s2 - b.s2, a.s3 - b.s3}; }
inline Vec3 operator*(double c, const Vec3& a) { return {c * a.s1, c * a.s2, c * a.s3}; }
inline Vec3 operator-(const Vec3& a) { return {-a.s1, -a.s2, -a.s3}; }

/// Pseudo-cross product on R^{2,1}:
/// a x. b = (a2 b3 - a3 b2, a3 b1 - a1 b3, -(a1 b2 - a2 b1)).
inline Vec3 pseudo_cross(const Vec3& a, const Vec3& b) {
    return {a.s2 * b.s3 - a.s3 * b.s2,
            a.s3 * b.s1 - a.s1 * b.s3,
            -(a.s1 * b.s2 - a.s2 * b.s1)};
}

/// Indefinite inner product with signature (+,+,-).
inline double minkowski_dot(const Vec3& a, const Vec3& b) {
    return a.s1 * b.s1 + a.s2 * b.s2 - a.s3 * b.s3;
}

/// Minkowski square norm a1^2 + a2^2 - a3^2 (equals -1 on the hyperboloid).
inline double minkowski_norm(const Vec3& a) { return minkowski_dot(a, a); }

// 2x2 complex matrix, row-major entries.
struct Mat2 {
    Complex a{}, b{}, c{}, d{};   // ((a, b), (c, d))

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Complex trace() const { return a + d; }
    Complex det() const { return a * d - b * c; }
    Mat2 inverse() const {
        const Complex dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}
inline Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
inline Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
inline Mat2 operator*(Complex s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
inline Mat2 operator*(double s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }

inline Mat2 commutator(const Mat2& x, const Mat2& y) { return x * y - y * x; }

/// Largest entrywise modulus; used for defect measurements.
double max_abs(const Mat2& m);

inline const Mat2 kSigma3{1.0, 0.0, 0.0, -1.0};

/// S = ((i s3, s1 + i s2), (s1 - i s2, -i s3)); S^2 = -I iff s is on the hyperboloid.
Mat2 spin_to_matrix(const Vec3& s);

/// Inverse of spin_to_matrix. Throws std::invalid_argument if the su(1,1)
/// shape (zero trace, imaginary diagonal, conjugate off-diagonal) is violated
/// beyond `tol`.
Vec3 matrix_to_spin(const Mat2& S, double tol = kAlgebraTol);

/// Radial retraction s / sqrt(-|s|^2) onto the unit hyperboloid. Requires a
/// timelike input (minkowski_norm < 0); throws std::domain_error otherwise.
/// Preserves sign(s3).
Vec3 project_to_hyperboloid(const Vec3& s);

// SU(1,1) group element ((nu, chi), (conj chi, conj nu)), |nu|^2 - |chi|^2 = 1.
struct GroupElement {
    Complex nu{1.0, 0.0};
    Complex chi{0.0, 0.0};

    Mat2 to_matrix() const { return {nu, chi, std::conj(chi), std::conj(nu)}; }
    /// |nu|^2 - |chi|^2 - 1 (zero for exact group membership).
    double unit_defect() const { return std::norm(nu) - std::norm(chi) - 1.0; }
    /// Rescale back onto the group; valid while |nu| > |chi|.
    GroupElement normalized() const {
        const double d = std::sqrt(std::norm(nu) - std::norm(chi));
        return {nu / d, chi / d};
    }
    GroupElement inverse() const { return {std::conj(nu), -chi}; }
};

inline GroupElement operator*(const GroupElement& g, const GroupElement& h) {
    return {g.nu * h.nu + g.chi * std::conj(h.chi), g.nu * h.chi + g.chi * std::conj(h.nu)};
}

/// S = -i G sigma3 G^{-1}. Lands on the s3 < 0 sheet for any group element.
Vec3 frame_to_spin(const GroupElement& g);

}  // namespace hypmap
