#include "hypmap/minkowski.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hypmap {

double max_abs(const Mat2& m) {
    return std::max(std::max(std::abs(m.a), std::abs(m.b)),
                    std::max(std::abs(m.c), std::abs(m.d)));
}

Mat2 spin_to_matrix(const Vec3& s) {
    const Complex i(0.0, 1.0);
    return {i * s.s3, Complex(s.s1, s.s2), Complex(s.s1, -s.s2), -i * s.s3};
}

Vec3 matrix_to_spin(const Mat2& S, double tol) {
    if (std::abs(S.trace()) > tol)
        throw std::invalid_argument("matrix_to_spin: trace " + std::to_string(std::abs(S.trace())) +
                                    " exceeds tolerance");
    if (std::abs(S.a.real()) > tol)
        throw std::invalid_argument("matrix_to_spin: diagonal not purely imaginary");
    if (std::abs(S.c - std::conj(S.b)) > tol)
        throw std::invalid_argument("matrix_to_spin: off-diagonal entries not conjugate");
    return {S.b.real(), S.b.imag(), S.a.imag()};
}

Vec3 project_to_hyperboloid(const Vec3& s) {
    const double n = minkowski_norm(s);
    if (n >= 0.0)
        throw std::domain_error("project_to_hyperboloid: vector not timelike (norm " +
                                std::to_string(n) + ")");
    const double inv = 1.0 / std::sqrt(-n);
    return {s.s1 * inv, s.s2 * inv, s.s3 * inv};
}

Vec3 frame_to_spin(const GroupElement& g) {
    // -i G sigma3 G^{-1} = ((-i(|nu|^2+|chi|^2), 2i nu chi), (-2i conj(nu chi), ...))
    const Complex s12 = Complex(0.0, 2.0) * g.nu * g.chi;
    return {s12.real(), s12.imag(), -(std::norm(g.nu) + std::norm(g.chi))};
}

}  // namespace hypmap
