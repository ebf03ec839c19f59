#pragma once

#include <functional>
#include <stdexcept>

#include "hypmap/grid.hpp"
#include "hypmap/minkowski.hpp"

// Grid-sampled field bundles shared across the gauge, evolution and radial
// modules.

namespace hypmap {

// Map into the hyperboloid: three real components plus the sheet sign
// (sign of s3, uniform over the field).
struct SpinField {
    RealField s1, s2, s3;
    int sheet = +1;

    explicit SpinField(const Grid2D& g, Vec3 fill = {0.0, 0.0, 1.0});
    SpinField() = default;

    const Grid2D& grid() const { return s1.grid; }
    Vec3 at(int i, int j) const { return {s1.at(i, j), s2.at(i, j), s3.at(i, j)}; }
    void set(int i, int j, const Vec3& s) {
        s1.at(i, j) = s.s1;
        s2.at(i, j) = s.s2;
        s3.at(i, j) = s.s3;
    }

    /// max over nodes of |s1^2+s2^2-s3^2 + 1|.
    double max_hyperboloid_violation() const;
    /// true when sign(s3) equals the sheet flag at every node.
    bool sheet_uniform() const;

    SpinField negated() const;   // s -> -s (flips the sheet)
};

// Gauge fields (p, q, r, u) on a common grid; u is real-valued.
struct GaugeFields {
    ScalarField p, q, r;
    RealField u;

    explicit GaugeFields(const Grid2D& g) : p(g), q(g), r(g), u(g) {}
    GaugeFields() = default;

    const Grid2D& grid() const { return p.grid; }
};

// Pointwise sample of the gauge fields together with the zbar-derivatives
// that enter the time part of the frame system.
struct GaugeSample {
    Complex p{}, q{}, r{};
    double u = 0.0;
    Complex q_zbar{}, r_zbar{};
};

// Pointwise evaluator for gauge fields; stage values of the path-ordered
// frame integration are taken directly from it, off the grid included.
class GaugeSampler {
public:
    virtual ~GaugeSampler() = default;
    virtual GaugeSample operator()(double t, double x1, double x2) const = 0;
};

// Sampler defined by a function; handy for perturbations in tests and runs.
class FunctionSampler final : public GaugeSampler {
public:
    using Fn = std::function<GaugeSample(double, double, double)>;
    explicit FunctionSampler(Fn fn) : fn_(std::move(fn)) {}
    GaugeSample operator()(double t, double x1, double x2) const override { return fn_(t, x1, x2); }

private:
    Fn fn_;
};

/// Sample a GaugeSampler onto a grid at time t.
GaugeFields sample_gauge_fields(const GaugeSampler& s, const Grid2D& g, double t);

inline void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": fields on different grids");
}

}  // namespace hypmap
