#include "hypmap/fields.hpp"

#include <cmath>

namespace hypmap {

SpinField::SpinField(const Grid2D& g, Vec3 fill)
    : s1(g, fill.s1), s2(g, fill.s2), s3(g, fill.s3), sheet(fill.s3 < 0.0 ? -1 : +1) {}

double SpinField::max_hyperboloid_violation() const {
    double m = 0.0;
    for (std::size_t k = 0; k < s1.v.size(); ++k) {
        const double n = s1.v[k] * s1.v[k] + s2.v[k] * s2.v[k] - s3.v[k] * s3.v[k];
        m = std::max(m, std::abs(n + 1.0));
    }
    return m;
}

bool SpinField::sheet_uniform() const {
    for (double x : s3.v)
        if (x * sheet <= 0.0) return false;
    return true;
}

SpinField SpinField::negated() const {
    SpinField out = *this;
    for (auto& x : out.s1.v) x = -x;
    for (auto& x : out.s2.v) x = -x;
    for (auto& x : out.s3.v) x = -x;
    out.sheet = -sheet;
    return out;
}

GaugeFields sample_gauge_fields(const GaugeSampler& s, const Grid2D& g, double t) {
    GaugeFields out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const GaugeSample gs = s(t, g.x1(i), g.x2(j));
            out.p.at(i, j) = gs.p;
            out.q.at(i, j) = gs.q;
            out.r.at(i, j) = gs.r;
            out.u.at(i, j) = gs.u;
        }
    return out;
}

}  // namespace hypmap
