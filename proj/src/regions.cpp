#include "pidstab/regions.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace pidstab {

namespace {

// kbar with the radicand clamped at zero. The clamp can only fire when k0 <= 0
// or k2 + L2 < 0, and each of those already forces another margin
// nonpositive, so the region verdict is unaffected.
double kbar_clamped(double k0, double k2, double L2) {
    return 2.0 * L2 * std::sqrt(std::max(k0 * (k2 + L2), 0.0));
}

RegionVerdict make_verdict(double m1, double m2, double m0, double mp) {
    RegionVerdict v;
    v.margin_k1 = m1;
    v.margin_k2 = m2;
    v.margin_k0 = m0;
    v.margin_product = mp;
    v.in_region = m1 > 0.0 && m2 > 0.0 && m0 > 0.0 && mp > 0.0;
    assert(v.in_region == (v.min_margin() > 0.0));
    return v;
}

}  // namespace

double RegionVerdict::min_margin() const {
    return std::min(std::min(margin_k1, margin_k2), std::min(margin_k0, margin_product));
}

double kbar(double ki, double kd, double L2) {
    const double radicand = ki * (kd + L2);
    if (radicand < 0.0) throw DomainError("kbar: negative radicand ki*(kd+L2)");
    return 2.0 * L2 * std::sqrt(radicand);
}

ScaledGains scale_gains(const GainTriple& g, double b) {
    g.validate();
    if (!(b > 0.0)) throw DomainError("scale_gains: b must be > 0");
    return ScaledGains(b * g.kp, b * g.ki, b * g.kd);
}

ScaledGains scale_at_lower(const GainTriple& g) { return scale_gains(g, g.b_lower); }

RegionVerdict in_omega1(const ScaledGains& s, const ClassBounds& b) {
    b.validate();
    const double m1 = s.k1() - b.L1;
    const double m2 = s.k2() - b.L2;
    const double m0 = s.k0();
    const double mp = m1 * m2 - s.k0() - kbar_clamped(s.k0(), s.k2(), b.L2);
    return make_verdict(m1, m2, m0, mp);
}

RegionVerdict in_omega2(const ScaledGains& s, const ClassBounds& b) {
    b.validate();
    const double m1 = s.k1() - b.L1;
    const double m2 = s.k2() - b.L2;
    const double m0 = s.k0();
    const double mp = m1 * m2 - s.k0();
    return make_verdict(m1, m2, m0, mp);
}

double zeta(double alpha, const ScaledGains& s, const ClassBounds& b) {
    b.validate();
    if (!(alpha >= 1.0)) throw DomainError("zeta: alpha must be >= 1");
    const double radicand = alpha * s.k0() * (alpha * s.k2() + b.L2);
    if (radicand < 0.0) throw DomainError("zeta: negative radicand");
    return (alpha * s.k1() - b.L1) * (alpha * s.k2() - b.L2) - alpha * s.k0() -
           2.0 * b.L2 * std::sqrt(radicand);
}

RayMonotonicityReport check_ray_monotonicity(const ScaledGains& s, const ClassBounds& b,
                                             const Vector& alphas) {
    if (!in_omega1(s, b).in_region)
        throw RegionError("check_ray_monotonicity: gains outside the sufficient region");
    if (alphas.size() < 2)
        throw DomainError("check_ray_monotonicity: need at least two grid points");

    RayMonotonicityReport r;
    r.alphas = alphas;
    r.values.resize(alphas.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (i > 0 && !(alphas[i] > alphas[i - 1]))
            throw DomainError("check_ray_monotonicity: grid must be strictly increasing");
        r.values[i] = zeta(alphas[i], s, b);
        scale = std::max(scale, std::abs(r.values[i]));
    }
    r.min_forward_difference = r.values[1] - r.values[0];
    for (std::size_t i = 2; i < alphas.size(); ++i)
        r.min_forward_difference = std::min(r.min_forward_difference, r.values[i] - r.values[i - 1]);
    r.passes = r.min_forward_difference >= -1e-9 * (1.0 + scale);
    return r;
}

GainSlice slice_grid(const ClassBounds& bounds, double b_lower, FixedGain fixed,
                     double fixed_value, std::array<double, 2> range1,
                     std::array<double, 2> range2, std::array<int, 2> resolution) {
    bounds.validate();
    if (!(b_lower > 0.0)) throw DomainError("slice_grid: b_lower must be > 0");
    if (resolution[0] < 2 || resolution[1] < 2)
        throw DomainError("slice_grid: resolution must be >= 2 per axis");
    if (!(range1[1] > range1[0]) || !(range2[1] > range2[0]))
        throw DomainError("slice_grid: degenerate axis range");

    GainSlice g;
    switch (fixed) {
        case FixedGain::kp:
            g.axis1 = "ki";
            g.axis2 = "kd";
            break;
        case FixedGain::ki:
            g.axis1 = "kp";
            g.axis2 = "kd";
            break;
        case FixedGain::kd:
            g.axis1 = "kp";
            g.axis2 = "ki";
            break;
    }
    const auto linspace = [](std::array<double, 2> r, int n) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = r[0] + (r[1] - r[0]) * i / (n - 1);
        return v;
    };
    g.axis1_values = linspace(range1, resolution[0]);
    g.axis2_values = linspace(range2, resolution[1]);
    g.cells.reserve(g.axis1_values.size() * g.axis2_values.size());

    for (double a1 : g.axis1_values) {
        for (double a2 : g.axis2_values) {
            GainTriple t{0.0, 0.0, 0.0, b_lower};
            switch (fixed) {
                case FixedGain::kp:
                    t.kp = fixed_value;
                    t.ki = a1;
                    t.kd = a2;
                    break;
                case FixedGain::ki:
                    t.ki = fixed_value;
                    t.kp = a1;
                    t.kd = a2;
                    break;
                case FixedGain::kd:
                    t.kd = fixed_value;
                    t.kp = a1;
                    t.ki = a2;
                    break;
            }
            const ScaledGains s = scale_at_lower(t);
            g.cells.push_back({in_omega1(s, bounds), in_omega2(s, bounds)});
        }
    }
    return g;
}

}  // namespace pidstab
