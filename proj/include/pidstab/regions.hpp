#pragma once

#include <array>
#include <string>
#include <vector>

#include "pidstab/bounds.hpp"
#include "pidstab/matnum.hpp"

namespace pidstab {

/// Raw PID gains plus the known lower bound on the input coefficient b.
struct GainTriple {
    double kp;
    double ki;
    double kd;
    double b_lower;  // > 0

    void validate() const {
        if (!(b_lower > 0.0)) throw DomainError("GainTriple: b_lower must be > 0");
    }
};

class ScaledGains;
ScaledGains scale_gains(const GainTriple& g, double b);

/// Gains scaled by a concrete input coefficient: (k1, k0, k2) = b*(kp, ki, kd).
/// Only scale_gains produces these, so a triple can never be scaled twice.
class ScaledGains {
public:
    double k1() const { return k1_; }
    double k0() const { return k0_; }
    double k2() const { return k2_; }

private:
    ScaledGains(double k1, double k0, double k2) : k1_(k1), k0_(k0), k2_(k2) {}
    friend ScaledGains scale_gains(const GainTriple&, double);

    double k1_;
    double k0_;
    double k2_;
};

/// Scale at the known lower bound; membership at b_lower extends to any
/// b >= b_lower by the ray-monotonicity of the region conditions.
ScaledGains scale_at_lower(const GainTriple& g);

/// Signed distances to each defining inequality of a region. The regions are
/// open sets: boundary points are outside with margin 0.
struct RegionVerdict {
    bool in_region;
    double margin_k1;       // k1 - L1
    double margin_k2;       // k2 - L2
    double margin_k0;       // k0
    double margin_product;  // (k1-L1)(k2-L2) - k0 - kbar (or - k0 alone)

    double min_margin() const;
};

/// 2*L2*sqrt(ki*(kd+L2)); the coupling term in the sufficient region.
double kbar(double ki, double kd, double L2);

/// Sufficient region: k1 > L1, k2 > L2, k0 > 0,
/// (k1-L1)(k2-L2) > k0 + kbar(k0, k2, L2).
RegionVerdict in_omega1(const ScaledGains& s, const ClassBounds& b);

/// Necessary region: same first three plus (k1-L1)(k2-L2) > k0.
RegionVerdict in_omega2(const ScaledGains& s, const ClassBounds& b);

/// (a*k1-L1)(a*k2-L2) - a*k0 - 2*L2*sqrt(a*k0*(a*k2+L2)) for a >= 1; its
/// nondecrease along the ray a*(k1,k0,k2) is what makes region membership at
/// b_lower carry over to larger b.
double zeta(double alpha, const ScaledGains& s, const ClassBounds& b);

struct RayMonotonicityReport {
    Vector alphas;
    Vector values;                  // zeta at each alpha
    double min_forward_difference;  // over consecutive grid points
    bool passes;
};

/// Evaluates zeta on the grid and checks forward differences stay above
/// -1e-9*(1+max|zeta|). Requires s in the sufficient region.
RayMonotonicityReport check_ray_monotonicity(const ScaledGains& s, const ClassBounds& b,
                                             const Vector& alphas);

enum class FixedGain { kp, ki, kd };

struct SliceCell {
    RegionVerdict omega1;
    RegionVerdict omega2;
};

/// Raster of both region verdicts over two free gain axes with the third gain
/// held fixed; evaluated at b = b_lower. Cells are row-major: axis1 is the
/// slow index.
struct GainSlice {
    std::string axis1;  // name of the slow axis ("kp", "ki" or "kd")
    std::string axis2;
    Vector axis1_values;
    Vector axis2_values;
    std::vector<SliceCell> cells;
};

GainSlice slice_grid(const ClassBounds& bounds, double b_lower, FixedGain fixed,
                     double fixed_value, std::array<double, 2> range1,
                     std::array<double, 2> range2, std::array<int, 2> resolution);

}  // namespace pidstab
