#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>

#include "pidstab/bounds.hpp"
#include "pidstab/plants.hpp"
#include "pidstab/regions.hpp"
#include "pidstab/simulator.hpp"

namespace pidstab {

/// Monic cubic s^3 + a2 s^2 + a1 s + a0.
struct CubicPoly {
    double a2;
    double a1;
    double a0;
};

/// Coefficients of the decoupled scalar error dynamics when the plant is the
/// destabilizing extreme f = L1 x1 + L2 x2 + c:
///   e''' + (b kd - L2) e'' + (b kp - L1) e' + (b ki) e = 0.
CubicPoly worst_case_poly(const GainTriple& g, double b, const ClassBounds& bounds);

/// Routh test for a monic cubic: stable iff a2, a1, a0 > 0 and a2*a1 > a0.
bool hurwitz_cubic(const CubicPoly& p);

/// All three roots, sorted by (real, imag) ascending. Conjugate pairs come
/// out exactly conjugate; Vieta sums hold to 1e-10 relative.
std::array<std::complex<double>, 3> cubic_roots(const CubicPoly& p);

/// A concrete destabilizing instance for gains outside the necessary region:
/// the plant, the run setup, and three independent pieces of evidence (the
/// violated Routh inequality, a root with nonnegative real part, and a
/// simulated trajectory that does not converge).
struct Counterexample {
    Plant plant;
    double b = 0.0;
    Vector ystar;
    Vector x0;
    Vector v0;
    CubicPoly poly{};
    std::array<std::complex<double>, 3> roots{};
    double max_real_part = 0.0;
    std::string failed_inequality;
    double failed_margin = 0.0;
    Trajectory trajectory;
};

/// Simulation settings used by default for falsification runs: a long
/// horizon so marginal oscillations are given time to fail the dwell test.
SimConfig falsifier_config();

/// Builds the worst-case instance at b = b_lower with c = 0 and a unit
/// setpoint on the first coordinate. If that run happens to converge (which
/// only occurs for degenerate gain combinations, e.g. no integral action and
/// no force offset), a constant offset c = e1 is added to break the
/// coincidental equilibrium. Gains whose scaled triple lies inside the
/// necessary region are refused with a region error: the construction cannot
/// exhibit instability there and never pretends to.
Counterexample find_counterexample(const GainTriple& g, const ClassBounds& bounds,
                                   std::size_t dim = 1, const SimConfig& cfg = falsifier_config());

}  // namespace pidstab
