#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pidstab/bounds.hpp"
#include "pidstab/matnum.hpp"
#include "pidstab/plants.hpp"
#include "pidstab/regions.hpp"
#include "pidstab/simulator.hpp"

namespace pidstab {

/// Which construction the certificate follows. theorem1 requires the
/// sufficient gain region and certifies any bounded-class plant;
/// proposition1 requires only the necessary region but is valid solely for
/// plants carrying structured-class claims.
enum class CertMode { theorem1, proposition1 };

const char* to_string(CertMode m);

/// Frozen data of a Lyapunov certificate: the proof constants in class-bound
/// form (phi0 = k1-L1, psi0 = k2-L2, psi1 = k2+L2, psi = k2), the multiplier
/// mu, and the quadratic-form matrix P of order 3n. Build via
/// build_certificate; the fields are plain so checkers can be tested against
/// deliberately broken values.
struct Certificate {
    CertMode mode;
    double phi0;
    double psi0;
    double psi1;
    double psi;
    double mu;
    SymMatrix P;
    ScaledGains gains;
    ClassBounds bounds;
    Vector ystar;
    Plant plant;

    std::size_t n() const { return plant.n; }
};

Certificate build_certificate(const ScaledGains& s, const ClassBounds& bounds, const Plant& p,
                              const Vector& ystar, CertMode mode);

struct InequalityMargin {
    std::string name;
    double margin;  // > 0 when satisfied
};

struct CertificateCheck {
    std::vector<InequalityMargin> inequalities;
    double p_min_eig;
    bool positive_definite;
};

/// Verifies the mode's inequality chain and the positive definiteness of P
/// (theorem1) or of the variant with psi replaced by psi0 in the middle
/// block (proposition1). Throws a certificate error naming the first failed
/// inequality and its margin; returns all margins when everything holds.
CertificateCheck check_P(const Certificate& cert);

/// g(y, z) = f(ystar, 0) - f(ystar - y, -z) split as B(y) y + A(y, z) z with
///   B(y)    = integral over [0,1] of J1(ystar - tau y, 0)
///   A(y, z) = integral over [0,1] of J2(ystar - y, -tau z).
/// Integrals are Gauss-Legendre at quad_order and 2*quad_order; disagreement
/// beyond 1e-9 relative is a numeric error. residual = |g - B y - A z|.
struct Decomposition {
    Matrix B;
    Matrix A;
    double residual;
};

Decomposition decompose_g(const Plant& p, const Vector& ystar, const Vector& y, const Vector& z,
                          std::size_t quad_order = 16);

/// H(y) = ((k1 - phi0)/2)|y|^2 - U(ystar - y) + U(ystar) - f(ystar,0)' y,
/// with U analytic when the plant carries one, reconstructed by line
/// integral otherwise.
double eval_H(const Certificate& cert, const Vector& y);

/// H_psi(y) = mu ((k2 - psi)/2 |y|^2 + S(ystar-y) - S(ystar)
///            + grad S(ystar-y)' y), proposition1 mode only. S comes from
/// the plant's damping potential or is reconstructed from the damping field;
/// the value is invariant to the affine normalization of S.
double eval_Hpsi(const Certificate& cert, const Vector& y);

/// V = [x y z] P [x y z]' + H(y), plus H_psi(y) in proposition1 mode.
double eval_V(const Certificate& cert, const TransformedState& ts);

/// Minimum eigenvalue of the symmetric 2n-square matrix
/// [[-Q11, Q12], [Q12', -Q22]] whose positivity witnesses dV/dt < 0 at
/// (y, z), where Q11 = (k0 - mu k1) I + mu B(y),
/// Q22 = sym A + (mu - k2) I, Q12 = -(mu/2)((psi - k2) I + A).
/// theorem1 mode only.
double q_min_eig(const Certificate& cert, const Vector& y, const Vector& z);

/// V evaluated at every trajectory sample.
std::vector<double> v_series(const Certificate& cert, const Trajectory& traj);

struct VdotSeries {
    std::vector<double> t;      // interior sample times
    std::vector<double> value;  // central-difference dV/dt
    double max_value;
};

/// Central-difference dV/dt at the interior samples of a trajectory that was
/// produced for the same plant, gains, and setpoint.
VdotSeries vdot_along(const Certificate& cert, const Trajectory& traj);

}  // namespace pidstab
