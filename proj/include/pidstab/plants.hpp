#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>

#include "pidstab/bounds.hpp"
#include "pidstab/matnum.hpp"

namespace pidstab {

enum class PlantKind { linear, worst_case, sinusoidal, gradient };

/// What the plant asserts about itself. Claims are validated analytically at
/// construction where possible and at sample scale by check_membership.
///   claims_bounded:    Jacobian bounds hold and the position force is
///                      conservative.
///   claims_structured: additionally, f is affine in velocity and the damping
///                      matrix field is the Hessian of a scalar.
enum class ClassTag { unchecked, claims_bounded, claims_structured };

/// Second-order plant acceleration f(x1, x2). Evaluators must be pure.
/// Analytic Jacobians and potentials are optional; when absent, consumers
/// fall back to finite differences or line-integral reconstruction.
struct Plant {
    std::size_t n = 0;
    PlantKind kind = PlantKind::gradient;
    ClassTag tag = ClassTag::unchecked;
    std::optional<ClassBounds> claimed_bounds;

    std::function<Vector(const Vector&, const Vector&)> f;

    // d f / d x1 and d f / d x2.
    std::function<Matrix(const Vector&, const Vector&)> j1;
    std::function<Matrix(const Vector&, const Vector&)> j2;

    // U with grad U = f(., 0).
    std::function<double(const Vector&)> potential;
    // S with hess S = df/dx2(., 0), and its gradient.
    std::function<double(const Vector&)> damping_potential;
    std::function<Vector(const Vector&)> damping_gradient;
};

struct LinearParams {
    Matrix A;
    Matrix B;
    Vector c;
};

struct WorstCaseParams {
    std::size_t n;
    ClassBounds bounds;
    Vector c;  // empty means zero
};

struct SinusoidalParams {
    std::size_t n;
    double a;  // componentwise a*sin(x1)
    Matrix B;
};

struct GradientParams {
    std::size_t n;
    std::function<Vector(const Vector&)> grad_potential;    // f(., 0)
    std::function<Matrix(const Vector&)> damping_hessian;   // df/dx2, velocity-free
    std::function<double(const Vector&)> potential;         // optional
    std::function<double(const Vector&)> damping_potential; // optional
    std::function<Vector(const Vector&)> damping_gradient;  // optional
};

using PlantParams = std::variant<LinearParams, WorstCaseParams, SinusoidalParams, GradientParams>;

/// f = A x1 + B x2 + c. Claimed bounds are verified against the spectra of A
/// and B; the tag records how much structure the matrices actually carry.
Plant make_linear_plant(const Matrix& A, const Matrix& B, const Vector& c,
                        std::optional<ClassBounds> claimed = {});

/// f = L1 x1 + L2 x2 + c: the extreme member of its class, used to probe
/// necessity. Always structured.
Plant make_worst_case_plant(std::size_t n, const ClassBounds& bounds, const Vector& c = {});

/// f = a sin(x1) + B x2 (sin componentwise).
Plant make_sinusoidal_plant(std::size_t n, double a, const Matrix& B,
                            std::optional<ClassBounds> claimed = {});

/// f = grad_potential(x1) + damping_hessian(x1) x2, structured by construction.
Plant make_gradient_plant(GradientParams params, std::optional<ClassBounds> claimed = {});

/// Dispatch on kind; the params alternative must match.
Plant make_builtin(PlantKind kind, const PlantParams& params,
                   std::optional<ClassBounds> claimed = {});

/// Analytic Jacobians when the plant carries them, otherwise central finite
/// differences with step eps^(1/3)*(1+|coordinate|).
std::pair<Matrix, Matrix> jacobians(const Plant& p, const Vector& x1, const Vector& x2);

/// Axis-aligned sample box over (x1, x2); lo/hi have dimension 2n.
struct Box {
    Vector lo;
    Vector hi;

    void validate(std::size_t n) const;
};

/// Worst observed values over the sample set, plus per-condition verdicts.
/// Bound verdicts allow equality up to a 1e-9 relative band; structural
/// residual thresholds are 1e-6 (symmetry, integrability) and 1e-5
/// (velocity curvature).
struct MembershipReport {
    double max_stiffness_eig;          // lambda_max of sym(df/dx1)
    double max_damping_norm;           // |df/dx2|
    double stiffness_excess;           // max_stiffness_eig - L1
    double damping_excess;             // max_damping_norm - L2
    double max_force_asymmetry;        // |J1 - J1'| at x2 = 0
    double max_velocity_curvature;     // second x2-difference of f
    double max_damping_asymmetry;      // |A - A'| for A = df/dx2(., 0)
    double max_integrability_residual; // cross-derivative mismatch of A

    bool stiffness_bounded;
    bool damping_bounded;
    bool force_conservative;
    bool velocity_affine;
    bool damping_hessian_field;

    bool in_bounded_class() const {
        return stiffness_bounded && damping_bounded && force_conservative;
    }
    bool in_structured_class() const {
        return in_bounded_class() && velocity_affine && damping_hessian_field;
    }
};

/// Sample-scale membership check on a box with a seeded low-discrepancy set.
/// Deterministic for fixed arguments. This verifies membership at the sampled
/// points only; it never proves membership over all of R^n x R^n.
MembershipReport check_membership(const Plant& p, const ClassBounds& bounds, const Box& domain,
                                  int samples, std::uint64_t seed);

/// U(x) = integral_0^1 f(base + t(x-base), 0) . (x-base) dt, the line-integral
/// potential with U(base) = 0. Refuses if the force Jacobian is asymmetric
/// along the segment (no potential exists).
double potential_from_field(const Plant& p, const Vector& base, const Vector& x,
                            int quad_order = 16);

using MatrixField = std::function<Matrix(const Vector&)>;

/// S(x) from a matrix field A via two nested line integrals, with S(base) = 0
/// and grad S(base) = 0. Refuses unless A is symmetric and integrable
/// (cross-derivatives match) along the segment.
double hessian_potential_from_field(const MatrixField& a_field, const Vector& base,
                                    const Vector& x, int quad_order = 16);

/// grad S(x) for the same construction: one line integral of the field.
Vector hessian_potential_gradient(const MatrixField& a_field, const Vector& base, const Vector& x,
                                  int quad_order = 16);

}  // namespace pidstab
