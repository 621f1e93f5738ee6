#include "pidstab/plants.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pidstab/quadrature.hpp"

namespace pidstab {

namespace {

constexpr double kConservativeTol = 1e-6;
constexpr double kCurvatureTol = 1e-5;
constexpr double kIntegrabilityTol = 1e-6;

double fd_step1(double coord) {
    static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    return h0 * (1.0 + std::abs(coord));
}

double fd_step2(double scale) {
    static const double h0 = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
    return h0 * (1.0 + scale);
}

std::string point_str(const Vector& x1, const Vector& x2) {
    std::ostringstream os;
    os << "(x1=[";
    for (std::size_t i = 0; i < x1.size() && i < 4; ++i) os << (i ? "," : "") << x1[i];
    if (x1.size() > 4) os << ",...";
    os << "], x2=[";
    for (std::size_t i = 0; i < x2.size() && i < 4; ++i) os << (i ? "," : "") << x2[i];
    if (x2.size() > 4) os << ",...";
    os << "])";
    return os.str();
}

Vector eval_f(const Plant& p, const Vector& x1, const Vector& x2) {
    Vector v = p.f(x1, x2);
    if (v.size() != p.n) throw DimensionError("plant: f returned wrong dimension");
    if (!all_finite(v))
        throw EvaluationError("plant: f returned non-finite values at " + point_str(x1, x2));
    return v;
}

Matrix fd_jacobian(const Plant& p, const Vector& x1, const Vector& x2, bool wrt_x1) {
    Matrix j(p.n, p.n);
    Vector pt = wrt_x1 ? x1 : x2;
    for (std::size_t k = 0; k < p.n; ++k) {
        const double h = fd_step1(pt[k]);
        const double saved = pt[k];
        pt[k] = saved + h;
        const Vector fp = wrt_x1 ? eval_f(p, pt, x2) : eval_f(p, x1, pt);
        pt[k] = saved - h;
        const Vector fm = wrt_x1 ? eval_f(p, pt, x2) : eval_f(p, x1, pt);
        pt[k] = saved;
        for (std::size_t i = 0; i < p.n; ++i) j(i, k) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return j;
}

bool exactly_symmetric(const Matrix& m) {
    if (!m.square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i)) return false;
    return true;
}

SymMatrix as_sym(const Matrix& m) {
    SymMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, m(i, j));
    return s;
}

void require_square(const Matrix& m, std::size_t n, const char* what) {
    if (m.rows() != n || m.cols() != n)
        throw DimensionError(std::string(what) + ": expected a square matrix of the plant order");
    if (!m.all_finite()) throw DomainError(std::string(what) + ": non-finite entries");
}

void check_claimed_stiffness(double lmax, double L1, double scale, const char* source) {
    if (lmax > L1 + 1e-12 * (1.0 + std::abs(L1) + scale)) {
        std::ostringstream os;
        os << source << ": lambda_max of the stiffness part is " << lmax
           << ", exceeding the claimed L1 = " << L1;
        throw DomainError(os.str());
    }
}

void check_claimed_damping(double norm, double L2, double scale, const char* source) {
    if (norm > L2 + 1e-12 * (1.0 + std::abs(L2) + scale)) {
        std::ostringstream os;
        os << source << ": the damping matrix norm is " << norm
           << ", exceeding the claimed L2 = " << L2;
        throw DomainError(os.str());
    }
}

double asymmetry(const Matrix& m) { return spectral_norm(m - m.transposed()); }

// Halton radical inverse with a seeded Cranley-Patterson rotation: keeps the
// low-discrepancy structure while making distinct seeds give distinct sets.
double radical_inverse(std::size_t index, unsigned base) {
    double r = 0.0, f = 1.0 / base;
    while (index) {
        r += f * (index % base);
        index /= base;
        f /= base;
    }
    return r;
}

std::vector<unsigned> first_primes(std::size_t count) {
    std::vector<unsigned> primes;
    unsigned candidate = 2;
    while (primes.size() < count) {
        bool prime = true;
        for (unsigned p : primes) {
            if (p * p > candidate) break;
            if (candidate % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(candidate);
        ++candidate;
    }
    return primes;
}

}  // namespace

void Box::validate(std::size_t n) const {
    if (lo.size() != 2 * n || hi.size() != 2 * n)
        throw DimensionError("Box: lo/hi must have dimension 2n (x1 then x2)");
    if (!all_finite(lo) || !all_finite(hi)) throw DomainError("Box: non-finite bounds");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i])) throw DomainError("Box: lo must not exceed hi");
}

Plant make_linear_plant(const Matrix& A, const Matrix& B, const Vector& c,
                        std::optional<ClassBounds> claimed) {
    const std::size_t n = A.rows();
    require_square(A, n, "linear plant A");
    require_square(B, n, "linear plant B");
    Vector cc = c;
    if (cc.empty()) cc.assign(n, 0.0);
    if (cc.size() != n) throw DimensionError("linear plant: c has wrong dimension");
    if (!all_finite(cc)) throw DomainError("linear plant: c has non-finite entries");

    const bool a_sym = exactly_symmetric(A);
    const bool b_sym = exactly_symmetric(B);

    if (claimed) {
        claimed->validate();
        if (!a_sym)
            throw DomainError(
                "linear plant: A is not symmetric, so the position force is not conservative and "
                "no class membership can be claimed");
        check_claimed_stiffness(eig_extremes(sym_part(A)).max, claimed->L1, A.frobenius_norm(),
                                "linear plant");
        check_claimed_damping(spectral_norm(B), claimed->L2, B.frobenius_norm(), "linear plant");
    }

    Plant p;
    p.n = n;
    p.kind = PlantKind::linear;
    p.tag = !a_sym ? ClassTag::unchecked
                   : (b_sym ? ClassTag::claims_structured : ClassTag::claims_bounded);
    p.claimed_bounds = claimed;
    p.f = [A, B, cc](const Vector& x1, const Vector& x2) {
        Vector v = A * x1;
        axpy(1.0, B * x2, v);
        axpy(1.0, cc, v);
        return v;
    };
    p.j1 = [A](const Vector&, const Vector&) { return A; };
    p.j2 = [B](const Vector&, const Vector&) { return B; };
    if (a_sym) {
        const SymMatrix As = as_sym(A);
        p.potential = [As, cc](const Vector& x) {
            return 0.5 * quadratic_form(As, x) + dot(cc, x);
        };
    }
    if (b_sym) {
        const SymMatrix Bs = as_sym(B);
        p.damping_potential = [Bs](const Vector& x) { return 0.5 * quadratic_form(Bs, x); };
        p.damping_gradient = [Bs](const Vector& x) { return Bs * x; };
    }
    return p;
}

Plant make_worst_case_plant(std::size_t n, const ClassBounds& bounds, const Vector& c) {
    if (n < 1) throw DimensionError("worst-case plant: n must be >= 1");
    bounds.validate();
    Vector cc = c;
    if (cc.empty()) cc.assign(n, 0.0);
    if (cc.size() != n) throw DimensionError("worst-case plant: c has wrong dimension");
    if (!all_finite(cc)) throw DomainError("worst-case plant: c has non-finite entries");

    const double L1 = bounds.L1;
    const double L2 = bounds.L2;
    Plant p;
    p.n = n;
    p.kind = PlantKind::worst_case;
    p.tag = ClassTag::claims_structured;
    p.claimed_bounds = bounds;
    p.f = [L1, L2, cc](const Vector& x1, const Vector& x2) {
        Vector v = cc;
        axpy(L1, x1, v);
        axpy(L2, x2, v);
        return v;
    };
    p.j1 = [L1, n](const Vector&, const Vector&) { return Matrix::identity(n) * L1; };
    p.j2 = [L2, n](const Vector&, const Vector&) { return Matrix::identity(n) * L2; };
    p.potential = [L1, cc](const Vector& x) { return 0.5 * L1 * dot(x, x) + dot(cc, x); };
    p.damping_potential = [L2](const Vector& x) { return 0.5 * L2 * dot(x, x); };
    p.damping_gradient = [L2](const Vector& x) { return scaled(x, L2); };
    return p;
}

Plant make_sinusoidal_plant(std::size_t n, double a, const Matrix& B,
                            std::optional<ClassBounds> claimed) {
    if (n < 1) throw DimensionError("sinusoidal plant: n must be >= 1");
    require_square(B, n, "sinusoidal plant B");
    if (!std::isfinite(a)) throw DomainError("sinusoidal plant: a must be finite");

    const bool b_sym = exactly_symmetric(B);
    if (claimed) {
        claimed->validate();
        // The stiffness Jacobian is a*diag(cos x1), whose largest eigenvalue
        // over all states is |a|.
        check_claimed_stiffness(std::abs(a), claimed->L1, std::abs(a), "sinusoidal plant");
        check_claimed_damping(spectral_norm(B), claimed->L2, B.frobenius_norm(),
                              "sinusoidal plant");
    }

    Plant p;
    p.n = n;
    p.kind = PlantKind::sinusoidal;
    p.tag = b_sym ? ClassTag::claims_structured : ClassTag::claims_bounded;
    p.claimed_bounds = claimed;
    p.f = [a, B](const Vector& x1, const Vector& x2) {
        Vector v = B * x2;
        for (std::size_t i = 0; i < x1.size(); ++i) v[i] += a * std::sin(x1[i]);
        return v;
    };
    p.j1 = [a, n](const Vector& x1, const Vector&) {
        Matrix j(n, n);
        for (std::size_t i = 0; i < n; ++i) j(i, i) = a * std::cos(x1[i]);
        return j;
    };
    p.j2 = [B](const Vector&, const Vector&) { return B; };
    p.potential = [a](const Vector& x) {
        double u = 0.0;
        for (double xi : x) u -= a * std::cos(xi);
        return u;
    };
    if (b_sym) {
        const SymMatrix Bs = as_sym(B);
        p.damping_potential = [Bs](const Vector& x) { return 0.5 * quadratic_form(Bs, x); };
        p.damping_gradient = [Bs](const Vector& x) { return Bs * x; };
    }
    return p;
}

Plant make_gradient_plant(GradientParams params, std::optional<ClassBounds> claimed) {
    if (params.n < 1) throw DimensionError("gradient plant: n must be >= 1");
    if (!params.grad_potential || !params.damping_hessian)
        throw DomainError("gradient plant: grad_potential and damping_hessian are required");
    if (claimed) claimed->validate();

    const std::size_t n = params.n;
    auto grad = params.grad_potential;
    auto hess = params.damping_hessian;

    Plant p;
    p.n = n;
    p.kind = PlantKind::gradient;
    p.tag = ClassTag::claims_structured;
    p.claimed_bounds = claimed;
    p.f = [grad, hess, n](const Vector& x1, const Vector& x2) {
        Vector v = grad(x1);
        if (v.size() != n) throw DimensionError("gradient plant: grad_potential dimension");
        axpy(1.0, hess(x1) * x2, v);
        return v;
    };
    p.j2 = [hess, n](const Vector& x1, const Vector&) {
        Matrix m = hess(x1);
        require_square(m, n, "gradient plant damping_hessian");
        return m;
    };
    p.potential = params.potential;
    p.damping_potential = params.damping_potential;
    p.damping_gradient = params.damping_gradient;
    return p;
}

Plant make_builtin(PlantKind kind, const PlantParams& params, std::optional<ClassBounds> claimed) {
    switch (kind) {
        case PlantKind::linear:
            if (auto* lp = std::get_if<LinearParams>(&params))
                return make_linear_plant(lp->A, lp->B, lp->c, claimed);
            break;
        case PlantKind::worst_case:
            if (auto* wp = std::get_if<WorstCaseParams>(&params)) {
                if (claimed && (claimed->L1 != wp->bounds.L1 || claimed->L2 != wp->bounds.L2))
                    throw DomainError("worst-case plant: claimed bounds must equal its parameters");
                return make_worst_case_plant(wp->n, wp->bounds, wp->c);
            }
            break;
        case PlantKind::sinusoidal:
            if (auto* sp = std::get_if<SinusoidalParams>(&params))
                return make_sinusoidal_plant(sp->n, sp->a, sp->B, claimed);
            break;
        case PlantKind::gradient:
            if (auto* gp = std::get_if<GradientParams>(&params))
                return make_gradient_plant(*gp, claimed);
            break;
    }
    throw DomainError("make_builtin: params do not match the requested kind");
}

std::pair<Matrix, Matrix> jacobians(const Plant& p, const Vector& x1, const Vector& x2) {
    if (!p.f) throw DomainError("plant: f evaluator is missing");
    if (x1.size() != p.n || x2.size() != p.n)
        throw DimensionError("jacobians: state dimension mismatch");
    if (!all_finite(x1) || !all_finite(x2)) throw DomainError("jacobians: non-finite input");

    Matrix j1 = p.j1 ? p.j1(x1, x2) : fd_jacobian(p, x1, x2, true);
    Matrix j2 = p.j2 ? p.j2(x1, x2) : fd_jacobian(p, x1, x2, false);
    require_square(j1, p.n, "jacobians j1");
    require_square(j2, p.n, "jacobians j2");
    return {std::move(j1), std::move(j2)};
}

namespace {

Matrix damping_field_at(const Plant& p, const Vector& x1) {
    const Vector zero(p.n, 0.0);
    if (p.j2) {
        Matrix m = p.j2(x1, zero);
        require_square(m, p.n, "damping field");
        return m;
    }
    return fd_jacobian(p, x1, zero, false);
}

// Max over (i,j,k) of |dA_ij/dx_k - dA_ik/dx_j| by central differences of the
// field along each coordinate.
double integrability_residual(const std::function<Matrix(const Vector&)>& field, const Vector& x,
                              std::size_t n) {
    std::vector<Matrix> d(n);
    Vector pt = x;
    for (std::size_t k = 0; k < n; ++k) {
        const double h = fd_step1(pt[k]);
        const double saved = pt[k];
        pt[k] = saved + h;
        const Matrix ap = field(pt);
        pt[k] = saved - h;
        const Matrix am = field(pt);
        pt[k] = saved;
        d[k] = (ap - am) * (0.5 / h);
    }
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                r = std::max(r, std::abs(d[k](i, j) - d[j](i, k)));
    return r;
}

}  // namespace

MembershipReport check_membership(const Plant& p, const ClassBounds& bounds, const Box& domain,
                                  int samples, std::uint64_t seed) {
    if (!p.f) throw DomainError("check_membership: plant has no evaluator");
    bounds.validate();
    domain.validate(p.n);
    if (samples < 1) throw DomainError("check_membership: samples must be >= 1");

    const std::size_t n = p.n;
    const std::size_t dims = 2 * n;
    const std::vector<unsigned> bases = first_primes(dims);
    std::mt19937_64 shift_rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector shift(dims);
    for (auto& s : shift) s = unit(shift_rng);
    std::mt19937_64 dir_rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> nd(0.0, 1.0);

    const auto a_field = [&p](const Vector& x1) { return damping_field_at(p, x1); };
    const Vector zero(n, 0.0);

    MembershipReport r{};
    r.max_stiffness_eig = -std::numeric_limits<double>::infinity();
    r.max_damping_norm = 0.0;
    r.max_force_asymmetry = 0.0;
    r.max_velocity_curvature = 0.0;
    r.max_damping_asymmetry = 0.0;
    r.max_integrability_residual = 0.0;

    for (int s = 1; s <= samples; ++s) {
        Vector x1(n), x2(n);
        for (std::size_t d = 0; d < dims; ++d) {
            double u = radical_inverse(static_cast<std::size_t>(s), bases[d]) + shift[d];
            u -= std::floor(u);
            const double v = domain.lo[d] + (domain.hi[d] - domain.lo[d]) * u;
            (d < n ? x1[d] : x2[d - n]) = v;
        }

        const auto [j1, j2] = jacobians(p, x1, x2);
        r.max_stiffness_eig = std::max(r.max_stiffness_eig, eig_extremes(sym_part(j1)).max);
        r.max_damping_norm = std::max(r.max_damping_norm, spectral_norm(j2));

        const Matrix j1_rest = p.j1 ? p.j1(x1, zero) : fd_jacobian(p, x1, zero, true);
        r.max_force_asymmetry = std::max(r.max_force_asymmetry, asymmetry(j1_rest));

        const Matrix a = a_field(x1);
        r.max_damping_asymmetry = std::max(r.max_damping_asymmetry, asymmetry(a));
        r.max_integrability_residual =
            std::max(r.max_integrability_residual, integrability_residual(a_field, x1, n));

        // Second difference of f along a random velocity direction probes
        // whether f is affine in x2.
        for (int rep = 0; rep < 2; ++rep) {
            Vector dir(n);
            double len = 0.0;
            do {
                for (auto& d : dir) d = nd(dir_rng);
                len = norm2(dir);
            } while (len < 1e-8);
            const double h = fd_step2(norm_inf(x2));
            Vector xp = x2, xm = x2;
            axpy(h / len, dir, xp);
            axpy(-h / len, dir, xm);
            Vector second = eval_f(p, x1, xp);
            axpy(-2.0, eval_f(p, x1, x2), second);
            axpy(1.0, eval_f(p, x1, xm), second);
            r.max_velocity_curvature =
                std::max(r.max_velocity_curvature, norm_inf(second) / (h * h));
        }
    }

    r.stiffness_excess = r.max_stiffness_eig - bounds.L1;
    r.damping_excess = r.max_damping_norm - bounds.L2;
    r.stiffness_bounded = r.max_stiffness_eig <= bounds.L1 + 1e-9 * (1.0 + std::abs(bounds.L1));
    r.damping_bounded = r.max_damping_norm <= bounds.L2 + 1e-9 * (1.0 + std::abs(bounds.L2));
    r.force_conservative = r.max_force_asymmetry <= kConservativeTol;
    r.velocity_affine = r.max_velocity_curvature <= kCurvatureTol;
    r.damping_hessian_field = r.max_damping_asymmetry <= kIntegrabilityTol &&
                              r.max_integrability_residual <= kIntegrabilityTol;
    return r;
}

double potential_from_field(const Plant& p, const Vector& base, const Vector& x, int quad_order) {
    if (base.size() != p.n || x.size() != p.n)
        throw DimensionError("potential_from_field: dimension mismatch");

    const Vector zero(p.n, 0.0);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        Vector seg = base;
        axpy(t, sub(x, base), seg);
        const Matrix j1 = p.j1 ? p.j1(seg, zero) : fd_jacobian(p, seg, zero, true);
        const double res = asymmetry(j1);
        if (res > kConservativeTol) {
            std::ostringstream os;
            os << "potential_from_field: force Jacobian asymmetry " << res
               << " on the integration segment; the field has no potential";
            throw NotConservativeError(os.str());
        }
    }

    const Vector d = sub(x, base);
    return integrate_scalar_01(
        [&](double t) {
            Vector pt = base;
            axpy(t, d, pt);
            return dot(eval_f(p, pt, zero), d);
        },
        quad_order);
}

namespace {

void validate_hessian_field(const MatrixField& a_field, const Vector& base, const Vector& x,
                            std::size_t n) {
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        Vector seg = base;
        axpy(t, sub(x, base), seg);
        const Matrix a = a_field(seg);
        require_square(a, n, "hessian field");
        const double sym_res = asymmetry(a);
        if (sym_res > kIntegrabilityTol) {
            std::ostringstream os;
            os << "hessian field: asymmetry " << sym_res << " on the integration segment";
            throw NotHessianFieldError(os.str());
        }
        const double integ_res = integrability_residual(a_field, seg, n);
        if (integ_res > kIntegrabilityTol) {
            std::ostringstream os;
            os << "hessian field: cross-derivative mismatch " << integ_res
               << " on the integration segment; the field is not a Hessian";
            throw NotHessianFieldError(os.str());
        }
    }
}

Vector field_line_integral(const MatrixField& a_field, const Vector& base, const Vector& u,
                           int quad_order) {
    const Vector d = sub(u, base);
    return integrate_01(
        [&](double t) {
            Vector pt = base;
            axpy(t, d, pt);
            return a_field(pt) * d;
        },
        quad_order);
}

}  // namespace

double hessian_potential_from_field(const MatrixField& a_field, const Vector& base, const Vector& x,
                                    int quad_order) {
    if (base.size() != x.size()) throw DimensionError("hessian_potential_from_field: dimensions");
    const std::size_t n = base.size();
    validate_hessian_field(a_field, base, x, n);

    const Vector d = sub(x, base);
    return integrate_scalar_01(
        [&](double t) {
            Vector pt = base;
            axpy(t, d, pt);
            return dot(field_line_integral(a_field, base, pt, quad_order), d);
        },
        quad_order);
}

Vector hessian_potential_gradient(const MatrixField& a_field, const Vector& base, const Vector& x,
                                  int quad_order) {
    if (base.size() != x.size()) throw DimensionError("hessian_potential_gradient: dimensions");
    validate_hessian_field(a_field, base, x, base.size());
    return field_line_integral(a_field, base, x, quad_order);
}

}  // namespace pidstab
