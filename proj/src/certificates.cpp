#include "pidstab/certificates.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "pidstab/errors.hpp"
#include "pidstab/quadrature.hpp"

namespace pidstab {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Names the first violated inequality of a region verdict.
void require_region(const RegionVerdict& v, const char* region_label, const char* product_name) {
    if (v.in_region) return;
    const char* name;
    double margin;
    if (!(v.margin_k1 > 0.0)) {
        name = "k1 > L1";
        margin = v.margin_k1;
    } else if (!(v.margin_k2 > 0.0)) {
        name = "k2 > L2";
        margin = v.margin_k2;
    } else if (!(v.margin_k0 > 0.0)) {
        name = "k0 > 0";
        margin = v.margin_k0;
    } else {
        name = product_name;
        margin = v.margin_product;
    }
    throw RegionError(std::string("certificate requires ") + region_label + ": " + name +
                      " failed (margin " + num(margin) + ")");
}

SymMatrix core_matrix(double mu, double k0, double middle) {
    SymMatrix c(3);
    c.set(0, 0, mu * k0);
    c.set(0, 1, k0);
    c.set(0, 2, 0.0);
    c.set(1, 1, middle);
    c.set(1, 2, mu);
    c.set(2, 2, 1.0);
    return c;
}

Vector plant_f(const Plant& p, const Vector& x1, const Vector& x2) {
    const Vector f = p.f(x1, x2);
    if (f.size() != p.n || !all_finite(f))
        throw EvaluationError("plant value is invalid during certificate evaluation");
    return f;
}

Matrix quad_matrix_integral(const QuadratureRule& rule,
                            const std::function<Matrix(double)>& integrand, std::size_t n) {
    Matrix acc(n, n);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        Matrix m = integrand(rule.nodes[i]);
        m *= rule.weights[i];
        acc += m;
    }
    return acc;
}

void richardson_guard(const Matrix& coarse, const Matrix& fine, const char* label) {
    const double diff = (coarse - fine).frobenius_norm();
    if (!(diff <= 1e-9 * (1.0 + fine.frobenius_norm())))
        throw NumericError(std::string("quadrature for ") + label +
                           " did not converge: refinement moved the result by " + num(diff));
}

}  // namespace

const char* to_string(CertMode m) {
    return m == CertMode::theorem1 ? "theorem1" : "proposition1";
}

Certificate build_certificate(const ScaledGains& s, const ClassBounds& bounds, const Plant& p,
                              const Vector& ystar, CertMode mode) {
    bounds.validate();
    if (ystar.size() != p.n)
        throw DimensionError("setpoint dimension " + std::to_string(ystar.size()) +
                             " does not match the plant dimension " + std::to_string(p.n));
    if (!all_finite(ystar)) throw DomainError("setpoint must be finite");

    if (mode == CertMode::theorem1) {
        require_region(in_omega1(s, bounds), "the sufficient region",
                       "(k1-L1)*(k2-L2) > k0 + kbar");
    } else {
        require_region(in_omega2(s, bounds), "the necessary region", "(k1-L1)*(k2-L2) > k0");
        if (p.tag != ClassTag::claims_structured)
            throw CertificateError(
                "proposition1 mode requires a plant built with structured-class claims");
    }

    const double phi0 = s.k1() - bounds.L1;
    const double psi0 = s.k2() - bounds.L2;
    const double psi1 = s.k2() + bounds.L2;
    // (psi0 + psi1)/2 collapses to k2 exactly in class-bound form.
    const double psi = s.k2();
    const double mu = mode == CertMode::theorem1
                          ? (phi0 * psi0 + s.k0()) / (2.0 * (phi0 + bounds.L2 * bounds.L2))
                          : (phi0 * psi0 + s.k0()) / (2.0 * phi0);

    SymMatrix P = kron3_with_identity(core_matrix(mu, s.k0(), phi0 + mu * psi), p.n);
    P *= 0.5;
    return Certificate{mode, phi0, psi0, psi1, psi, mu, std::move(P), s, bounds, ystar, p};
}

CertificateCheck check_P(const Certificate& cert) {
    const double k0 = cert.gains.k0();
    const double L2 = cert.bounds.L2;
    const double b1 = cert.psi0 - cert.mu;
    const double b3 = cert.mu * cert.phi0 - k0;

    CertificateCheck rep;
    if (cert.mode == CertMode::theorem1) {
        const double b2 = b3 * b1 - cert.mu * cert.mu * L2 * L2;
        rep.inequalities = {{"psi0 > mu", b1},
                            {"(mu*phi0 - k0)*(psi0 - mu) > mu^2*L2^2", b2},
                            {"mu*phi0 > k0", b3}};
    } else {
        rep.inequalities = {{"mu*phi0 > k0", b3}, {"psi0 > mu", b1}};
    }
    for (const InequalityMargin& it : rep.inequalities)
        if (!(it.margin > 0.0))
            throw CertificateError("certificate inequality " + it.name + " failed (margin " +
                                   num(it.margin) + ")");

    // proposition1 validates the variant with psi0 in the middle block; its
    // positivity is what the mode's argument actually needs.
    const SymMatrix& checked =
        cert.mode == CertMode::theorem1
            ? cert.P
            : [&] {
                  SymMatrix pt = kron3_with_identity(
                      core_matrix(cert.mu, k0, cert.phi0 + cert.mu * cert.psi0), cert.n());
                  pt *= 0.5;
                  return pt;
              }();
    rep.positive_definite = is_positive_definite(checked);
    if (!rep.positive_definite)
        throw CertificateError("certificate matrix P is not positive definite");
    rep.p_min_eig = eig_extremes(checked).min;
    return rep;
}

Decomposition decompose_g(const Plant& p, const Vector& ystar, const Vector& y, const Vector& z,
                          std::size_t quad_order) {
    const std::size_t n = p.n;
    if (ystar.size() != n || y.size() != n || z.size() != n)
        throw DimensionError("decompose_g expects vectors of the plant dimension");
    if (quad_order == 0) throw DomainError("quadrature order must be positive");

    const Vector zero(n, 0.0);
    const auto b_integrand = [&](double tau) {
        Vector x1 = ystar;
        axpy(-tau, y, x1);
        return jacobians(p, x1, zero).first;
    };
    const Vector shifted = sub(ystar, y);
    const auto a_integrand = [&](double tau) {
        return jacobians(p, shifted, scaled(z, -tau)).second;
    };

    const QuadratureRule& coarse = gauss_legendre_01(static_cast<int>(quad_order));
    const QuadratureRule& fine = gauss_legendre_01(static_cast<int>(2 * quad_order));
    const Matrix b_coarse = quad_matrix_integral(coarse, b_integrand, n);
    const Matrix b_fine = quad_matrix_integral(fine, b_integrand, n);
    richardson_guard(b_coarse, b_fine, "B(y)");
    const Matrix a_coarse = quad_matrix_integral(coarse, a_integrand, n);
    const Matrix a_fine = quad_matrix_integral(fine, a_integrand, n);
    richardson_guard(a_coarse, a_fine, "A(y,z)");

    const Vector g = sub(plant_f(p, ystar, zero), plant_f(p, shifted, scaled(z, -1.0)));
    Vector recon = b_fine * y;
    axpy(1.0, a_fine * z, recon);
    return Decomposition{b_fine, a_fine, norm2(sub(g, recon))};
}

double eval_H(const Certificate& cert, const Vector& y) {
    const std::size_t n = cert.n();
    if (y.size() != n) throw DimensionError("eval_H expects a vector of the plant dimension");
    const Plant& p = cert.plant;
    const Vector target = sub(cert.ystar, y);
    double du;
    if (p.potential)
        du = p.potential(target) - p.potential(cert.ystar);
    else
        du = potential_from_field(p, cert.ystar, target);
    const Vector f0 = plant_f(p, cert.ystar, Vector(n, 0.0));
    return 0.5 * (cert.gains.k1() - cert.phi0) * dot(y, y) - du - dot(f0, y);
}

double eval_Hpsi(const Certificate& cert, const Vector& y) {
    if (cert.mode != CertMode::proposition1)
        throw CertificateError("H_psi belongs to proposition1 certificates only");
    const std::size_t n = cert.n();
    if (y.size() != n) throw DimensionError("eval_Hpsi expects a vector of the plant dimension");
    const Plant& p = cert.plant;
    const Vector target = sub(cert.ystar, y);

    double ds;
    Vector grad;
    if (p.damping_potential && p.damping_gradient) {
        ds = p.damping_potential(target) - p.damping_potential(cert.ystar);
        grad = p.damping_gradient(target);
    } else {
        // The combination below is invariant to the affine normalization of
        // S, so reconstructing about ystar is exact, not a convention.
        const MatrixField field = [&p, n](const Vector& x1) {
            return jacobians(p, x1, Vector(n, 0.0)).second;
        };
        ds = hessian_potential_from_field(field, cert.ystar, target);
        grad = hessian_potential_gradient(field, cert.ystar, target);
    }
    const double quad = 0.5 * (cert.gains.k2() - cert.psi) * dot(y, y);
    return cert.mu * (quad + ds + dot(grad, y));
}

double eval_V(const Certificate& cert, const TransformedState& ts) {
    const std::size_t n = cert.n();
    if (ts.x.size() != n || ts.y.size() != n || ts.z.size() != n)
        throw DimensionError("eval_V expects a transformed state of the plant dimension");
    Vector xi;
    xi.reserve(3 * n);
    xi.insert(xi.end(), ts.x.begin(), ts.x.end());
    xi.insert(xi.end(), ts.y.begin(), ts.y.end());
    xi.insert(xi.end(), ts.z.begin(), ts.z.end());
    double v = quadratic_form(cert.P, xi) + eval_H(cert, ts.y);
    if (cert.mode == CertMode::proposition1) v += eval_Hpsi(cert, ts.y);
    return v;
}

double q_min_eig(const Certificate& cert, const Vector& y, const Vector& z) {
    if (cert.mode != CertMode::theorem1)
        throw CertificateError("the Q-matrix witness belongs to theorem1 certificates");
    const std::size_t n = cert.n();
    if (y.size() != n || z.size() != n)
        throw DimensionError("q_min_eig expects vectors of the plant dimension");

    const Decomposition dec = decompose_g(cert.plant, cert.ystar, y, z);
    const double k0 = cert.gains.k0();
    const double k1 = cert.gains.k1();
    const double k2 = cert.gains.k2();
    const double mu = cert.mu;

    Matrix neg(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            neg(i, j) = -mu * dec.B(i, j);
            const double q12 = -0.5 * mu * dec.A(i, j) -
                               (i == j ? 0.5 * mu * (cert.psi - k2) : 0.0);
            neg(i, n + j) = q12;
            neg(n + j, i) = q12;
            neg(n + i, n + j) = -dec.A(i, j);
        }
        neg(i, i) += mu * k1 - k0;
        neg(n + i, n + i) += k2 - mu;
    }
    return eig_extremes(sym_part(neg)).min;
}

std::vector<double> v_series(const Certificate& cert, const Trajectory& traj) {
    const std::size_t m = traj.size();
    if (traj.x1.size() != m || traj.x2.size() != m || traj.x_int.size() != m)
        throw DomainError("trajectory series have inconsistent lengths");
    std::vector<double> v;
    v.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const TransformedState ts = transform_state(cert.plant, cert.gains, cert.ystar,
                                                    traj.x1[i], traj.x2[i], traj.x_int[i]);
        v.push_back(eval_V(cert, ts));
    }
    return v;
}

VdotSeries vdot_along(const Certificate& cert, const Trajectory& traj) {
    if (traj.size() < 3)
        throw DomainError("dV/dt needs at least three trajectory samples");
    const std::vector<double> v = v_series(cert, traj);
    VdotSeries out;
    out.t.reserve(traj.size() - 2);
    out.value.reserve(traj.size() - 2);
    out.max_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double h1 = traj.t[i] - traj.t[i - 1];
        const double h2 = traj.t[i + 1] - traj.t[i];
        const double wm = -h2 / (h1 * (h1 + h2));
        const double w0 = (h2 - h1) / (h1 * h2);
        const double wp = h1 / (h2 * (h1 + h2));
        const double d = wm * v[i - 1] + w0 * v[i] + wp * v[i + 1];
        out.t.push_back(traj.t[i]);
        out.value.push_back(d);
        out.max_value = std::max(out.max_value, d);
    }
    return out;
}

}  // namespace pidstab
