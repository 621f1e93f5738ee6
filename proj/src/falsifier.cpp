#include "pidstab/falsifier.hpp"

#include <algorithm>
#include <cmath>

#include "pidstab/errors.hpp"

namespace pidstab {

namespace {

using Complex = std::complex<double>;
using Roots = std::array<Complex, 3>;

Complex eval_poly(const CubicPoly& p, Complex z) {
    return ((z + p.a2) * z + p.a1) * z + p.a0;
}

Complex eval_deriv(const CubicPoly& p, Complex z) { return (3.0 * z + 2.0 * p.a2) * z + p.a1; }

void polish(const CubicPoly& p, Roots& roots) {
    for (Complex& z : roots) {
        for (int it = 0; it < 2; ++it) {
            const Complex d = eval_deriv(p, z);
            const double scale =
                1e-8 * (1.0 + std::norm(z) + std::abs(p.a2) * std::abs(z) + std::abs(p.a1));
            if (std::abs(d) <= scale) break;  // repeated root, Newton unusable
            z -= eval_poly(p, z) / d;
        }
    }
}

// Stable real roots of s^2 + beta s + gamma.
std::pair<Complex, Complex> quadratic_roots(double beta, double gamma) {
    const double disc = beta * beta - 4.0 * gamma;
    if (disc < 0.0) {
        const double im = std::sqrt(-disc) / 2.0;
        return {Complex(-beta / 2.0, -im), Complex(-beta / 2.0, im)};
    }
    if (beta == 0.0) {
        const double r = std::sqrt(disc) / 2.0;
        return {Complex(-r, 0.0), Complex(r, 0.0)};
    }
    const double big = -(beta + std::copysign(std::sqrt(disc), beta)) / 2.0;
    return {Complex(big, 0.0), Complex(gamma / big, 0.0)};
}

}  // namespace

CubicPoly worst_case_poly(const GainTriple& g, double b, const ClassBounds& bounds) {
    bounds.validate();
    if (!(b > 0.0)) throw DomainError("worst_case_poly requires b > 0");
    return CubicPoly{b * g.kd - bounds.L2, b * g.kp - bounds.L1, b * g.ki};
}

bool hurwitz_cubic(const CubicPoly& p) {
    return p.a2 > 0.0 && p.a1 > 0.0 && p.a0 > 0.0 && p.a2 * p.a1 > p.a0;
}

std::array<std::complex<double>, 3> cubic_roots(const CubicPoly& c) {
    // Depressed form u^3 + p u + q with s = u - a2/3.
    const double shift = c.a2 / 3.0;
    const double p = c.a1 - c.a2 * c.a2 / 3.0;
    const double q = 2.0 * c.a2 * c.a2 * c.a2 / 27.0 - c.a2 * c.a1 / 3.0 + c.a0;

    Roots u;
    if (p == 0.0 && q == 0.0) {
        u = {Complex(0.0), Complex(0.0), Complex(0.0)};
    } else if (4.0 * p * p * p + 27.0 * q * q <= 0.0) {
        // Three real roots (p < 0 here); the trigonometric form is stable.
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            u[static_cast<std::size_t>(k)] =
                Complex(m * std::cos((phi - 2.0 * M_PI * k) / 3.0), 0.0);
    } else {
        // One real root via the cancellation-free Cardano branch, then the
        // conjugate pair from the deflated quadratic.
        const double rad = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        const double w3 = q >= 0.0 ? -q / 2.0 - rad : -q / 2.0 + rad;
        const double w = std::cbrt(w3);
        const double u1 = w == 0.0 ? 0.0 : w - p / (3.0 * w);
        const double r1 = u1 - shift;
        const double beta = c.a2 + r1;
        const double gamma = c.a1 + r1 * beta;
        const auto [z2, z3] = quadratic_roots(beta, gamma);
        Roots out{Complex(r1, 0.0), z2, z3};
        polish(c, out);
        std::sort(out.begin(), out.end(), [](const Complex& x, const Complex& y) {
            if (x.real() != y.real()) return x.real() < y.real();
            return x.imag() < y.imag();
        });
        return out;
    }

    Roots out;
    for (std::size_t i = 0; i < 3; ++i) out[i] = u[i] - shift;
    polish(c, out);
    std::sort(out.begin(), out.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return out;
}

SimConfig falsifier_config() {
    SimConfig cfg;
    cfg.horizon = 200.0;
    return cfg;
}

Counterexample find_counterexample(const GainTriple& g, const ClassBounds& bounds,
                                   std::size_t dim, const SimConfig& cfg) {
    g.validate();
    bounds.validate();
    if (dim == 0) throw DimensionError("counterexample dimension must be positive");
    const ScaledGains s = scale_at_lower(g);
    if (in_omega2(s, bounds).in_region)
        throw RegionError(
            "gains lie inside the necessary region at b_lower; the worst-case "
            "construction cannot exhibit instability for them");

    Counterexample ce;
    ce.b = g.b_lower;
    ce.poly = worst_case_poly(g, g.b_lower, bounds);
    ce.roots = cubic_roots(ce.poly);
    ce.max_real_part = ce.roots[0].real();
    for (const Complex& z : ce.roots) ce.max_real_part = std::max(ce.max_real_part, z.real());

    if (ce.poly.a2 <= 0.0) {
        ce.failed_inequality = "a2 > 0";
        ce.failed_margin = ce.poly.a2;
    } else if (ce.poly.a1 <= 0.0) {
        ce.failed_inequality = "a1 > 0";
        ce.failed_margin = ce.poly.a1;
    } else if (ce.poly.a0 <= 0.0) {
        ce.failed_inequality = "a0 > 0";
        ce.failed_margin = ce.poly.a0;
    } else {
        ce.failed_inequality = "a2*a1 > a0";
        ce.failed_margin = ce.poly.a2 * ce.poly.a1 - ce.poly.a0;
    }

    ce.ystar.assign(dim, 0.0);
    ce.ystar[0] = 1.0;
    ce.x0.assign(dim, 0.0);
    ce.v0.assign(dim, 0.0);

    ce.plant = make_worst_case_plant(dim, bounds);
    ce.trajectory = simulate(ce.plant, g, g.b_lower, ce.ystar, ce.x0, ce.v0, cfg);
    if (ce.trajectory.verdict == Verdict::converged) {
        // Degenerate setup (e.g. ki = 0 with L1 = 0): without a force offset
        // the setpoint is accidentally an equilibrium even without integral
        // action. A constant offset removes the coincidence.
        Vector c(dim, 0.0);
        c[0] = 1.0;
        ce.plant = make_worst_case_plant(dim, bounds, c);
        ce.trajectory = simulate(ce.plant, g, g.b_lower, ce.ystar, ce.x0, ce.v0, cfg);
        if (ce.trajectory.verdict == Verdict::converged)
            throw NumericError(
                "worst-case construction converged unexpectedly; refusing to "
                "report a counterexample that does not falsify");
    }
    return ce;
}

}  // namespace pidstab
