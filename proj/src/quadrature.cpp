#include "pidstab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "pidstab/errors.hpp"

namespace pidstab {

namespace {

QuadratureRule build_rule(int order) {
    if (order < 1) throw DomainError("gauss_legendre_01: order must be >= 1");
    const int n = order;
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    // Roots of P_n on (-1,1) by Newton iteration; nodes come in +/- pairs.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1,1] -> [0,1].
        r.nodes[i] = 0.5 * (1.0 - x);
        r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        r.weights[i] = 0.5 * w;
        r.weights[n - 1 - i] = 0.5 * w;
    }
    return r;
}

const QuadratureRule& cached_rule(int order) {
    static std::mutex mu;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

Vector apply_rule(const std::function<Vector(double)>& fn, const QuadratureRule& r, double a,
                  double b) {
    const double len = b - a;
    Vector acc;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        Vector v = fn(a + len * r.nodes[i]);
        if (acc.empty()) acc.assign(v.size(), 0.0);
        if (v.size() != acc.size()) throw DimensionError("integrate_01: integrand size changed");
        axpy(len * r.weights[i], v, acc);
    }
    return acc;
}

void integrate_segment(const std::function<Vector(double)>& fn, const QuadratureRule& r, double a,
                       double b, const Vector& whole, double rel_tol, double abs_tol, int depth,
                       Vector& acc) {
    const double mid = 0.5 * (a + b);
    const Vector left = apply_rule(fn, r, a, mid);
    const Vector right = apply_rule(fn, r, mid, b);
    Vector refined = left;
    for (std::size_t i = 0; i < refined.size(); ++i) refined[i] += right[i];

    double diff = 0.0, size = 0.0;
    for (std::size_t i = 0; i < refined.size(); ++i) {
        diff = std::max(diff, std::abs(refined[i] - whole[i]));
        size = std::max(size, std::abs(refined[i]));
    }
    if (diff <= abs_tol + rel_tol * size) {
        for (std::size_t i = 0; i < refined.size(); ++i) acc[i] += refined[i];
        return;
    }
    if (depth <= 0) throw NumericError("integrate_01: bisection depth exhausted");
    integrate_segment(fn, r, a, mid, left, rel_tol, abs_tol, depth - 1, acc);
    integrate_segment(fn, r, mid, b, right, rel_tol, abs_tol, depth - 1, acc);
}

}  // namespace

const QuadratureRule& gauss_legendre_01(int order) { return cached_rule(order); }

Vector integrate_01(const std::function<Vector(double)>& fn, int order, double rel_tol,
                    double abs_tol, int max_depth) {
    const QuadratureRule& r = cached_rule(order);
    const Vector whole = apply_rule(fn, r, 0.0, 1.0);
    Vector acc(whole.size(), 0.0);
    integrate_segment(fn, r, 0.0, 1.0, whole, rel_tol, abs_tol, max_depth, acc);
    if (!all_finite(acc)) throw NumericError("integrate_01: non-finite result");
    return acc;
}

double integrate_scalar_01(const std::function<double(double)>& fn, int order, double rel_tol,
                           double abs_tol, int max_depth) {
    return integrate_01([&fn](double t) { return Vector{fn(t)}; }, order, rel_tol, abs_tol,
                        max_depth)[0];
}

}  // namespace pidstab
