#include "pidstab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pidstab/errors.hpp"

namespace pidstab {

namespace {

std::string vec_str(const Vector& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

// Right-hand side of the augmented system. State layout: [x_int | x1 | x2].
struct ClosedLoop {
    const Plant& p;
    double kp, ki, kd, b;
    const Vector& ystar;
    std::size_t n;

    Vector control(const Vector& s) const {
        Vector u(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double e = ystar[i] - s[n + i];
            u[i] = kp * e + ki * s[i] - kd * s[2 * n + i];
        }
        return u;
    }

    Vector operator()(double t, const Vector& s) const {
        const Vector x1(s.begin() + static_cast<std::ptrdiff_t>(n),
                        s.begin() + static_cast<std::ptrdiff_t>(2 * n));
        const Vector x2(s.begin() + static_cast<std::ptrdiff_t>(2 * n), s.end());
        const Vector f = p.f(x1, x2);
        if (f.size() != n)
            throw DimensionError("plant returned a vector of size " +
                                 std::to_string(f.size()) + ", expected " + std::to_string(n));
        if (!all_finite(f)) {
            std::ostringstream os;
            os << "plant value is not finite at t=" << t << ", x1=" << vec_str(x1)
               << ", x2=" << vec_str(x2);
            throw EvaluationError(os.str());
        }
        const Vector u = control(s);
        Vector ds(3 * n);
        for (std::size_t i = 0; i < n; ++i) {
            ds[i] = ystar[i] - s[n + i];
            ds[n + i] = s[2 * n + i];
            ds[2 * n + i] = f[i] + b * u[i];
        }
        return ds;
    }
};

// Incremental verdict tracker shared by simulate() and classify().
struct Decider {
    double tol;
    double dwell;
    double threshold;
    double run_start = -1.0;
    bool have_run = false;

    // Returns true once the verdict is final.
    bool feed(double t, double full_norm, double conv_measure, Verdict& v, double& at) {
        if (!(full_norm <= threshold)) {
            v = Verdict::diverged;
            at = t;
            return true;
        }
        if (conv_measure < tol) {
            if (!have_run) {
                have_run = true;
                run_start = t;
            }
            if (t - run_start >= dwell) {
                v = Verdict::converged;
                at = run_start;
                return true;
            }
        } else {
            have_run = false;
        }
        return false;
    }
};

struct Sample {
    double full_norm;
    double conv_measure;
};

Sample append_sample(Trajectory& traj, const ClosedLoop& rhs, double t, const Vector& s) {
    const std::size_t n = rhs.n;
    Vector xi(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
    Vector x1(s.begin() + static_cast<std::ptrdiff_t>(n),
              s.begin() + static_cast<std::ptrdiff_t>(2 * n));
    Vector x2(s.begin() + static_cast<std::ptrdiff_t>(2 * n), s.end());
    Vector e = sub(rhs.ystar, x1);
    traj.t.push_back(t);
    traj.u.push_back(rhs.control(s));
    traj.err_norm.push_back(norm2(e));
    traj.x_int.push_back(std::move(xi));
    traj.x1.push_back(std::move(x1));
    traj.x2.push_back(std::move(x2));
    return Sample{norm2(s), traj.err_norm.back() + norm2(traj.x2.back())};
}

// Dormand-Prince 5(4) embedded pair, first-same-as-last.
struct Dopri {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // Difference between the fifth- and fourth-order weights.
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
    static constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
    static constexpr double e4 = 125.0 / 192 - 393.0 / 640;
    static constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
    static constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
    static constexpr double e7 = -1.0 / 40;
};

Vector combo(const Vector& y, double h, std::initializer_list<std::pair<const Vector*, double>> ks) {
    Vector out = y;
    for (const auto& [k, w] : ks) axpy(h * w, *k, out);
    return out;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::converged:
            return "Converged";
        case Verdict::diverged:
            return "Diverged";
        default:
            return "Undecided";
    }
}

void SimConfig::validate() const {
    if (integrator == Integrator::rk4_fixed && !(fixed_step > 0.0))
        throw DomainError("fixed_step must be positive");
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    if (!(max_step > 0.0)) throw DomainError("max_step must be positive");
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    if (!(divergence_threshold > 0.0)) throw DomainError("divergence_threshold must be positive");
    if (!(convergence_tol > 0.0)) throw DomainError("convergence_tol must be positive");
    if (!(dwell > 0.0)) throw DomainError("dwell must be positive");
    if (max_steps == 0) throw DomainError("max_steps must be positive");
    double prev = 0.0;
    for (double c : checkpoints) {
        if (!(c > prev)) throw DomainError("checkpoints must be strictly increasing and positive");
        if (c > horizon) throw DomainError("checkpoint beyond the horizon");
        prev = c;
    }
}

Trajectory simulate(const Plant& p, const GainTriple& g, double b_actual, const Vector& ystar,
                    const Vector& x0, const Vector& v0, const SimConfig& cfg) {
    cfg.validate();
    g.validate();
    const std::size_t n = p.n;
    if (ystar.size() != n || x0.size() != n || v0.size() != n)
        throw DimensionError("ystar, x0, v0 must all have the plant dimension " +
                             std::to_string(n));
    if (!all_finite(ystar) || !all_finite(x0) || !all_finite(v0))
        throw DomainError("initial data must be finite");
    if (!(b_actual > 0.0)) throw DomainError("b_actual must be positive");

    Trajectory traj;
    if (b_actual < g.b_lower) {
        std::ostringstream os;
        os << "b_actual=" << b_actual << " is below the declared lower bound b_lower="
           << g.b_lower << "; region guarantees do not apply";
        traj.warning = os.str();
    }

    const ClosedLoop rhs{p, g.kp, g.ki, g.kd, b_actual, ystar, n};

    Vector s(3 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s[n + i] = x0[i];
        s[2 * n + i] = v0[i];
    }

    Decider dec{cfg.convergence_tol, cfg.dwell, cfg.divergence_threshold};
    double t = 0.0;

    const Sample first = append_sample(traj, rhs, t, s);
    if (dec.feed(t, first.full_norm, first.conv_measure, traj.verdict, traj.decided_at))
        return traj;

    // Step targets the integrator must hit exactly.
    std::vector<double> targets = cfg.checkpoints;
    if (targets.empty() || targets.back() < cfg.horizon) targets.push_back(cfg.horizon);
    std::size_t target_idx = 0;

    std::size_t steps = 0;
    const auto bump_steps = [&] {
        if (++steps > cfg.max_steps)
            throw StiffnessError("step budget exhausted at t=" + std::to_string(t));
    };

    if (cfg.integrator == Integrator::rk4_fixed) {
        while (t < cfg.horizon) {
            bump_steps();
            const double target = targets[target_idx];
            const double remaining = target - t;
            const bool landed = remaining <= cfg.fixed_step;
            const double h = landed ? remaining : cfg.fixed_step;
            const Vector k1 = rhs(t, s);
            const Vector k2 = rhs(t + h / 2, combo(s, h, {{&k1, 0.5}}));
            const Vector k3 = rhs(t + h / 2, combo(s, h, {{&k2, 0.5}}));
            const Vector k4 = rhs(t + h, combo(s, h, {{&k3, 1.0}}));
            for (std::size_t i = 0; i < s.size(); ++i)
                s[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            t = landed ? target : t + h;
            if (landed) ++target_idx;
            const Sample smp = append_sample(traj, rhs, t, s);
            if (dec.feed(t, smp.full_norm, smp.conv_measure, traj.verdict, traj.decided_at))
                return traj;
        }
        traj.verdict = Verdict::undecided;
        traj.decided_at = t;
        return traj;
    }

    double h = std::min(cfg.max_step, cfg.horizon * 1e-3);
    Vector k1 = rhs(t, s);
    while (t < cfg.horizon) {
        const double target = targets[target_idx];
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t);
        // Only the controller's own step can underflow; a tiny clamp onto a
        // target time is a harmless final hop.
        if (h < h_min) throw StiffnessError("step size underflow at t=" + std::to_string(t));
        bool landing = false;
        double h_try = h;
        if (h_try >= target - t) {
            h_try = target - t;
            landing = true;
        }
        bump_steps();

        using D = Dopri;
        const Vector k2 = rhs(t + h_try / 5, combo(s, h_try, {{&k1, D::a21}}));
        const Vector k3 = rhs(t + 3 * h_try / 10, combo(s, h_try, {{&k1, D::a31}, {&k2, D::a32}}));
        const Vector k4 =
            rhs(t + 4 * h_try / 5, combo(s, h_try, {{&k1, D::a41}, {&k2, D::a42}, {&k3, D::a43}}));
        const Vector k5 = rhs(t + 8 * h_try / 9,
                              combo(s, h_try,
                                    {{&k1, D::a51}, {&k2, D::a52}, {&k3, D::a53}, {&k4, D::a54}}));
        const Vector k6 = rhs(
            t + h_try,
            combo(s, h_try,
                  {{&k1, D::a61}, {&k2, D::a62}, {&k3, D::a63}, {&k4, D::a64}, {&k5, D::a65}}));
        const Vector y5 = combo(
            s, h_try, {{&k1, D::b1}, {&k3, D::b3}, {&k4, D::b4}, {&k5, D::b5}, {&k6, D::b6}});
        const Vector k7 = rhs(t + h_try, y5);

        double err_sq = 0.0;
        bool finite = all_finite(y5);
        if (finite) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double e = h_try * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] +
                                          D::e5 * k5[i] + D::e6 * k6[i] + D::e7 * k7[i]);
                const double sc =
                    cfg.abs_tol + cfg.rel_tol * std::max(std::abs(s[i]), std::abs(y5[i]));
                err_sq += (e / sc) * (e / sc);
            }
        }
        const double err = finite ? std::sqrt(err_sq / static_cast<double>(s.size()))
                                  : std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            t = landing ? target : t + h_try;
            if (landing) ++target_idx;
            s = y5;
            k1 = k7;
            const Sample smp = append_sample(traj, rhs, t, s);
            if (dec.feed(t, smp.full_norm, smp.conv_measure, traj.verdict, traj.decided_at))
                return traj;
            const double grow =
                std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            h = std::min(cfg.max_step, h_try * grow);
        } else {
            const double shrink = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            h = h_try * shrink;
        }
    }
    traj.verdict = Verdict::undecided;
    traj.decided_at = t;
    return traj;
}

Verdict classify(const Trajectory& traj, const SimConfig& cfg) {
    cfg.validate();
    if (traj.t.empty()) throw DomainError("cannot classify an empty trajectory");
    for (std::size_t i = 1; i < traj.t.size(); ++i)
        if (!(traj.t[i] > traj.t[i - 1]))
            throw DomainError("trajectory times must be strictly increasing");

    Decider dec{cfg.convergence_tol, cfg.dwell, cfg.divergence_threshold};
    Verdict v = Verdict::undecided;
    double at = 0.0;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        double full_sq = 0.0;
        for (const Vector* part : {&traj.x_int[i], &traj.x1[i], &traj.x2[i]})
            for (double x : *part) full_sq += x * x;
        const double conv = traj.err_norm[i] + norm2(traj.x2[i]);
        if (dec.feed(traj.t[i], std::sqrt(full_sq), conv, v, at)) return v;
    }
    return Verdict::undecided;
}

TransformedState transform_state(const Plant& p, const ScaledGains& sg, const Vector& ystar,
                                 const Vector& x1, const Vector& x2, const Vector& x_int) {
    const std::size_t n = p.n;
    if (ystar.size() != n || x1.size() != n || x2.size() != n || x_int.size() != n)
        throw DimensionError("transform_state expects vectors of the plant dimension");
    if (sg.k0() == 0.0) throw DomainError("transform requires a nonzero integral gain");
    const Vector f0 = p.f(ystar, Vector(n, 0.0));
    TransformedState out;
    out.x = x_int;
    axpy(1.0 / sg.k0(), f0, out.x);
    out.y = sub(ystar, x1);
    out.z = scaled(x2, -1.0);
    return out;
}

}  // namespace pidstab
