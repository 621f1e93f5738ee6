// Acceptance gate: eight property checks at desk scale, each with a pinned
// tolerance and a wall-clock budget. Prints one line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pidstab/certificates.hpp"
#include "pidstab/errors.hpp"
#include "pidstab/falsifier.hpp"
#include "pidstab/plants.hpp"
#include "pidstab/regions.hpp"
#include "pidstab/simulator.hpp"
#include "test_support.hpp"

using namespace pidstab;
using namespace testutil;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << v;
    return ss.str();
}

// --- 1. Region/Hurwitz agreement -------------------------------------------

Outcome criterion_region_hurwitz() {
    constexpr int kSamples = 10000;
    constexpr double kBand = 1e-10;
    auto g = rng(0xA11CE501u);
    int disagreements = 0;
    int banded = 0;
    for (int i = 0; i < kSamples; ++i) {
        const ClassBounds bounds{urand(g, -2.0, 3.0), urand(g, 0.0, 3.0)};
        const double b_lower = urand(g, 0.2, 2.0);
        const GainTriple t{urand(g, -3.0, 9.0), urand(g, -1.0, 7.0), urand(g, -3.0, 9.0),
                           b_lower};
        const double b = urand(g, b_lower, 10.0 * b_lower);
        const RegionVerdict v = in_omega2(scale_gains(t, b), bounds);
        const double band = std::min(std::min(std::abs(v.margin_k1), std::abs(v.margin_k2)),
                                     std::min(std::abs(v.margin_k0), std::abs(v.margin_product)));
        if (band <= kBand) {
            ++banded;
            continue;
        }
        if (v.in_region != hurwitz_cubic(worst_case_poly(t, b, bounds))) ++disagreements;
    }
    std::ostringstream d;
    d << kSamples << " samples, " << disagreements << " disagreements, " << banded
      << " inside the " << kBand << " band";
    return {disagreements == 0, d.str()};
}

// --- shared samplers --------------------------------------------------------

struct RegionSample {
    GainTriple gains;
    ClassBounds bounds;
};

// Rejection sampler for members of the sufficient region with every margin at
// or above `floor`. Nonnegative L1 keeps the samples inside the range where
// the ray property holds.
RegionSample sample_omega1(std::mt19937_64& g, double floor = 0.0) {
    for (;;) {
        const ClassBounds bounds{urand(g, 0.0, 2.0), urand(g, 0.0, 2.0)};
        const GainTriple t{urand(g, bounds.L1 + 0.01, bounds.L1 + 6.0), urand(g, 0.01, 4.0),
                           urand(g, bounds.L2 + 0.01, bounds.L2 + 6.0), 1.0};
        const RegionVerdict v = in_omega1(scale_at_lower(t), bounds);
        if (v.in_region && v.min_margin() >= floor) return {t, bounds};
    }
}

RegionSample sample_omega2(std::mt19937_64& g) {
    for (;;) {
        const ClassBounds bounds{urand(g, 0.0, 2.0), urand(g, 0.0, 2.0)};
        const GainTriple t{urand(g, bounds.L1 + 0.01, bounds.L1 + 6.0), urand(g, 0.01, 4.0),
                           urand(g, bounds.L2 + 0.01, bounds.L2 + 6.0), 1.0};
        if (in_omega2(scale_at_lower(t), bounds).in_region) return {t, bounds};
    }
}

// --- 2. Containment and ray scaling ----------------------------------------

Outcome criterion_containment_scaling() {
    constexpr int kSamples = 10000;
    constexpr int kMembers = 1000;
    const Vector alphas{1.0, 1.5, 2.0, 5.0, 10.0};

    auto g = rng(0xA11CE502u);
    int containment_violations = 0;
    for (int i = 0; i < kSamples; ++i) {
        const ClassBounds bounds{urand(g, -2.0, 3.0), urand(g, 0.0, 3.0)};
        const double b_lower = urand(g, 0.2, 2.0);
        const GainTriple t{urand(g, -3.0, 9.0), urand(g, -1.0, 7.0), urand(g, -3.0, 9.0),
                           b_lower};
        const double b = urand(g, b_lower, 10.0 * b_lower);
        const ScaledGains s = scale_gains(t, b);
        if (in_omega1(s, bounds).in_region && !in_omega2(s, bounds).in_region)
            ++containment_violations;
    }

    int membership_losses = 0;
    int ray_failures = 0;
    double worst_forward_difference = 0.0;
    for (int i = 0; i < kMembers; ++i) {
        const RegionSample smp = sample_omega1(g);
        for (const double alpha : alphas)
            if (!in_omega1(scale_gains(smp.gains, alpha), smp.bounds).in_region)
                ++membership_losses;
        const RayMonotonicityReport ray =
            check_ray_monotonicity(scale_at_lower(smp.gains), smp.bounds, alphas);
        worst_forward_difference = std::min(worst_forward_difference, ray.min_forward_difference);
        if (!ray.passes) ++ray_failures;
    }

    std::ostringstream d;
    d << containment_violations << " containment violations / " << kSamples << ", "
      << membership_losses << " membership losses and " << ray_failures
      << " ray failures / " << kMembers << " members (worst forward difference "
      << fmt(worst_forward_difference) << ")";
    return {containment_violations == 0 && membership_losses == 0 && ray_failures == 0,
            d.str()};
}

// --- 3. Certificate validity ------------------------------------------------

Outcome criterion_certificate_validity() {
    constexpr int kTriples = 1000;
    constexpr double kIdentityTol = 1e-12;
    auto g = rng(0xA11CE503u);

    int margin_failures = 0;
    int pd_failures = 0;
    for (int i = 0; i < kTriples; ++i) {
        const RegionSample smp = sample_omega1(g);
        const Plant plant = make_worst_case_plant(1, smp.bounds);
        try {
            const Certificate cert = build_certificate(scale_at_lower(smp.gains), smp.bounds,
                                                       plant, {0.4}, CertMode::theorem1);
            const CertificateCheck chk = check_P(cert);
            for (const auto& iq : chk.inequalities)
                if (!(iq.margin > 0.0)) ++margin_failures;
            if (!chk.positive_definite || !(chk.p_min_eig > 0.0)) ++pd_failures;
        } catch (const std::exception&) {
            ++margin_failures;
        }
    }

    int identity_failures = 0;
    int pd2_failures = 0;
    double worst_identity = 0.0;
    for (int i = 0; i < kTriples; ++i) {
        const RegionSample smp = sample_omega2(g);
        const Plant plant = make_worst_case_plant(1, smp.bounds);
        try {
            const ScaledGains s = scale_at_lower(smp.gains);
            const Certificate cert =
                build_certificate(s, smp.bounds, plant, {0.4}, CertMode::proposition1);
            // The two inequality margins collapse to scaled copies of the
            // region's product margin.
            const double gap = cert.phi0 * cert.psi0 - s.k0();
            const double lhs1 = cert.mu * cert.phi0 - s.k0();
            const double lhs2 = cert.psi0 - cert.mu;
            const double e1 = std::abs(lhs1 - 0.5 * gap) / std::max(1.0, std::abs(lhs1));
            const double e2 =
                std::abs(lhs2 - gap / (2.0 * cert.phi0)) / std::max(1.0, std::abs(lhs2));
            worst_identity = std::max(worst_identity, std::max(e1, e2));
            if (e1 > kIdentityTol || e2 > kIdentityTol) ++identity_failures;
            const CertificateCheck chk = check_P(cert);
            if (!chk.positive_definite || !(chk.p_min_eig > 0.0)) ++pd2_failures;
        } catch (const std::exception&) {
            ++identity_failures;
        }
    }

    std::ostringstream d;
    d << kTriples << " sufficient-region triples: " << margin_failures << " margin and "
      << pd_failures << " definiteness failures; " << kTriples
      << " necessary-region triples: " << identity_failures << " identity (worst "
      << fmt(worst_identity) << ") and " << pd2_failures << " definiteness failures";
    return {margin_failures == 0 && pd_failures == 0 && identity_failures == 0 &&
                pd2_failures == 0,
            d.str()};
}

// --- 4. Lyapunov decrease ---------------------------------------------------

std::vector<Plant> decrease_plants(const ClassBounds& bounds, std::mt19937_64& g) {
    std::vector<Plant> plants;
    const std::size_t dims[] = {1, 2, 3, 5};
    for (const std::size_t n : dims) plants.push_back(make_worst_case_plant(n, bounds));
    for (const std::size_t n : dims) {
        for (int variant = 0; variant < 2; ++variant) {
            // Scale symmetric draws so the spectra stay inside the claimed
            // bounds: |lambda| <= Frobenius norm.
            Matrix A = random_sym(g, n, 1.0).as_matrix();
            A *= (0.8 * bounds.L1) / std::max(1e-9, A.frobenius_norm());
            Matrix B = random_sym(g, n, 1.0).as_matrix();
            B *= (0.8 * bounds.L2) / std::max(1e-9, B.frobenius_norm());
            plants.push_back(
                make_linear_plant(A, B, random_vector(g, n, -0.3, 0.3), bounds));
        }
    }
    for (const std::size_t n : dims) {
        for (int variant = 0; variant < 2; ++variant) {
            const double a = (variant == 0 ? 0.5 : 0.75) * bounds.L1;
            Matrix B = random_sym(g, n, 1.0).as_matrix();
            B *= (0.7 * bounds.L2) / std::max(1e-9, B.frobenius_norm());
            plants.push_back(make_sinusoidal_plant(n, a, B, bounds));
        }
    }
    return plants;
}

Outcome criterion_lyapunov_decrease() {
    constexpr int kTriples = 20;
    constexpr int kStates = 3;
    // Margin floor keeps the sampled loops fast enough to settle well before
    // the 200-unit horizon.
    constexpr double kMarginFloor = 0.15;
    const ClassBounds bounds{0.8, 0.6};

    auto g = rng(0xA11CE504u);
    const std::vector<Plant> plants = decrease_plants(bounds, g);

    std::vector<GainTriple> triples;
    for (int i = 0; i < kTriples; ++i) {
        for (;;) {
            const GainTriple t{urand(g, bounds.L1 + 0.2, bounds.L1 + 6.0),
                               urand(g, 0.2, 3.0),
                               urand(g, bounds.L2 + 0.2, bounds.L2 + 6.0), 1.0};
            const RegionVerdict v = in_omega1(scale_at_lower(t), bounds);
            if (v.in_region && v.min_margin() >= kMarginFloor) {
                triples.push_back(t);
                break;
            }
        }
    }

    SimConfig cfg;
    cfg.horizon = 200.0;
    cfg.max_step = 0.05;
    // Decide convergence at 1e-5 so the dwell window closes within the
    // horizon for the slowest sampled loops; the explicit error check below
    // still enforces the 1e-4 bar.
    cfg.convergence_tol = 1e-5;

    int runs = 0;
    int decrease_failures = 0;
    int convergence_failures = 0;
    double worst_ratio = -1e300;  // max of vdot_max / max(1, V(0))
    std::string first_failure;
    for (const Plant& plant : plants) {
        for (const GainTriple& t : triples) {
            for (int s = 0; s < kStates; ++s) {
                const Vector ystar = random_vector(g, plant.n, -0.8, 0.8);
                Vector x0 = ystar;
                for (auto& v : x0) v += urand(g, -1.5, 1.5);
                const Vector v0 = random_vector(g, plant.n, -0.6, 0.6);

                const Certificate cert = build_certificate(
                    scale_at_lower(t), bounds, plant, ystar, CertMode::theorem1);
                const Trajectory traj = simulate(plant, t, 1.0, ystar, x0, v0, cfg);
                ++runs;
                if (traj.verdict != Verdict::converged || !(traj.err_norm.back() < 1e-4) ||
                    traj.t.back() > 200.0) {
                    ++convergence_failures;
                    if (first_failure.empty()) {
                        std::ostringstream f;
                        f << " [first: plant " << to_string(traj.verdict) << " n=" << plant.n
                          << " kind=" << static_cast<int>(plant.kind) << " kp=" << t.kp
                          << " ki=" << t.ki << " kd=" << t.kd
                          << " err=" << traj.err_norm.back() << " t_end=" << traj.t.back()
                          << "]";
                        first_failure = f.str();
                    }
                }

                const std::vector<double> v = v_series(cert, traj);
                const VdotSeries vd = vdot_along(cert, traj);
                const double scale = std::max(1.0, v.front());
                worst_ratio = std::max(worst_ratio, vd.max_value / scale);
                if (!(vd.max_value <= 1e-6 * scale)) ++decrease_failures;
            }
        }
    }

    std::ostringstream d;
    d << runs << " runs (" << plants.size() << " plants x " << kTriples << " triples x "
      << kStates << " states): " << decrease_failures << " decrease and "
      << convergence_failures << " convergence failures (worst scaled dV/dt "
      << fmt(worst_ratio) << ")" << first_failure;
    return {decrease_failures == 0 && convergence_failures == 0, d.str()};
}

// --- 5. Structured-class tightness ------------------------------------------

Outcome criterion_tightness() {
    constexpr int kGapGains = 200;
    constexpr int kViolators = 100;
    const ClassBounds bounds{1.0, 1.0};

    auto g = rng(0xA11CE505u);

    std::vector<Plant> plants;
    plants.push_back(make_worst_case_plant(1, bounds));
    {
        Matrix B(1, 1);
        B(0, 0) = -0.5;
        plants.push_back(make_sinusoidal_plant(1, 0.9, B, bounds));
    }
    {
        Matrix B(2, 2);
        B(0, 0) = -0.4;
        B(0, 1) = B(1, 0) = 0.1;
        B(1, 1) = -0.3;
        plants.push_back(make_sinusoidal_plant(2, 0.8, B, bounds));
    }
    {
        Matrix A(2, 2), B(2, 2);
        A(0, 0) = 0.6;
        A(0, 1) = A(1, 0) = 0.15;
        A(1, 1) = 0.5;
        B(0, 0) = -0.3;
        B(0, 1) = B(1, 0) = 0.05;
        B(1, 1) = -0.2;
        plants.push_back(make_linear_plant(A, B, {0.1, -0.05}, bounds));
    }
    {
        Matrix A(1, 1), B(1, 1);
        A(0, 0) = 0.95;
        B(0, 0) = 0.4;  // anti-damping, still inside the class
        plants.push_back(make_linear_plant(A, B, {0.2}, bounds));
    }

    // Gains in the gap between the necessary and sufficient regions. The
    // spectral-abscissa guard keeps the slowest closed-loop mode fast enough
    // to settle within the horizon.
    std::vector<GainTriple> gap_gains;
    while (gap_gains.size() < kGapGains) {
        const GainTriple t{urand(g, 1.05, 7.0), urand(g, 0.05, 4.0), urand(g, 1.05, 7.0),
                           1.0};
        const ScaledGains s = scale_at_lower(t);
        if (!in_omega2(s, bounds).in_region || in_omega1(s, bounds).in_region) continue;
        const auto roots = cubic_roots(worst_case_poly(t, 1.0, bounds));
        double re_max = -1e300;
        for (const auto& r : roots) re_max = std::max(re_max, r.real());
        if (re_max <= -0.08) gap_gains.push_back(t);
    }

    SimConfig cfg;
    cfg.horizon = 200.0;

    int runs = 0;
    int non_converged = 0;
    for (const GainTriple& t : gap_gains) {
        for (const Plant& plant : plants) {
            const Vector ystar(plant.n, 0.8);
            const Trajectory traj =
                simulate(plant, t, 1.0, ystar, Vector(plant.n, 0.0), Vector(plant.n, 0.0), cfg);
            ++runs;
            if (traj.verdict != Verdict::converged) ++non_converged;
        }
    }

    int falsifier_failures = 0;
    for (int i = 0; i < kViolators; ++i) {
        const double kp = urand(g, 1.2, 5.0);
        const double kd = urand(g, 1.2, 5.0);
        const double product = (kp - bounds.L1) * (kd - bounds.L2);
        // Integral gain pushed past the product bound by at least 10%.
        const double ki = (product / 0.9) * urand(g, 1.05, 3.0);
        const GainTriple t{kp, ki, kd, 1.0};
        try {
            const Counterexample cx = find_counterexample(t, bounds);
            if (!(cx.max_real_part > 0.0) || cx.trajectory.verdict == Verdict::converged)
                ++falsifier_failures;
        } catch (const std::exception&) {
            ++falsifier_failures;
        }
    }

    std::ostringstream d;
    d << runs << " gap-gain runs with " << non_converged << " non-converged; " << kViolators
      << " product violators with " << falsifier_failures << " falsification failures";
    return {non_converged == 0 && falsifier_failures == 0, d.str()};
}

// --- 6. Potential machinery --------------------------------------------------

Outcome criterion_potentials() {
    constexpr int kPoints = 100;
    constexpr double kPotentialTol = 1e-8;
    constexpr double kHessianTol = 1e-5;

    auto g = rng(0xA11CE506u);
    Matrix B(2, 2);
    B(0, 0) = -0.3;
    B(0, 1) = B(1, 0) = 0.1;
    B(1, 1) = -0.2;
    const Plant plant = make_sinusoidal_plant(2, 0.7, B, ClassBounds{0.7, 0.5});
    const Vector base{0.3, -0.4};

    int potential_failures = 0;
    double worst_potential = 0.0;
    const double u_base = plant.potential(base);
    for (int i = 0; i < kPoints; ++i) {
        const Vector x = random_vector(g, 2, -3.0, 3.0);
        const double rec = potential_from_field(plant, base, x);
        const double ref = plant.potential(x) - u_base;
        const double err = std::abs(rec - ref) / std::max(1.0, std::abs(ref));
        worst_potential = std::max(worst_potential, err);
        if (err > kPotentialTol) ++potential_failures;
    }

    // Position-dependent Hessian field of a known scalar:
    // S = 0.3 sin(x1) + 0.1 x1^2 + 0.15 x1 x2 + 0.2 cos(x2) + 0.15 x2^2.
    const MatrixField field = [](const Vector& x) {
        Matrix a(2, 2);
        a(0, 0) = -0.3 * std::sin(x[0]) + 0.2;
        a(0, 1) = a(1, 0) = 0.15;
        a(1, 1) = -0.2 * std::cos(x[1]) + 0.3;
        return a;
    };
    const Vector s_base{0.2, 0.1};
    const auto s_rec = [&](const Vector& x) {
        return hessian_potential_from_field(field, s_base, x);
    };
    int hessian_failures = 0;
    double worst_hessian = 0.0;
    const double h = 1e-3;
    for (int i = 0; i < 20; ++i) {
        const Vector x = random_vector(g, 2, -2.0, 2.0);
        const Matrix a = field(x);
        for (std::size_t r = 0; r < 2; ++r) {
            for (std::size_t c = r; c < 2; ++c) {
                Vector xp = x, xm = x, xpm = x, xmp = x;
                double fd;
                if (r == c) {
                    xp[r] += h;
                    xm[r] -= h;
                    fd = (s_rec(xp) - 2.0 * s_rec(x) + s_rec(xm)) / (h * h);
                } else {
                    xp[r] += h;
                    xp[c] += h;
                    xm[r] -= h;
                    xm[c] -= h;
                    xpm[r] += h;
                    xpm[c] -= h;
                    xmp[r] -= h;
                    xmp[c] += h;
                    fd = (s_rec(xp) - s_rec(xpm) - s_rec(xmp) + s_rec(xm)) / (4.0 * h * h);
                }
                const double err = std::abs(fd - a(r, c));
                worst_hessian = std::max(worst_hessian, err);
                if (err > kHessianTol) ++hessian_failures;
            }
        }
    }

    // Symmetric but not integrable: d a11 / d x2 != d a12 / d x1.
    const MatrixField broken = [](const Vector& x) {
        Matrix a(2, 2);
        a(0, 0) = x[1];
        return a;
    };
    bool rejected = false;
    try {
        (void)hessian_potential_from_field(broken, s_base, Vector{1.0, 1.0});
    } catch (const NotHessianFieldError&) {
        rejected = true;
    }

    std::ostringstream d;
    d << kPoints << " potential points with " << potential_failures << " failures (worst "
      << fmt(worst_potential) << "); Hessian reconstruction worst error " << fmt(worst_hessian)
      << " with " << hessian_failures << " failures; non-integrable field "
      << (rejected ? "rejected" : "NOT rejected");
    return {potential_failures == 0 && hessian_failures == 0 && rejected, d.str()};
}

// --- 7. Decomposition ---------------------------------------------------------

Outcome criterion_decomposition() {
    constexpr int kSamples = 1000;
    auto g = rng(0xA11CE507u);

    std::vector<Plant> plants;
    plants.push_back(make_worst_case_plant(3, ClassBounds{0.9, 0.7}));
    {
        Matrix B(1, 1);
        B(0, 0) = -0.4;
        plants.push_back(make_sinusoidal_plant(1, 0.8, B));
    }
    {
        Matrix B(2, 2);
        B(0, 0) = -0.3;
        B(0, 1) = B(1, 0) = 0.1;
        B(1, 1) = -0.2;
        plants.push_back(make_sinusoidal_plant(2, 0.6, B));
    }
    plants.push_back(make_linear_plant(random_matrix(g, 2, 2, -0.5, 0.5),
                                       random_matrix(g, 2, 2, -0.3, 0.3),
                                       random_vector(g, 2, -0.2, 0.2)));
    plants.push_back(make_linear_plant(random_matrix(g, 5, 5, -0.3, 0.3),
                                       random_matrix(g, 5, 5, -0.2, 0.2),
                                       random_vector(g, 5, -0.2, 0.2)));

    int failures = 0;
    double worst = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const Plant& plant = plants[i % plants.size()];
        const Vector ystar = random_vector(g, plant.n, -1.0, 1.0);
        const Vector y = random_vector(g, plant.n, -2.0, 2.0);
        const Vector z = random_vector(g, plant.n, -2.0, 2.0);
        const Decomposition dec = decompose_g(plant, ystar, y, z);
        Vector shifted = ystar;
        for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] -= y[k];
        Vector neg_z = z;
        for (auto& v : neg_z) v = -v;
        const Vector gvec =
            sub(plant.f(ystar, Vector(plant.n, 0.0)), plant.f(shifted, neg_z));
        const double scaled = dec.residual / (1.0 + norm2(gvec));
        worst = std::max(worst, scaled);
        if (scaled > 1e-8) ++failures;
    }

    std::ostringstream d;
    d << kSamples << " samples across " << plants.size() << " plants, " << failures
      << " residual failures (worst scaled residual " << fmt(worst) << ")";
    return {failures == 0, d.str()};
}

// --- 8. Simulator fidelity -----------------------------------------------------

Outcome criterion_simulator_fidelity() {
    constexpr double kFlowTol = 1e-6;
    Matrix A(2, 2), B(2, 2);
    A(0, 0) = -0.2;
    A(0, 1) = 0.1;
    A(1, 0) = 0.1;
    A(1, 1) = -0.3;
    B(0, 0) = -0.1;
    B(1, 1) = -0.2;
    const Vector c{0.1, -0.05};
    const Plant plant = make_linear_plant(A, B, c);
    const GainTriple gains{5.0, 1.0, 3.0, 1.0};
    const Vector ystar{0.5, -0.2};
    const Vector x0{1.2, 0.3};
    const Vector v0{-0.5, 0.8};

    Matrix M;
    Vector r;
    linear_closed_loop(A, B, c, 1.0, gains.kp, gains.ki, gains.kd, ystar, M, r);
    Vector z0(6, 0.0);
    for (int i = 0; i < 2; ++i) {
        z0[2 + i] = x0[i];
        z0[4 + i] = v0[i];
    }

    SimConfig cfg;
    cfg.horizon = 10.0;
    cfg.checkpoints = {1.0, 5.0, 10.0};
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-9;
    cfg.convergence_tol = 1e-14;  // keep the run alive through the horizon
    const Trajectory traj = simulate(plant, gains, 1.0, ystar, x0, v0, cfg);

    double worst_flow = 0.0;
    int matched = 0;
    for (const double target : cfg.checkpoints) {
        for (std::size_t i = 0; i < traj.size(); ++i) {
            if (std::abs(traj.t[i] - target) > 1e-9) continue;
            ++matched;
            const Vector ref = affine_flow(M, r, z0, traj.t[i]);
            for (int k = 0; k < 2; ++k) {
                worst_flow = std::max(worst_flow, std::abs(traj.x1[i][k] - ref[2 + k]));
                worst_flow = std::max(worst_flow, std::abs(traj.x2[i][k] - ref[4 + k]));
            }
            break;
        }
    }

    // Fixed-step order probe: halving the step must cut the endpoint error by
    // the fourth-order factor, within a generous band.
    const auto endpoint_error = [&](double step) {
        SimConfig fc;
        fc.integrator = Integrator::rk4_fixed;
        fc.fixed_step = step;
        fc.horizon = 2.0;
        fc.convergence_tol = 1e-14;
        const Trajectory tr = simulate(plant, gains, 1.0, ystar, x0, v0, fc);
        const Vector ref = affine_flow(M, r, z0, tr.t.back());
        double err = 0.0;
        for (int k = 0; k < 2; ++k) {
            err = std::max(err, std::abs(tr.x1.back()[k] - ref[2 + k]));
            err = std::max(err, std::abs(tr.x2.back()[k] - ref[4 + k]));
        }
        return err;
    };
    const double e_coarse = endpoint_error(0.05);
    const double e_fine = endpoint_error(0.025);
    const double ratio = e_coarse / e_fine;

    std::ostringstream d;
    d << matched << "/3 checkpoints matched, worst deviation " << fmt(worst_flow)
      << "; step-halving error ratio " << fmt(ratio);
    return {matched == 3 && worst_flow <= kFlowTol && ratio >= 8.0 && ratio <= 32.0, d.str()};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"region/Hurwitz agreement", 5.0, criterion_region_hurwitz},
        {"containment and ray scaling", 5.0, criterion_containment_scaling},
        {"certificate validity", 10.0, criterion_certificate_validity},
        {"Lyapunov decrease", 120.0, criterion_lyapunov_decrease},
        {"structured-class tightness", 120.0, criterion_tightness},
        {"potential machinery", 10.0, criterion_potentials},
        {"force decomposition", 10.0, criterion_decomposition},
        {"simulator fidelity", 10.0, criterion_simulator_fidelity},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out = {false, std::string("unexpected exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = seconds <= criteria[i].budget_seconds;
        const bool pass = out.pass && in_budget;
        if (!pass) ++failures;
        std::printf("[%s] %zu/%zu %s: %s (%.2fs / %.0fs budget)%s\n", pass ? "PASS" : "FAIL",
                    i + 1, criteria.size(), criteria[i].name.c_str(), out.detail.c_str(),
                    seconds, criteria[i].budget_seconds,
                    in_budget ? "" : " [budget exceeded]");
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
