#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pidstab/matnum.hpp"
#include "pidstab/plants.hpp"
#include "pidstab/regions.hpp"

namespace pidstab {

enum class Integrator { rk4_fixed, rk45_adaptive };

/// Outcome of a closed-loop run. Converged means the tracking error stayed
/// inside the tolerance for a full dwell window; Diverged means the state
/// norm crossed the divergence threshold; anything else is Undecided.
enum class Verdict { converged, diverged, undecided };

const char* to_string(Verdict v);

struct SimConfig {
    Integrator integrator = Integrator::rk45_adaptive;
    double fixed_step = 1e-3;
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    double max_step = 0.25;
    double horizon = 100.0;
    double divergence_threshold = 1e6;
    double convergence_tol = 1e-6;
    double dwell = 5.0;
    // Times the integrator must land on exactly, strictly increasing and
    // within (0, horizon]. Useful when samples at specific times are compared
    // against closed-form solutions.
    std::vector<double> checkpoints;
    std::size_t max_steps = 20000000;

    void validate() const;
};

/// Sampled closed-loop run over the augmented state (x_int, x1, x2).
/// The verdict is recomputable from the stored series via classify().
struct Trajectory {
    std::vector<double> t;
    std::vector<Vector> x_int;
    std::vector<Vector> x1;
    std::vector<Vector> x2;
    std::vector<Vector> u;
    std::vector<double> err_norm;
    Verdict verdict = Verdict::undecided;
    // Converged: start of the successful dwell window. Diverged: first
    // threshold crossing. Undecided: final sample time.
    double decided_at = 0.0;
    std::string warning;

    std::size_t size() const { return t.size(); }
};

/// Integrates x_int' = e, x1' = x2, x2' = f(x1, x2) + b*u with the control
/// u = kp*e + ki*x_int - kd*x2 and e = ystar - x1. The integral state starts
/// at zero. Stops early once the verdict is decided.
Trajectory simulate(const Plant& p, const GainTriple& g, double b_actual,
                    const Vector& ystar, const Vector& x0, const Vector& v0,
                    const SimConfig& cfg = {});

/// Re-derives the verdict from a trajectory's stored series.
Verdict classify(const Trajectory& traj, const SimConfig& cfg);

struct TransformedState {
    Vector x;
    Vector y;
    Vector z;
};

/// Shifted coordinates in which the target equilibrium sits at the origin:
/// x = x_int + f(ystar, 0)/k0, y = ystar - x1, z = -x2.
TransformedState transform_state(const Plant& p, const ScaledGains& s,
                                 const Vector& ystar, const Vector& x1,
                                 const Vector& x2, const Vector& x_int);

}  // namespace pidstab
