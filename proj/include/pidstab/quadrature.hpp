#pragma once

#include <functional>

#include "pidstab/matnum.hpp"

namespace pidstab {

/// Nodes and weights on [0,1].
struct QuadratureRule {
    Vector nodes;
    Vector weights;
};

/// Gauss-Legendre rule mapped to [0,1], cached per order. Thread safe.
const QuadratureRule& gauss_legendre_01(int order);

/// Integrate a smooth vector-valued fn over [0,1]: the base rule on the whole
/// interval is compared against its bisection, and halving continues only
/// where the two disagree beyond abs_tol + rel_tol*|result|.
Vector integrate_01(const std::function<Vector(double)>& fn, int order = 16,
                    double rel_tol = 1e-10, double abs_tol = 1e-13, int max_depth = 10);

double integrate_scalar_01(const std::function<double(double)>& fn, int order = 16,
                           double rel_tol = 1e-10, double abs_tol = 1e-13, int max_depth = 10);

}  // namespace pidstab
