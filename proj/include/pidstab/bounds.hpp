#pragma once

#include "pidstab/errors.hpp"

namespace pidstab {

/// Class bounds for the uncertainty sets: L1 caps the symmetric part of
/// df/dx1 ("anti-stiffness"), L2 caps the norm of df/dx2 ("anti-damping").
/// L1 may be any sign; L2 must be nonnegative.
struct ClassBounds {
    double L1;
    double L2;

    void validate() const {
        if (!(L2 >= 0.0)) throw DomainError("ClassBounds: L2 must be >= 0");
    }
};

}  // namespace pidstab
