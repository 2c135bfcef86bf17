#pragma once

#include <optional>
#include <string>

#include "rdv/elements.hpp"
#include "rdv/vec3.hpp"

namespace rdv {

struct LambertSolution {
    Vec3 v1;             // velocity at r1 [m/s]
    Vec3 v2;             // velocity at r2 [m/s]
    int iterations = 0;  // universal-variable iterations used
};

enum class LambertStatus {
    ok,
    bad_time_of_flight,   // dt <= 0
    singular_geometry,    // transfer angle at 0 or pi, plane undefined
    no_convergence,       // iteration cap hit
};

struct LambertOutcome {
    LambertStatus status = LambertStatus::ok;
    LambertSolution solution;      // valid when status == ok
    double residual_s = 0.0;       // time-of-flight residual at exit [s]
};

// Zero-revolution Lambert targeting via universal-variable iteration.
// long_way selects the transfer angle branch > pi.
LambertOutcome try_solve_lambert(const Vec3& r1, const Vec3& r2, double dt, double mu, bool long_way);

// Throwing wrapper; error message carries the residual for diagnostics.
LambertSolution solve_lambert(const Vec3& r1, const Vec3& r2, double dt, double mu, bool long_way = false);

// Keplerian (two-body) propagation of an elliptic state. Throws
// std::invalid_argument for non-elliptic input.
CartesianState propagate_twobody(const CartesianState& s, double dt, double mu);

}  // namespace rdv
