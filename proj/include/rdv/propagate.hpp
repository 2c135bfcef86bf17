#pragma once

#include "rdv/constants.hpp"
#include "rdv/elements.hpp"

namespace rdv {

// Secular drift rates of the slow angles under the J2 zonal term [rad/s].
// `mean` is the full mean-anomaly rate including the Keplerian mean motion.
struct SecularRates {
    double raan = 0.0;
    double argp = 0.0;
    double mean = 0.0;
};

SecularRates j2_secular_rates(const OrbitalElements& el, const PhysicalConstants& k);

// Node drift rate -(3/2) J2 (re/p)^2 n cos(i)  [rad/s].
double raan_rate(const OrbitalElements& el, const PhysicalConstants& k);

// Secular J2 propagation: a, e, i held fixed; raan, argp and mean anomaly
// advanced linearly and renormalized to [0, 2*pi). dt may be negative.
OrbitalElements propagate_j2(const OrbitalElements& el, double dt, const PhysicalConstants& k);

}  // namespace rdv
