#pragma once

#include "rdv/constants.hpp"
#include "rdv/vec3.hpp"

namespace rdv {

// Osculating Keplerian state. Angles in radians, canonical anomaly is the
// mean anomaly; epoch is seconds past an arbitrary reference.
struct OrbitalElements {
    double a = 0.0;             // semi-major axis [m]
    double e = 0.0;             // eccentricity [-]
    double i = 0.0;             // inclination [rad]
    double raan = 0.0;          // right ascension of ascending node [rad]
    double argp = 0.0;          // argument of perigee [rad]
    double mean_anomaly = 0.0;  // [rad]
    double epoch = 0.0;         // [s]
};

struct CartesianState {
    Vec3 r;              // position [m]
    Vec3 v;              // velocity [m/s]
    double epoch = 0.0;  // [s]
};

// Throws std::invalid_argument if the element invariants are violated
// (a > 0, 0 <= e < 1, 0 <= i <= pi, angles finite).
void validate(const OrbitalElements& el);

// Returns a copy with raan/argp/mean_anomaly wrapped to [0, 2*pi).
OrbitalElements normalized_angles(const OrbitalElements& el);

double semilatus_rectum(const OrbitalElements& el);                       // a(1-e^2) [m]
double mean_motion(const OrbitalElements& el, const PhysicalConstants& k);  // sqrt(mu/a^3) [rad/s]
double orbital_period(const OrbitalElements& el, const PhysicalConstants& k);  // [s]

// Solves E - e*sin(E) = M to |residual| <= 1e-12 rad. Newton iteration with a
// guaranteed bisection fallback; throws std::runtime_error if neither
// converges (does not happen for e < 1).
double solve_kepler(double mean_anomaly, double e);

double mean_to_eccentric_anomaly(double mean_anomaly, double e);
double eccentric_to_true_anomaly(double eccentric_anomaly, double e);
double true_to_eccentric_anomaly(double true_anomaly, double e);
double mean_to_true_anomaly(double mean_anomaly, double e);
double true_to_mean_anomaly(double true_anomaly, double e);

// Argument of latitude u = argp + true anomaly, wrapped to [0, 2*pi).
double argument_of_latitude(const OrbitalElements& el);

CartesianState elements_to_cartesian(const OrbitalElements& el, const PhysicalConstants& k);
CartesianState elements_to_cartesian(const OrbitalElements& el, double mu);

// Inverse of elements_to_cartesian. Throws std::invalid_argument for
// non-elliptic (specific energy >= 0) or rectilinear input.
OrbitalElements cartesian_to_elements(const CartesianState& s, const PhysicalConstants& k);
OrbitalElements cartesian_to_elements(const CartesianState& s, double mu);

}  // namespace rdv
