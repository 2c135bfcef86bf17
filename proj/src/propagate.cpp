#include "rdv/propagate.hpp"

#include <cmath>

#include "rdv/angles.hpp"

namespace rdv {

SecularRates j2_secular_rates(const OrbitalElements& el, const PhysicalConstants& k) {
    const double p = semilatus_rectum(el);
    const double n = mean_motion(el, k);
    const double factor = k.j2 * (k.re / p) * (k.re / p) * n;
    const double ci = std::cos(el.i);

    SecularRates rates;
    rates.raan = -1.5 * factor * ci;
    rates.argp = 0.75 * factor * (5.0 * ci * ci - 1.0);
    rates.mean = n + 0.75 * factor * std::sqrt(1.0 - el.e * el.e) * (3.0 * ci * ci - 1.0);
    return rates;
}

double raan_rate(const OrbitalElements& el, const PhysicalConstants& k) {
    return j2_secular_rates(el, k).raan;
}

OrbitalElements propagate_j2(const OrbitalElements& el, double dt, const PhysicalConstants& k) {
    const SecularRates rates = j2_secular_rates(el, k);
    OrbitalElements out = el;
    out.raan = wrap_two_pi(el.raan + rates.raan * dt);
    out.argp = wrap_two_pi(el.argp + rates.argp * dt);
    out.mean_anomaly = wrap_two_pi(el.mean_anomaly + rates.mean * dt);
    out.epoch = el.epoch + dt;
    return out;
}

}  // namespace rdv
