#include "rdv/elements.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdv/angles.hpp"

namespace rdv {

namespace {

// Below these thresholds the node line / eccentricity vector lose direction
// and the degenerate angle is reported as zero.
constexpr double kCircularEccThreshold = 1e-11;
constexpr double kEquatorialSinThreshold = 1e-11;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

void validate(const OrbitalElements& el) {
    if (!(el.a > 0.0)) throw std::invalid_argument("semi-major axis must be positive");
    if (!(el.e >= 0.0 && el.e < 1.0)) throw std::invalid_argument("eccentricity must be in [0, 1)");
    if (!(el.i >= 0.0 && el.i <= pi)) throw std::invalid_argument("inclination must be in [0, pi]");
    if (!std::isfinite(el.raan) || !std::isfinite(el.argp) || !std::isfinite(el.mean_anomaly) ||
        !std::isfinite(el.epoch)) {
        throw std::invalid_argument("element angles and epoch must be finite");
    }
}

OrbitalElements normalized_angles(const OrbitalElements& el) {
    OrbitalElements out = el;
    out.raan = wrap_two_pi(el.raan);
    out.argp = wrap_two_pi(el.argp);
    out.mean_anomaly = wrap_two_pi(el.mean_anomaly);
    return out;
}

double semilatus_rectum(const OrbitalElements& el) { return el.a * (1.0 - el.e * el.e); }

double mean_motion(const OrbitalElements& el, const PhysicalConstants& k) {
    return std::sqrt(k.mu / (el.a * el.a * el.a));
}

double orbital_period(const OrbitalElements& el, const PhysicalConstants& k) {
    return two_pi / mean_motion(el, k);
}

double solve_kepler(double mean_anomaly, double e) {
    if (!(e >= 0.0 && e < 1.0)) throw std::invalid_argument("solve_kepler requires 0 <= e < 1");
    const double m_wrapped = wrap_two_pi(mean_anomaly);
    const double offset = mean_anomaly - m_wrapped;  // multiple of 2*pi, returned to the caller

    constexpr double tol = 1e-12;
    double ecc = m_wrapped + (std::sin(m_wrapped) >= 0.0 ? 0.85 * e : -0.85 * e);
    for (int it = 0; it < 30; ++it) {
        const double g = ecc - e * std::sin(ecc) - m_wrapped;
        if (std::abs(g) <= tol) return ecc + offset;
        ecc -= g / (1.0 - e * std::cos(ecc));
    }

    // Bisection on the monotone residual; E is bracketed by M +/- e.
    double lo = m_wrapped - e;
    double hi = m_wrapped + e;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = mid - e * std::sin(mid) - m_wrapped;
        if (std::abs(g) <= tol) return mid + offset;
        if (g < 0.0) lo = mid;
        else hi = mid;
    }
    throw std::runtime_error("solve_kepler failed to converge");
}

double mean_to_eccentric_anomaly(double mean_anomaly, double e) { return solve_kepler(mean_anomaly, e); }

double eccentric_to_true_anomaly(double eccentric_anomaly, double e) {
    const double s = std::sqrt(1.0 - e * e) * std::sin(eccentric_anomaly);
    const double c = std::cos(eccentric_anomaly) - e;
    return wrap_two_pi(std::atan2(s, c));
}

double true_to_eccentric_anomaly(double true_anomaly, double e) {
    const double s = std::sqrt(1.0 - e * e) * std::sin(true_anomaly);
    const double c = e + std::cos(true_anomaly);
    return wrap_two_pi(std::atan2(s, c));
}

double mean_to_true_anomaly(double mean_anomaly, double e) {
    return eccentric_to_true_anomaly(solve_kepler(mean_anomaly, e), e);
}

double true_to_mean_anomaly(double true_anomaly, double e) {
    const double ecc = true_to_eccentric_anomaly(true_anomaly, e);
    return wrap_two_pi(ecc - e * std::sin(ecc));
}

double argument_of_latitude(const OrbitalElements& el) {
    return wrap_two_pi(el.argp + mean_to_true_anomaly(el.mean_anomaly, el.e));
}

CartesianState elements_to_cartesian(const OrbitalElements& el, const PhysicalConstants& k) {
    return elements_to_cartesian(el, k.mu);
}

CartesianState elements_to_cartesian(const OrbitalElements& el, double mu) {
    const double ecc = solve_kepler(el.mean_anomaly, el.e);
    const double cos_e = std::cos(ecc);
    const double sin_e = std::sin(ecc);
    const double root = std::sqrt(1.0 - el.e * el.e);
    const double r_mag = el.a * (1.0 - el.e * cos_e);

    // Perifocal position/velocity.
    const double xp = el.a * (cos_e - el.e);
    const double yp = el.a * root * sin_e;
    const double vscale = std::sqrt(mu * el.a) / r_mag;
    const double vxp = -vscale * sin_e;
    const double vyp = vscale * root * cos_e;

    const double co = std::cos(el.raan), so = std::sin(el.raan);
    const double cw = std::cos(el.argp), sw = std::sin(el.argp);
    const double ci = std::cos(el.i), si = std::sin(el.i);

    // Rows of Rz(raan)*Rx(i)*Rz(argp) applied to (xp, yp, 0).
    const Vec3 px{co * cw - so * sw * ci, -co * sw - so * cw * ci, so * si};
    const Vec3 py{so * cw + co * sw * ci, -so * sw + co * cw * ci, -co * si};
    const Vec3 pz{sw * si, cw * si, ci};

    CartesianState s;
    s.r = {px.x * xp + px.y * yp, py.x * xp + py.y * yp, pz.x * xp + pz.y * yp};
    s.v = {px.x * vxp + px.y * vyp, py.x * vxp + py.y * vyp, pz.x * vxp + pz.y * vyp};
    s.epoch = el.epoch;
    return s;
}

OrbitalElements cartesian_to_elements(const CartesianState& s, const PhysicalConstants& k) {
    return cartesian_to_elements(s, k.mu);
}

OrbitalElements cartesian_to_elements(const CartesianState& s, double mu) {
    const double r_mag = norm(s.r);
    const double v_mag2 = dot(s.v, s.v);
    if (!(r_mag > 0.0)) throw std::invalid_argument("position magnitude must be positive");

    const Vec3 h = cross(s.r, s.v);
    const double h_mag = norm(h);
    if (!(h_mag > 1e-6 * r_mag)) throw std::invalid_argument("rectilinear state has no defined orbit plane");

    const double energy = 0.5 * v_mag2 - mu / r_mag;
    if (!(energy < 0.0)) throw std::invalid_argument("state is not elliptic (specific energy >= 0)");

    OrbitalElements el;
    el.a = -mu / (2.0 * energy);
    el.epoch = s.epoch;

    const Vec3 evec = (1.0 / mu) * ((v_mag2 - mu / r_mag) * s.r - dot(s.r, s.v) * s.v);
    el.e = norm(evec);
    if (el.e >= 1.0) throw std::invalid_argument("state is not elliptic (e >= 1)");

    const Vec3 h_hat = h / h_mag;
    el.i = std::acos(clamp_unit(h_hat.z));

    // Node line z x h; degenerates for equatorial orbits.
    Vec3 n{-h.y, h.x, 0.0};
    const double n_mag = norm(n);
    Vec3 n_hat{1.0, 0.0, 0.0};
    if (n_mag > kEquatorialSinThreshold * h_mag) {
        n_hat = n / n_mag;
        el.raan = wrap_two_pi(std::atan2(n_hat.y, n_hat.x));
    } else {
        el.raan = 0.0;
    }

    const Vec3 r_hat = s.r / r_mag;
    double true_anom;
    if (el.e > kCircularEccThreshold) {
        const Vec3 e_hat = evec / el.e;
        el.argp = wrap_two_pi(std::atan2(dot(e_hat, cross(h_hat, n_hat)), dot(e_hat, n_hat)));
        true_anom = std::atan2(dot(r_hat, cross(h_hat, e_hat)), dot(r_hat, e_hat));
    } else {
        // Circular: perigee undefined, measure the anomaly from the node line.
        el.argp = 0.0;
        true_anom = std::atan2(dot(r_hat, cross(h_hat, n_hat)), dot(r_hat, n_hat));
    }
    el.mean_anomaly = true_to_mean_anomaly(true_anom, el.e);
    return el;
}

}  // namespace rdv
