#include "rdv/lambert.hpp"

#include <cmath>
#include <stdexcept>

#include "rdv/angles.hpp"

namespace rdv {

namespace {

struct Stumpff {
    double c;  // C(z)
    double s;  // S(z)
};

Stumpff stumpff(double z) {
    Stumpff out;
    if (z > 1e-4) {
        const double sz = std::sqrt(z);
        // 2 sin^2(x/2) == 1 - cos(x) without cancellation near full turns.
        const double half_sin = std::sin(0.5 * sz);
        out.c = 2.0 * half_sin * half_sin / z;
        out.s = (sz - std::sin(sz)) / (z * sz);
    } else if (z < -1e-4) {
        const double sz = std::sqrt(-z);
        out.c = (std::cosh(sz) - 1.0) / (-z);
        out.s = (std::sinh(sz) - sz) / (-z * sz);
    } else {
        // Series about z = 0; truncation error ~ z^4 / 10! is below 1e-22 here.
        out.c = 1.0 / 2.0 - z / 24.0 + z * z / 720.0 - z * z * z / 40320.0;
        out.s = 1.0 / 6.0 - z / 120.0 + z * z / 5040.0 - z * z * z / 362880.0;
    }
    return out;
}

}  // namespace

LambertOutcome try_solve_lambert(const Vec3& r1, const Vec3& r2, double dt, double mu, bool long_way) {
    LambertOutcome out;
    if (!(dt > 0.0)) {
        out.status = LambertStatus::bad_time_of_flight;
        return out;
    }
    const double r1n = norm(r1);
    const double r2n = norm(r2);
    if (!(r1n > 0.0) || !(r2n > 0.0)) {
        out.status = LambertStatus::singular_geometry;
        return out;
    }

    double cosd = dot(r1, r2) / (r1n * r2n);
    if (cosd > 1.0) cosd = 1.0;
    if (cosd < -1.0) cosd = -1.0;
    const double one_plus = 1.0 + cosd;
    if (one_plus < 1e-15) {
        // Transfer angle within ~1e-8 rad of pi: no unique plane.
        out.status = LambertStatus::singular_geometry;
        return out;
    }
    // sin(dnu)/sqrt(1 - cos(dnu)) == sqrt(1 + cos(dnu)), stable for small angles.
    const double a_coef = (long_way ? -1.0 : 1.0) * std::sqrt(r1n * r2n * one_plus);

    const double sqrt_mu = std::sqrt(mu);
    const double target = sqrt_mu * dt;

    const auto y_of = [&](double z, const Stumpff& st) {
        return r1n + r2n + a_coef * (z * st.s - 1.0) / std::sqrt(st.c);
    };
    const auto f_of = [&](double z, const Stumpff& st, double y) {
        return std::pow(y / st.c, 1.5) * st.s + a_coef * std::sqrt(y) - target;
    };

    constexpr double z_cap = two_pi * two_pi - 1e-9;  // zero-revolution branch only

    // Bracket the root: F < 0 at z_lo, F > 0 at z_hi, y > 0 on both.
    double z_lo, z_hi;
    {
        const Stumpff st0 = stumpff(0.0);
        const double y0 = y_of(0.0, st0);
        const double f0 = (y0 > 0.0) ? f_of(0.0, st0, y0) : -target;
        if (f0 < 0.0 || y0 <= 0.0) {
            z_lo = 0.0;
            if (y0 <= 0.0) {
                // Does not occur for valid geometry (y(0) = r1 + r2 - |A|*sqrt(2) > 0),
                // but fail closed rather than iterate on garbage.
                out.status = LambertStatus::singular_geometry;
                return out;
            }
            double step = 1.0;
            z_hi = z_cap;
            bool found = false;
            for (int it = 0; it < 80 && !found; ++it) {
                double z_try = z_lo + step;
                if (z_try > z_cap) z_try = z_cap;
                const Stumpff st = stumpff(z_try);
                const double y = y_of(z_try, st);
                if (y > 0.0 && f_of(z_try, st, y) > 0.0) {
                    z_hi = z_try;
                    found = true;
                } else {
                    z_lo = z_try;
                    step *= 2.0;
                    if (z_try >= z_cap) break;
                }
            }
            if (!found) {
                out.status = LambertStatus::no_convergence;
                out.residual_s = -dt;
                return out;
            }
        } else {
            z_hi = 0.0;
            double z_good = 0.0;  // F > 0 here
            double step = 1.0;
            bool found = false;
            for (int it = 0; it < 200 && !found; ++it) {
                const double z_try = z_good - step;
                const Stumpff st = stumpff(z_try);
                const double y = y_of(z_try, st);
                if (y <= 0.0) {
                    step *= 0.5;  // stepped past y = 0; retreat toward z_good
                    continue;
                }
                if (f_of(z_try, st, y) < 0.0) {
                    z_lo = z_try;
                    found = true;
                } else {
                    z_good = z_try;
                    z_hi = z_try;
                    step *= 2.0;
                }
            }
            if (!found) {
                out.status = LambertStatus::no_convergence;
                out.residual_s = dt;
                return out;
            }
        }
    }

    // Safeguarded Newton on F(z) within the bracket.
    const double tol_f = sqrt_mu * (1e-12 * dt + 1e-14);
    double z = 0.5 * (z_lo + z_hi);
    double y = 0.0, f = 0.0;
    Stumpff st{};
    bool converged = false;
    int it = 0;
    for (; it < 60; ++it) {
        st = stumpff(z);
        y = y_of(z, st);
        if (y <= 0.0) {
            z = 0.5 * (z_lo + z_hi);
            continue;
        }
        f = f_of(z, st, y);
        if (std::abs(f) <= tol_f) {
            converged = true;
            break;
        }
        if (f > 0.0) z_hi = z;
        else z_lo = z;

        double dfdz;
        if (std::abs(z) > 1e-8) {
            dfdz = std::pow(y / st.c, 1.5) *
                       (0.5 / z * (st.c - 1.5 * st.s / st.c) + 0.75 * st.s * st.s / st.c) +
                   0.125 * a_coef * (3.0 * st.s / st.c * std::sqrt(y) + a_coef * std::sqrt(st.c / y));
        } else {
            dfdz = std::sqrt(2.0) / 40.0 * std::pow(y, 1.5) +
                   0.125 * a_coef * (std::sqrt(y) + a_coef * std::sqrt(0.5 / y));
        }
        double z_next = (std::isfinite(dfdz) && dfdz != 0.0) ? z - f / dfdz : z;
        if (!(z_next > z_lo && z_next < z_hi)) z_next = 0.5 * (z_lo + z_hi);
        if (z_next == z) break;  // stagnated at double precision
        z = z_next;
    }
    out.residual_s = f / sqrt_mu;
    if (!converged && std::abs(f) > sqrt_mu * (1e-8 * dt + 1e-10)) {
        out.status = LambertStatus::no_convergence;
        return out;
    }

    // Lagrange coefficients.
    const double f_lag = 1.0 - y / r1n;
    const double g_lag = a_coef * std::sqrt(y / mu);
    const double gdot_lag = 1.0 - y / r2n;
    out.solution.v1 = (r2 - f_lag * r1) / g_lag;
    out.solution.v2 = (gdot_lag * r2 - r1) / g_lag;
    out.solution.iterations = it;
    out.status = LambertStatus::ok;

    if (one_plus < 1e-5) {
        // Within ~3e-3 rad of a pi transfer the Lagrange assembly loses
        // several digits; polish the departure velocity by differential
        // correction against the two-body propagator.
        try {
            Vec3 v1 = out.solution.v1;
            CartesianState arrive{};
            for (int polish = 0; polish < 6; ++polish) {
                arrive = propagate_twobody({r1, v1, 0.0}, dt, mu);
                const Vec3 miss = arrive.r - r2;
                if (norm(miss) < 1e-11 * r2n) break;
                Vec3 col[3];
                const double dv = 1e-4;
                for (int axis = 0; axis < 3; ++axis) {
                    Vec3 vp = v1;
                    (axis == 0 ? vp.x : axis == 1 ? vp.y : vp.z) += dv;
                    const CartesianState p = propagate_twobody({r1, vp, 0.0}, dt, mu);
                    col[axis] = (p.r - arrive.r) / dv;
                }
                const double det = dot(col[0], cross(col[1], col[2]));
                if (det == 0.0 || !std::isfinite(det)) break;
                const Vec3 rhs = -1.0 * miss;
                const Vec3 delta{dot(rhs, cross(col[1], col[2])) / det,
                                 dot(col[0], cross(rhs, col[2])) / det,
                                 dot(col[0], cross(col[1], rhs)) / det};
                v1 += delta;
            }
            out.solution.v1 = v1;
            out.solution.v2 = propagate_twobody({r1, v1, 0.0}, dt, mu).v;
        } catch (const std::exception&) {
            // Non-elliptic polish arc: keep the unpolished solution.
        }
    }
    return out;
}

LambertSolution solve_lambert(const Vec3& r1, const Vec3& r2, double dt, double mu, bool long_way) {
    const LambertOutcome out = try_solve_lambert(r1, r2, dt, mu, long_way);
    switch (out.status) {
        case LambertStatus::ok:
            return out.solution;
        case LambertStatus::bad_time_of_flight:
            throw std::invalid_argument("lambert: time of flight must be positive");
        case LambertStatus::singular_geometry:
            throw std::invalid_argument("lambert: transfer angle at 0 or pi, plane undefined");
        case LambertStatus::no_convergence:
            throw std::runtime_error("lambert: no convergence, time-of-flight residual " +
                                     std::to_string(out.residual_s) + " s");
    }
    throw std::logic_error("unreachable");
}

CartesianState propagate_twobody(const CartesianState& s, double dt, double mu) {
    OrbitalElements el = cartesian_to_elements(s, mu);
    const double n = std::sqrt(mu / (el.a * el.a * el.a));
    el.mean_anomaly = wrap_two_pi(el.mean_anomaly + n * dt);
    el.epoch += dt;
    return elements_to_cartesian(el, mu);
}

}  // namespace rdv
