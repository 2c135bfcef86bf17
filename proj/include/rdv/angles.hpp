#pragma once

#include <cmath>
#include <numbers>

namespace rdv {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double pi = std::numbers::pi;

// Normalize an angle to [0, 2*pi).
inline double wrap_two_pi(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    if (y >= two_pi) y = 0.0;  // fmod rounding can land exactly on 2*pi
    return y;
}

// Signed principal value of an angle difference, in (-pi, pi].
inline double wrap_pi(double x) {
    double y = std::fmod(x, two_pi);
    if (y <= -pi) y += two_pi;
    else if (y > pi) y -= two_pi;
    return y;
}

inline double deg2rad(double d) { return d * pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / pi; }

}  // namespace rdv
