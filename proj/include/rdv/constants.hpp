#pragma once

#include <string>

namespace rdv {

// Earth gravity model used throughout the toolkit. Defaults are the
// conventional WGS-84-class values; all three can be overridden from a
// config file.
struct PhysicalConstants {
    double mu = 398600.4418e9;   // gravitational parameter [m^3/s^2]
    double j2 = 1.08262668e-3;   // J2 zonal coefficient [-]
    double re = 6378137.0;       // equatorial radius [m]
};

void validate(const PhysicalConstants& k);

// Flat key/value file, keys `mu`, `j2`, `re` in SI units. Missing keys keep
// their defaults; unknown keys are an error. `#` starts a comment, `=` between
// key and value is optional.
PhysicalConstants load_constants(const std::string& path);

}  // namespace rdv
