#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rdv/angles.hpp"
#include "rdv/constants.hpp"
#include "rdv/elements.hpp"
#include "rdv/propagate.hpp"
#include "rdv/rng.hpp"

using namespace rdv;

namespace {

const PhysicalConstants kEarth{};

// Independent root-finder for Kepler's equation: bisection on the monotone
// residual E - e*sin(E) - M.
double kepler_bisection(double m, double e) {
    double lo = m - e, hi = m + e;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid - e * std::sin(mid) < m) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

OrbitalElements random_leo_elements(Rng& rng) {
    OrbitalElements el;
    el.a = rng.uniform(6.9e6, 7.3e6);
    el.e = rng.uniform(0.0, 0.02);
    el.i = rng.uniform(deg2rad(96.0), deg2rad(101.0));
    el.raan = rng.uniform(0.0, two_pi);
    el.argp = rng.uniform(0.0, two_pi);
    el.mean_anomaly = rng.uniform(0.0, two_pi);
    return el;
}

}  // namespace

TEST_CASE("kepler solver symmetry points") {
    CHECK(std::abs(solve_kepler(0.0, 0.5)) < 1e-12);
    CHECK(std::abs(solve_kepler(pi, 0.9) - pi) < 1e-11);
}

TEST_CASE("kepler solver against bisection oracle") {
    const double e_ref = kepler_bisection(1.0, 0.1);
    CHECK(std::abs(solve_kepler(1.0, 0.1) - e_ref) < 1e-11);

    Rng rng(42);
    for (int it = 0; it < 2000; ++it) {
        const double m = rng.uniform(0.0, two_pi);
        const double e = rng.uniform(0.0, 0.95);
        const double ecc = solve_kepler(m, e);
        CHECK(std::abs(ecc - e * std::sin(ecc) - m) <= 1e-12);
    }
}

TEST_CASE("kepler solver preserves whole revolutions") {
    const double m = 3.0 * two_pi + 1.0;
    const double ecc = solve_kepler(m, 0.1);
    CHECK(std::abs(ecc - 0.1 * std::sin(ecc) - m) <= 1e-11);
}

TEST_CASE("circular equatorial orbit geometry") {
    OrbitalElements el;
    el.a = 7.0e6;
    const CartesianState s = elements_to_cartesian(el, kEarth);
    const double v_circ = std::sqrt(kEarth.mu / el.a);
    CHECK(s.r.x == doctest::Approx(7.0e6).epsilon(1e-12));
    CHECK(std::abs(s.r.y) < 1e-6);
    CHECK(std::abs(s.r.z) < 1e-6);
    CHECK(std::abs(s.v.x) < 1e-9);
    CHECK(s.v.y == doctest::Approx(v_circ).epsilon(1e-12));
    CHECK(std::abs(s.v.z) < 1e-9);
}

TEST_CASE("element/cartesian round trip on random LEO states") {
    Rng rng(7);
    for (int it = 0; it < 10000; ++it) {
        const OrbitalElements el = random_leo_elements(rng);
        const CartesianState s = elements_to_cartesian(el, kEarth);

        // Specific energy and angular momentum against closed forms.
        const double energy = 0.5 * dot(s.v, s.v) - kEarth.mu / norm(s.r);
        CHECK(energy == doctest::Approx(-kEarth.mu / (2.0 * el.a)).epsilon(1e-10));
        const double h = norm(cross(s.r, s.v));
        CHECK(h == doctest::Approx(std::sqrt(kEarth.mu * semilatus_rectum(el))).epsilon(1e-10));

        const OrbitalElements back = cartesian_to_elements(s, kEarth);
        CHECK(back.a == doctest::Approx(el.a).epsilon(1e-9));
        CHECK(std::abs(back.e - el.e) < 1e-10);
        CHECK(std::abs(back.i - el.i) < 1e-10);
        CHECK(std::abs(wrap_pi(back.raan - el.raan)) < 1e-10);
        CHECK(std::abs(wrap_pi(back.argp - el.argp)) < 2e-8);
        CHECK(std::abs(wrap_pi(back.mean_anomaly - el.mean_anomaly)) < 2e-8);
    }
}

TEST_CASE("sun-synchronous departure body state stays between apsides") {
    OrbitalElements el;
    el.a = 7142116.504;
    el.e = 0.006172;
    el.i = deg2rad(98.581);
    el.raan = deg2rad(96.0);
    el.argp = deg2rad(257.367);
    el.mean_anomaly = true_to_mean_anomaly(deg2rad(135.368), el.e);
    const CartesianState s = elements_to_cartesian(el, kEarth);
    const double r = norm(s.r);
    CHECK(r > el.a * (1.0 - el.e));
    CHECK(r < el.a * (1.0 + el.e));
    CHECK(s.epoch == el.epoch);
}

TEST_CASE("cartesian_to_elements rejects degenerate input") {
    CartesianState hyper;
    hyper.r = {7.0e6, 0.0, 0.0};
    hyper.v = {0.0, 12000.0, 0.0};  // above escape speed
    CHECK_THROWS_AS(cartesian_to_elements(hyper, kEarth), std::invalid_argument);

    CartesianState radial;
    radial.r = {7.0e6, 0.0, 0.0};
    radial.v = {-1000.0, 0.0, 0.0};
    CHECK_THROWS_AS(cartesian_to_elements(radial, kEarth), std::invalid_argument);
}

TEST_CASE("j2 propagation identity at dt=0") {
    Rng rng(3);
    const OrbitalElements el = random_leo_elements(rng);
    const OrbitalElements out = propagate_j2(el, 0.0, kEarth);
    CHECK(out.a == el.a);
    CHECK(out.e == el.e);
    CHECK(out.i == el.i);
    CHECK(out.raan == wrap_two_pi(el.raan));
    CHECK(out.argp == wrap_two_pi(el.argp));
    CHECK(out.mean_anomaly == wrap_two_pi(el.mean_anomaly));
    CHECK(out.epoch == el.epoch);
}

TEST_CASE("polar orbit node is frozen") {
    OrbitalElements el;
    el.a = 7.0e6;
    el.e = 0.001;
    el.i = pi / 2.0;
    el.raan = 1.0;
    // cos(i) at the representable pi/2 is ~6e-17, so the node moves by less
    // than 1e-17 rad over a month.
    CHECK(std::abs(raan_rate(el, kEarth)) < 1e-20);
    const OrbitalElements out = propagate_j2(el, 30.0 * 86400.0, kEarth);
    CHECK(std::abs(wrap_pi(out.raan - el.raan)) < 1e-15);
}

TEST_CASE("node drift over one day matches the frozen independent value") {
    OrbitalElements el;
    el.a = 7.0e6;
    el.e = 0.001;
    el.i = deg2rad(98.0);
    // Frozen from an independent evaluation of -(3/2) J2 (re/p)^2 n cos(i) * dt
    // in a separate scripting environment.
    const double expected_rate = 2.022737807182220244e-07;   // rad/s
    const double expected_delta = 1.747645465405438248e-02;  // rad over 86400 s
    CHECK(std::abs(raan_rate(el, kEarth) - expected_rate) < 1e-19);
    const OrbitalElements out = propagate_j2(el, 86400.0, kEarth);
    CHECK(std::abs(wrap_pi(out.raan - el.raan) - expected_delta) < 1e-13);
    CHECK(out.a == el.a);
    CHECK(out.e == el.e);
    CHECK(out.i == el.i);
}

TEST_CASE("node rate sign follows inclination") {
    OrbitalElements el;
    el.a = 7.0e6;
    el.e = 0.001;
    el.i = deg2rad(45.0);
    CHECK(raan_rate(el, kEarth) < 0.0);
    el.i = deg2rad(135.0);
    CHECK(raan_rate(el, kEarth) > 0.0);
}

TEST_CASE("sun-synchronous class orbit drifts about one degree per day") {
    OrbitalElements el;
    el.a = 7.1e6;
    el.e = 0.001;
    el.i = deg2rad(98.0);
    const double rate = raan_rate(el, kEarth);
    CHECK(std::abs(rate - 1.924768539661600379e-07) < 1e-19);  // frozen formula value
    CHECK(rad2deg(rate) * 86400.0 == doctest::Approx(0.952828823769).epsilon(1e-9));
}

TEST_CASE("j2 propagation semigroup and reversibility") {
    Rng rng(11);
    for (int it = 0; it < 2000; ++it) {
        const OrbitalElements el = normalized_angles(random_leo_elements(rng));
        const double t1 = rng.uniform(-15.0 * 86400.0, 15.0 * 86400.0);
        const double t2 = rng.uniform(-15.0 * 86400.0, 15.0 * 86400.0);

        const OrbitalElements two_step = propagate_j2(propagate_j2(el, t1, kEarth), t2, kEarth);
        const OrbitalElements one_step = propagate_j2(el, t1 + t2, kEarth);
        CHECK(two_step.a == one_step.a);
        CHECK(two_step.e == one_step.e);
        CHECK(two_step.i == one_step.i);
        // Angle sums only re-associate, so agreement is at rounding level.
        CHECK(std::abs(wrap_pi(two_step.raan - one_step.raan)) < 1e-9);
        CHECK(std::abs(wrap_pi(two_step.argp - one_step.argp)) < 1e-9);
        CHECK(std::abs(wrap_pi(two_step.mean_anomaly - one_step.mean_anomaly)) < 1e-9);

        const OrbitalElements back = propagate_j2(propagate_j2(el, t1, kEarth), -t1, kEarth);
        CHECK(std::abs(wrap_pi(back.raan - el.raan)) < 1e-12);
        CHECK(std::abs(wrap_pi(back.argp - el.argp)) < 1e-12);
        CHECK(std::abs(wrap_pi(back.mean_anomaly - el.mean_anomaly)) < 1e-12);
    }
}

TEST_CASE("constants file parsing") {
    const std::string path = "constants_test.cfg";
    {
        std::ofstream out(path);
        out << "# test overrides\n";
        out << "mu = 4.0e14\n";
        out << "re 6.4e6\n";
    }
    const PhysicalConstants k = load_constants(path);
    CHECK(k.mu == 4.0e14);
    CHECK(k.re == 6.4e6);
    CHECK(k.j2 == doctest::Approx(1.08262668e-3));  // default kept

    {
        std::ofstream out(path);
        out << "j3 = 1e-6\n";
    }
    CHECK_THROWS(load_constants(path));
    {
        std::ofstream out(path);
        out << "mu = -1\n";
    }
    CHECK_THROWS(load_constants(path));
    std::remove(path.c_str());
}

TEST_CASE("element invariants are enforced") {
    OrbitalElements el;
    el.a = -1.0;
    CHECK_THROWS_AS(validate(el), std::invalid_argument);
    el.a = 7e6;
    el.e = 1.0;
    CHECK_THROWS_AS(validate(el), std::invalid_argument);
    el.e = 0.0;
    el.i = 4.0;
    CHECK_THROWS_AS(validate(el), std::invalid_argument);
}
