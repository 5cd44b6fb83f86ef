#include <cmath>

#include <doctest.h>

#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"
#include "sphconv/sphere.hpp"

using namespace sphconv;

namespace {

// Independent oracle: spherical excess via the law of cosines, A = a+b+c - pi.
double excess_area(double a, double b, double alpha) {
    const double cos_c = std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(alpha);
    const double c = std::acos(std::clamp(cos_c, -1.0, 1.0));
    auto angle = [&](double opp, double s1, double s2) {
        const double num = std::cos(opp) - std::cos(s1) * std::cos(s2);
        const double den = std::sin(s1) * std::sin(s2);
        return std::acos(std::clamp(num / den, -1.0, 1.0));
    };
    return alpha + angle(a, b, c) + angle(b, a, c) - kPi;
}

} // namespace

TEST_CASE("geodesic_circle closed forms") {
    const Metric unit{1.0};
    const CircleFacts f = geodesic_circle(kPi / 4, unit);
    CHECK(f.curvature == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.length == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(f.area == doctest::Approx(2 * kPi - kPi * std::sqrt(2.0)).epsilon(1e-14));

    // Equator limit: curvature vanishes.
    CHECK(geodesic_circle(kPi / 2 - 1e-9, unit).curvature == doctest::Approx(0.0).epsilon(1e-8));

    // Scaling: rho = pi/8 at k1 = 2 has curvature 2*cot(pi/4) = 2.
    CHECK(geodesic_circle(kPi / 8, Metric{2.0}).curvature == doctest::Approx(2.0).epsilon(1e-13));

    CHECK_THROWS_AS(geodesic_circle(0.0, unit), DomainError);
    CHECK_THROWS_AS(geodesic_circle(kPi / 2, unit), DomainError);
    CHECK_THROWS_AS(geodesic_circle(kPi / 3, Metric{2.0}), DomainError);
}

TEST_CASE("triangle_area against the spherical-excess oracle") {
    const Metric unit{1.0};
    CHECK(triangle_area(kPi / 2, kPi / 2, kPi / 2, unit) == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(triangle_area(1.0, 1.0, 0.0, unit) == doctest::Approx(0.0));

    CHECK(triangle_area(1.0, 0.7, 1.2, unit) ==
          doctest::Approx(excess_area(1.0, 0.7, 1.2)).epsilon(1e-12));

    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(0.05, 2.5);
        const double b = rng.uniform(0.05, 2.5);
        const double alpha = rng.uniform(0.05, kPi - 0.05);
        CHECK(triangle_area(a, b, alpha, unit) ==
              doctest::Approx(excess_area(a, b, alpha)).epsilon(1e-10));
        // Symmetry in the two sides.
        CHECK(triangle_area(a, b, alpha, unit) ==
              doctest::Approx(triangle_area(b, a, alpha, unit)).epsilon(1e-13));
    }

    // Rescaling: lengths by 1/k1, areas by 1/k1^2.
    const Metric half{0.5};
    CHECK(triangle_area(2.0, 1.4, 1.2, half) ==
          doctest::Approx(4.0 * excess_area(1.0, 0.7, 1.2)).epsilon(1e-12));

    CHECK_THROWS_AS(triangle_area(kPi, 1.0, 1.0, unit), DomainError);
    CHECK_THROWS_AS(triangle_area(1.0, 1.0, 4.0, unit), DomainError);
}

TEST_CASE("triangle_area_argmax is the grid maximizer") {
    const Metric unit{1.0};

    // Closed form: cos(alpha0) = -tan(a/2)tan(b/2); arccos loses half the
    // digits at the flat endpoint.
    CHECK(triangle_area_argmax(kPi / 2, kPi / 2) == doctest::Approx(kPi).epsilon(1e-7));
    CHECK(triangle_area_argmax(0.01, 0.01) == doctest::Approx(kPi / 2).epsilon(1e-3));
    CHECK(triangle_area_argmax(1.0, 1.0) ==
          doctest::Approx(std::acos(-std::tan(0.5) * std::tan(0.5))).epsilon(1e-14));

    // Grid maximization oracle (refined around the coarse winner).
    Rng rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        const double a = rng.uniform(0.1, 1.5);
        const double b = rng.uniform(0.1, 1.5);
        const double alpha0 = triangle_area_argmax(a, b);
        double best_alpha = 0.0, best = -1.0;
        const int grid = 200000;
        for (int i = 0; i <= grid; ++i) {
            const double alpha = kPi * i / grid;
            const double f = triangle_area(a, b, alpha, unit);
            if (f > best) {
                best = f;
                best_alpha = alpha;
            }
        }
        CHECK(std::abs(best_alpha - alpha0) < 2.0 * kPi / grid);
        // The maximum value agrees with the value at the closed-form argmax.
        CHECK(triangle_area(a, b, alpha0, unit) >= best - 1e-10);
        // Monotone on both sides of the maximizer.
        CHECK(triangle_area(a, b, 0.5 * alpha0, unit) < triangle_area(a, b, 0.9 * alpha0, unit));
        if (alpha0 < kPi - 1e-9) {
            CHECK(triangle_area(a, b, alpha0 + 0.9 * (kPi - alpha0), unit) <
                  triangle_area(a, b, alpha0 + 0.5 * (kPi - alpha0), unit));
        }
    }

    CHECK_THROWS_AS(triangle_area_argmax(3.0, 3.0), DomainError);
}

TEST_CASE("triangle_area planar limit") {
    // k1*a, k1*b -> 0: area tends to (1/2)ab sin(alpha).
    const double a = 1e-3, b = 1e-3, alpha = 0.9;
    const double planar = 0.5 * a * b * std::sin(alpha);
    const double spherical = triangle_area(a, b, alpha, Metric{1.0});
    CHECK(std::abs(spherical - planar) / planar < 1e-4);
}

TEST_CASE("signed triangle area and bulge") {
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
    CHECK(signed_triangle_area(ex, ey, ez) == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(signed_triangle_area(ey, ex, ez) == doctest::Approx(-kPi / 2).epsilon(1e-14));
    // Full circle: bulge equals the cap area.
    CHECK(arc_bulge_area(kPi / 4, kTwoPi) ==
          doctest::Approx(kTwoPi * (1 - std::cos(kPi / 4))).epsilon(1e-13));
}

TEST_CASE("atan-tan continuous branch") {
    CHECK(atan_tan_continuous(0.5, 0.3) == doctest::Approx(std::atan(0.5 * std::tan(0.3))));
    CHECK(atan_tan_continuous(0.5, kPi / 2) == doctest::Approx(kPi / 2));
    CHECK(atan_tan_continuous(0.5, kPi) == doctest::Approx(kPi));
    // Continuity across the pole.
    const double below = atan_tan_continuous(0.7, kPi / 2 - 1e-7);
    const double above = atan_tan_continuous(0.7, kPi / 2 + 1e-7);
    CHECK(std::abs(above - below) < 1e-5);
}
