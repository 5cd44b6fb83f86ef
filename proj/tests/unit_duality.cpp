#include <cmath>

#include <doctest.h>

#include "sphconv/duality.hpp"
#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"
#include "sphconv/optimize.hpp"
#include "sphconv/shapes.hpp"

using namespace sphconv;

namespace {

SupportCurve circle_curve(double rho, int n = 4096) {
    SupportCurve c;
    c.m = Metric{1.0};
    c.lambda = std::cos(rho) / std::sin(rho);
    c.h.assign(static_cast<size_t>(n), rho);
    return c;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TEST_CASE("polar dual of circles") {
    // Circle of radius pi/6 (curvature sqrt(3)) dualizes to radius pi/3.
    const SupportCurve dual = polar_dual(circle_curve(kPi / 6));
    for (double h : dual.h) CHECK(h == doctest::Approx(kPi / 3).epsilon(1e-10));

    // rho = pi/4 is the self-dual fixed point.
    const SupportCurve self_dual = polar_dual(circle_curve(kPi / 4));
    for (double h : self_dual.h) CHECK(h == doctest::Approx(kPi / 4).epsilon(1e-10));

    // Exact arc-polygon route.
    ArcPolygon poly;
    poly.m = Metric{1.0};
    poly.lambda = std::sqrt(3.0);
    Arc a;
    a.c = {0, 0, 1};
    a.r = kPi / 6;
    a.start = {std::sin(kPi / 6), 0, std::cos(kPi / 6)};
    a.extent = kTwoPi;
    poly.arcs.push_back(a);
    const ArcPolygon dp = polar_dual(poly);
    REQUIRE(dp.size() == 1);
    CHECK(dp.arcs[0].r == doctest::Approx(kPi / 3).epsilon(1e-14));
    CHECK(dp.lambda == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("dual curvature is the curvature radius") {
    const Metric unit{1.0};
    CHECK(dual_curvature({1.0}, unit)[0] == doctest::Approx(1.0));
    const double r = std::tan(kPi / 6);
    CHECK(dual_curvature({r}, unit)[0] == doctest::Approx(1.0 / std::tan(kPi / 3)).epsilon(1e-14));
    CHECK(dual_curvature({0.0}, unit)[0] == 0.0);
    // k1 scaling: kappa* = k1^2 R.
    CHECK(dual_curvature({0.7}, Metric{2.0})[0] == doctest::Approx(4.0 * 0.7).epsilon(1e-14));
}

TEST_CASE("duality identities") {
    const Metric unit{1.0};
    SUBCASE("circle rho = pi/6") {
        const CircleFacts f = geodesic_circle(kPi / 6, unit);
        MeasureReport r;
        r.length = f.length;
        r.area = f.area;
        const auto [lstar, astar] = duality_identities(r, unit);
        CHECK(lstar == doctest::Approx(kTwoPi * std::sin(kPi / 3)).epsilon(1e-13));
        CHECK(astar == doctest::Approx(kTwoPi * (1 - std::cos(kPi / 3))).epsilon(1e-13));
    }
    SUBCASE("self-dual circle rho = pi/4") {
        const CircleFacts f = geodesic_circle(kPi / 4, unit);
        MeasureReport r;
        r.length = f.length;
        r.area = f.area;
        const auto [lstar, astar] = duality_identities(r, unit);
        CHECK(lstar == doctest::Approx(f.length).epsilon(1e-13));
        CHECK(astar == doctest::Approx(f.area).epsilon(1e-13));
    }
    SUBCASE("measured dual of random polygons fulfils both identities") {
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            const ArcPolygon poly =
                random_lambda_polygon(2 + static_cast<int>(seed % 5), seed, 1.0, unit);
            const ArcPolygon dual = polar_dual(poly);
            CHECK(std::abs(dual.length() + poly.area() - kTwoPi) < 1e-12);
            CHECK(std::abs(dual.area() + poly.length() - kTwoPi) < 1e-12);
            // Dual of a lambda-convex curve has curvature at most k1^2/lambda.
            const MeasureReport mr = measure(dual);
            CHECK(mr.kappa_max <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("dual of the lune is a racetrack") {
    const Metric unit{1.0};
    const ArcPolygon lune = make_lune({unit, 1.0, 3.0});
    const ArcPolygon dual = polar_dual(lune);
    // Two circular arcs of the complementary radius plus two geodesic pieces.
    int arcs = 0, segments = 0;
    for (const Arc& a : dual.arcs) {
        if (a.r > kPi / 2 - 1e-9) ++segments;
        else ++arcs;
    }
    CHECK(arcs == 2);
    CHECK(segments == 2);

    // Matched-parameter racetrack: same arc centers, curvature 1/lambda = 1.
    const auto verts = lune.vertices();
    REQUIRE(verts.size() == 2);
    const double separation = 2.0 * to_polar(lune.arcs[0].c).t;
    const SupportCurve track = make_racetrack(1.0, separation, unit, 2048);
    const SupportCurve dual_sampled = support_from_arcs(dual, 2048);
    CHECK(sup_distance(track.h, dual_sampled.h) < 1e-9);
}

TEST_CASE("involution: the double dual returns the curve") {
    const Metric unit{1.0};
    SUBCASE("exact route") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const ArcPolygon poly =
                random_lambda_polygon(2 + static_cast<int>(seed % 5), seed, 1.0, unit);
            const ArcPolygon dd = polar_dual(polar_dual(poly));
            const SupportCurve a = support_from_arcs(poly, 1024);
            const SupportCurve b = support_from_arcs(dd, 1024);
            CHECK(sup_distance(a.h, b.h) < 1e-10);
        }
    }
    SUBCASE("sampled route") {
        for (std::uint64_t seed = 11; seed <= 18; ++seed) {
            const ArcPolygon poly =
                random_lambda_polygon(2 + static_cast<int>(seed % 5), seed, 1.0, unit);
            const SupportCurve c = support_from_arcs(poly, 4096);
            const SupportCurve dd = polar_dual(polar_dual(c));
            CHECK(sup_distance(c.h, dd.h) < 1e-6);
        }
    }
}

TEST_CASE("polar dual rejects bad inputs") {
    SupportCurve touching;
    touching.m = Metric{1.0};
    touching.lambda = 0.0;
    touching.h.assign(512, 0.3);
    touching.h[0] = 0.0; // boundary through the origin
    CHECK_THROWS_AS(polar_dual(touching), DomainError);
}
