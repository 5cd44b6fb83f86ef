#include <cmath>

#include <doctest.h>

#include "sphconv/curve.hpp"
#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"
#include "sphconv/optimize.hpp"
#include "sphconv/shapes.hpp"

using namespace sphconv;

namespace {

SupportCurve circle_curve(double rho, double k1, int n = 4096) {
    SupportCurve c;
    c.m = Metric{k1};
    c.lambda = k1 * std::cos(k1 * rho) / std::sin(k1 * rho);
    c.h.assign(static_cast<size_t>(n), rho);
    return c;
}

ArcPolygon circle_polygon(double rho, double lambda) {
    ArcPolygon poly;
    poly.m = Metric{1.0};
    poly.lambda = lambda;
    Arc a;
    a.c = {0, 0, 1};
    a.r = rho;
    a.start = {std::sin(rho), 0, std::cos(rho)};
    a.extent = kTwoPi;
    poly.arcs.push_back(a);
    return poly;
}

} // namespace

TEST_CASE("contact radius") {
    SupportCurve c = circle_curve(kPi / 4, 1.0, 256);
    const auto g = contact_radius(c);
    for (double v : g) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    c.h.assign(256, 0.0);
    c.lambda = 1.0;
    for (double v : contact_radius(c)) CHECK(v == 0.0);

    // Vertex fan: h = arctan(tan(u) cos(theta - theta0)) gives g = tan(u) cos(theta).
    SupportCurve vtx;
    vtx.m = Metric{1.0};
    vtx.lambda = 0.0;
    const double u = 0.5;
    const int n = 512;
    for (int j = 0; j < n; ++j) {
        const double theta = kTwoPi * j / n;
        vtx.h.push_back(std::abs(std::atan(std::tan(u) * std::cos(theta))));
    }
    const auto g2 = contact_radius(vtx);
    for (int j = 0; j < n / 8; ++j) {
        const double theta = kTwoPi * j / n;
        CHECK(g2[static_cast<size_t>(j)] ==
              doctest::Approx(std::tan(u) * std::cos(theta)).epsilon(1e-12));
    }
}

TEST_CASE("curvature_radius pointwise") {
    const Metric unit{1.0};
    CHECK(curvature_radius(1.0, 0.0, 0.0, unit) == doctest::Approx(1.0).epsilon(1e-14));

    // Vertex arcs solve g'' + g = 0, so the radius vanishes.
    const double u = 0.4, th = 0.3;
    const double g = std::tan(u) * std::cos(th);
    const double g1 = -std::tan(u) * std::sin(th);
    const double g2 = -g;
    CHECK(curvature_radius(g, g1, g2, unit) == doctest::Approx(0.0).epsilon(1e-14));

    // Planar limit: R -> h'' + h as k1 -> 0 (relative difference below 1e-9).
    const Metric tiny{1e-6};
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const double g0 = rng.uniform(0.5, 2.0);
        const double d1 = rng.uniform(-0.5, 0.5);
        const double d2 = rng.uniform(-0.4, 0.4);
        const double planar = d2 + g0;
        const double r = curvature_radius(g0, d1, d2, tiny);
        CHECK(std::abs(r - planar) / std::max(1.0, std::abs(planar)) < 1e-9);
    }
}

TEST_CASE("circle measures through the sampled support path") {
    for (double rho : {kPi / 6, kPi / 4, kPi / 3}) {
        const SupportCurve c = circle_curve(rho, 1.0);
        CHECK(length(c) == doctest::Approx(kTwoPi * std::sin(rho)).epsilon(1e-12));
        CHECK(area(c) == doctest::Approx(kTwoPi * (1 - std::cos(rho))).epsilon(1e-12));
    }
    // k1 scaling: lengths by 1/k1, areas by 1/k1^2.
    const double k1 = 2.0, rho = kPi / 6 / k1;
    const SupportCurve c = circle_curve(rho, k1);
    CHECK(length(c) == doctest::Approx(kTwoPi * std::sin(k1 * rho) / k1).epsilon(1e-12));
    CHECK(area(c) == doctest::Approx(kTwoPi * (1 - std::cos(k1 * rho)) / (k1 * k1)).epsilon(1e-12));

    // Degenerate point curve is accepted with zero measures.
    SupportCurve pt;
    pt.m = Metric{1.0};
    pt.lambda = 1.0;
    pt.h.assign(1024, 0.0);
    CHECK(length(pt) == doctest::Approx(0.0));
    CHECK(area(pt) == doctest::Approx(0.0));
}

TEST_CASE("jump_angle closed form vs quadrature oracle") {
    const Metric unit{1.0};
    SUBCASE("origin vertex reduces to the fan width") {
        Vertex v{0.0, 1.1, 0.7, 1.6, 0.0};
        CHECK(jump_angle(v, unit) == doctest::Approx(1.6 - 0.7).epsilon(1e-13));
    }
    SUBCASE("symmetric fan") {
        Vertex v;
        v.u = kPi / 3;
        v.theta = 0.0;
        v.alpha = -kPi / 4;
        v.beta = kPi / 4;
        CHECK(jump_angle(v, unit) == doctest::Approx(2 * std::atan(0.5)).epsilon(1e-13));
    }
    SUBCASE("quadrature oracle on random vertices") {
        Rng rng(11);
        for (int i = 0; i < 100; ++i) {
            Vertex v;
            v.u = rng.uniform(0.05, 1.2);
            v.theta = rng.uniform(0.0, kTwoPi);
            const double a = rng.uniform(-1.2, 0.6);
            v.alpha = v.theta + a;
            v.beta = v.alpha + rng.uniform(0.05, kPi - 0.2 - std::abs(a));
            auto integrand = [&](double t) {
                const double g = std::tan(v.u) * std::cos(t - v.theta);
                const double g1 = -std::tan(v.u) * std::sin(t - v.theta);
                return std::sqrt(1 + g * g + g1 * g1) / (1 + g * g);
            };
            const int n = 4000;
            double s = integrand(v.alpha) + integrand(v.beta);
            for (int j = 1; j < n; ++j) {
                const double t = v.alpha + (v.beta - v.alpha) * j / n;
                s += integrand(t) * (j % 2 ? 4.0 : 2.0);
            }
            s *= (v.beta - v.alpha) / (3.0 * n);
            CHECK(jump_angle(v, unit) == doctest::Approx(s).epsilon(1e-10));
        }
    }
    SUBCASE("crossing theta - theta_i = pi/2 stays continuous") {
        Vertex v;
        v.u = 0.8;
        v.theta = 0.0;
        v.alpha = kPi / 2 - 0.4;
        v.beta = kPi / 2 + 0.4;
        const double phi = jump_angle(v, unit);
        CHECK(phi > 0.0);
        CHECK(phi < kPi);
        Vertex left = v, right = v;
        left.beta = kPi / 2;
        right.alpha = kPi / 2;
        CHECK(phi ==
              doctest::Approx(jump_angle(left, unit) + jump_angle(right, unit)).epsilon(1e-12));
    }
}

TEST_CASE("arc polygon exact measures and Gauss-Bonnet closure") {
    const Metric unit{1.0};
    SUBCASE("full circle as a single arc") {
        ArcPolygon poly = circle_polygon(kPi / 4, 1.0);
        poly.validate();
        CHECK(poly.length() == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-13));
        CHECK(poly.area() == doctest::Approx(2 * kPi - kPi * std::sqrt(2.0)).epsilon(1e-13));
        CHECK(poly.area_fan() == doctest::Approx(poly.area()).epsilon(1e-12));
        CHECK(poly.support(1.234) == doctest::Approx(kPi / 4).epsilon(1e-13));
    }
    SUBCASE("random polygons close under Gauss-Bonnet") {
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            const int n = 2 + static_cast<int>(seed % 5);
            const ArcPolygon poly = random_lambda_polygon(n, seed, 1.0, unit);
            const double gb = poly.area();
            const double fan = poly.area_fan();
            CHECK(std::abs(gb - fan) < 1e-8);
            double jumps = 0.0;
            for (int i = 0; i < poly.size(); ++i) jumps += std::max(0.0, poly.turning_angle(i));
            CHECK(poly.total_curvature() + jumps + gb == doctest::Approx(kTwoPi).epsilon(1e-10));
        }
    }
}

TEST_CASE("support_from_arcs round trip") {
    const Metric unit{1.0};
    SUBCASE("circle centered at the origin") {
        const ArcPolygon poly = circle_polygon(kPi / 4, 1.0);
        const SupportCurve c = support_from_arcs(poly, 1024);
        for (double h : c.h) CHECK(h == doctest::Approx(kPi / 4).epsilon(1e-13));
        CHECK_THROWS_AS(support_from_arcs(poly, 128), DomainError);
    }
    SUBCASE("random polygons: sampled measures match exact ones") {
        for (std::uint64_t seed = 5; seed <= 20; ++seed) {
            const int n = 2 + static_cast<int>(seed % 4);
            const ArcPolygon poly = random_lambda_polygon(n, seed, 1.0, unit);
            const SupportCurve c = support_from_arcs(poly, 4096);
            CHECK(std::abs(length(c) - poly.length()) < 1e-6);
            CHECK(std::abs(area(c) - poly.area()) < 1e-6);
        }
    }
    SUBCASE("lune symmetry h(theta) = h(theta + pi)") {
        const ArcPolygon lune = make_lune({unit, 1.0, 3.0});
        const SupportCurve c = support_from_arcs(lune, 1024);
        for (int j = 0; j < 512; ++j) {
            CHECK(c.h[static_cast<size_t>(j)] ==
                  doctest::Approx(c.h[static_cast<size_t>(j + 512)]).epsilon(1e-12));
        }
    }
}

TEST_CASE("origin shift invariance of sampled measures") {
    const Metric unit{1.0};
    const ArcPolygon lune = make_lune({unit, 1.0, 3.0});
    const SupportCurve base = support_from_arcs(lune, 4096);
    const double len0 = length(base), area0 = area(base);
    int tested = 0;
    for (double shift : {0.05, 0.11}) {
        const ArcPolygon moved = lune.transformed(Rot3::about_axis({0, 1, 0}, shift));
        if (moved.max_support() > kPi / 4 + 1e-9) continue; // outside the origin convention
        const SupportCurve c = support_from_arcs(moved, 4096);
        CHECK(std::abs(length(c) - len0) < 1e-7);
        CHECK(std::abs(area(c) - area0) < 1e-7);
        ++tested;
    }
    CHECK(tested >= 1);
}

TEST_CASE("measure and lambda-convexity") {
    const Metric unit{1.0};
    const ArcPolygon lune = make_lune({unit, 1.0, 3.0});
    const MeasureReport r = measure(lune);
    CHECK(r.r_max == doctest::Approx(1.0).epsilon(1e-12)); // 1/lambda
    CHECK(r.r_min == doctest::Approx(0.0));                // vertices
    CHECK(std::isinf(r.kappa_max));
    CHECK(is_lambda_convex(lune));

    // A circle of curvature lambda/2 is not lambda-convex.
    ArcPolygon big = circle_polygon(std::atan(2.0), 1.0);
    CHECK_FALSE(is_lambda_convex(big));

    // Any lambda-convex polygon: max R stays below 1/lambda (exactly, here).
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ArcPolygon poly = random_lambda_polygon(2 + static_cast<int>(seed % 5), seed, 1.0, unit);
        CHECK(measure(poly).r_max <= 1.0 + 1e-8);
    }

    // Sampled path: the lune stays lambda-convex within the finite-difference floor.
    const SupportCurve c = support_from_arcs(lune, 4096);
    CHECK(is_lambda_convex(c, 1e-6));
    const MeasureReport rs = measure(c);
    CHECK(rs.r_max == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("vertex bookkeeping on the lune") {
    const Metric unit{1.0};
    const ArcPolygon lune = make_lune({unit, 1.0, 3.0});
    const auto verts = lune.vertices();
    REQUIRE(verts.size() == 2);
    CHECK(verts[0].phi == doctest::Approx(verts[1].phi).epsilon(1e-12));
    for (const Vertex& v : verts) {
        Vertex relative = v;
        CHECK(jump_angle(relative, unit) == doctest::Approx(v.phi).epsilon(1e-9));
    }
    CHECK(lune.length() == doctest::Approx(3.0).epsilon(1e-12));
}
