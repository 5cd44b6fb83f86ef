#include <cmath>

#include <doctest.h>

#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"
#include "sphconv/optimize.hpp"
#include "sphconv/shapes.hpp"

using namespace sphconv;

TEST_CASE("disc intersections") {
    const Metric unit{1.0};
    SUBCASE("single disc is the full circle") {
        const ArcPolygon poly = polygon_from_disc_centers({{0.0, 0.0}}, 1.0, unit);
        REQUIRE(poly.size() == 1);
        CHECK(poly.length() == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("two discs make a lune") {
        const double c = 0.3;
        const ArcPolygon poly =
            polygon_from_disc_centers({{c, 0.0}, {c, kPi}}, 1.0, unit);
        REQUIRE(poly.size() == 2);
        CHECK(poly.vertices().size() == 2);
        // Same body as make_lune of the same length.
        const ArcPolygon lune = make_lune({unit, 1.0, poly.length()});
        CHECK(lune.area() == doctest::Approx(poly.area()).epsilon(1e-10));
    }
    SUBCASE("redundant disc is dropped") {
        const ArcPolygon poly = polygon_from_disc_centers(
            {{0.3, 0.0}, {0.3, kPi}, {0.01, 1.0}}, 1.0, unit);
        CHECK(poly.size() == 2);
    }
    SUBCASE("origin must be interior") {
        CHECK_THROWS_AS(polygon_from_disc_centers({{kPi / 4, 0.0}}, 1.0, unit), DomainError);
    }
}

TEST_CASE("random polygons respect the origin convention") {
    const Metric unit{1.0};
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        const ArcPolygon poly = random_lambda_polygon(n, seed, 1.0, unit);
        CHECK(poly.size() >= 2);
        CHECK(poly.size() <= n);
        CHECK(poly.max_support() <= kPi / 4 + 1e-9);
        CHECK(is_lambda_convex(poly));
    }
    // Symmetric variant keeps antipodal arc pairs.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ArcPolygon poly = random_lambda_polygon(4, seed, 1.0, unit, true);
        REQUIRE(poly.size() == 4);
        CHECK(poly.vertices().size() == 4);
    }
}

TEST_CASE("diameter") {
    const Metric unit{1.0};
    SUBCASE("circle: any antipodal pair at distance 2*rho") {
        ArcPolygon circle;
        circle.m = unit;
        circle.lambda = 1.0;
        Arc a;
        a.c = {0, 0, 1};
        a.r = kPi / 4;
        a.start = {std::sin(kPi / 4), 0, std::cos(kPi / 4)};
        a.extent = kTwoPi;
        circle.arcs.push_back(a);
        const DiameterResult d = diameter(circle);
        CHECK(d.length == doctest::Approx(kPi / 2).epsilon(1e-9));
        CHECK(d.orthogonality < 1e-6);
    }
    SUBCASE("lune against the dense pairwise oracle") {
        const ArcPolygon lune = make_lune({unit, 1.0, 3.0});
        const DiameterResult d = diameter(lune);
        // Oracle: brute force over a fine boundary grid.
        double best = 0.0;
        std::vector<Vec3> pts;
        for (const Arc& a : lune.arcs) {
            for (int i = 0; i <= 512; ++i) pts.push_back(a.point(a.extent * i / 512));
        }
        for (size_t i = 0; i < pts.size(); ++i) {
            for (size_t j = i + 1; j < pts.size(); ++j) {
                best = std::max(best, sphere_dist(pts[i], pts[j]));
            }
        }
        CHECK(d.length >= best - 1e-8);
        CHECK(d.orthogonality < 1e-6);
    }
    SUBCASE("racetrack: axis through the circle centers") {
        const ArcPolygon track = make_racetrack_polygon(1.0, 0.6, unit);
        const DiameterResult d = diameter(track);
        CHECK(d.length == doctest::Approx(0.6 + kPi / 2).epsilon(1e-8));
        CHECK(d.orthogonality < 1e-6);
    }
}

TEST_CASE("symmetrize") {
    const Metric unit{1.0};
    SUBCASE("centrally symmetric input reproduces itself") {
        const ArcPolygon poly = random_lambda_polygon(4, 3, 1.0, unit, true);
        const auto [g1, g2] = symmetrize(poly);
        CHECK(g1.length() == doctest::Approx(poly.length()).epsilon(1e-8));
        CHECK(g2.length() == doctest::Approx(poly.length()).epsilon(1e-8));
        CHECK(g1.area() == doctest::Approx(poly.area()).epsilon(1e-7));
        CHECK(g2.area() == doctest::Approx(poly.area()).epsilon(1e-7));
    }
    SUBCASE("area average identity on random polygons") {
        for (std::uint64_t seed = 2; seed <= 14; ++seed) {
            const ArcPolygon poly =
                random_lambda_polygon(3 + static_cast<int>(seed % 3), seed, 1.0, unit);
            const auto [g1, g2] = symmetrize(poly);
            CHECK(std::abs(0.5 * (g1.area() + g2.area()) - poly.area()) < 1e-7);
            CHECK(std::abs(0.5 * (g1.length() + g2.length()) - poly.length()) < 1e-9);
            // Proposition chain: A(gamma_i) >= lune area of the same length.
            CHECK(lower_bound_deficit(g1) > -1e-7);
            CHECK(lower_bound_deficit(g2) > -1e-7);
        }
    }
}

TEST_CASE("four-bar deformation") {
    const Metric unit{1.0};
    SUBCASE("lune is rigid") {
        const ArcPolygon lune = make_lune({unit, 1.0, 3.0});
        CHECK_THROWS_AS(four_bar_deform(lune, kPi / 180), RigidityError);
    }
    SUBCASE("one step preserves length and decreases area") {
        const ArcPolygon poly = random_lambda_polygon(4, 5, 1.0, unit, true);
        const DeformResult r = four_bar_deform(poly, kPi / 180);
        CHECK(std::abs(r.poly.length() - poly.length()) < 1e-10);
        CHECK(r.poly.area() < poly.area());
    }
    SUBCASE("full run reaches the lune of the same length") {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            const ArcPolygon poly = random_lambda_polygon(4, seed, 1.0, unit, true);
            const double len0 = poly.length();
            const DeformRun run = deform_to_lune(poly, kPi / 180);
            CHECK(run.reached_lune);
            CHECK(std::abs(run.final_poly.length() - len0) < 1e-9);
            // Monotone decreasing trace.
            for (size_t i = 1; i < run.trace.size(); ++i) {
                CHECK(run.trace[i].area <= run.trace[i - 1].area + 1e-12);
                CHECK(std::abs(run.trace[i].length - len0) < 1e-9);
            }
            CHECK(lower_bound_deficit(run.final_poly) < 1e-4);
        }
    }
}

TEST_CASE("minimize_area certifies the lune") {
    const Metric unit{1.0};
    SUBCASE("two arcs: the search space is lunes") {
        const MinimizeResult r = minimize_area(2, 2.5, 7, 40, 1.0, unit, 16);
        CHECK(r.report.best_deficit < 1e-8);
        CHECK(r.report.converged_to_lune);
    }
    SUBCASE("four arcs converge to the lune") {
        const MinimizeResult r = minimize_area(4, 3.0, 11, 60, 1.0, unit, 24);
        CHECK(r.report.best_deficit < 1e-4);
        CHECK(r.report.best_deficit > -1e-8);
        CHECK(r.report.converged_to_lune);
    }
    SUBCASE("never beats the bound") {
        const MinimizeResult r = minimize_area(5, 2.0, 13, 30, 1.0, unit, 12);
        CHECK(r.report.best_deficit > -1e-8);
    }
}
