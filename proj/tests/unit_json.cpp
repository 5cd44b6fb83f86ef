#include <sstream>

#include <doctest.h>

#include "sphconv/errors.hpp"
#include "sphconv/json_io.hpp"
#include "sphconv/numerics.hpp"
#include "sphconv/shapes.hpp"

using namespace sphconv;

TEST_CASE("curve JSON round trip") {
    const Metric unit{1.0};
    SUBCASE("arc representation") {
        const ArcPolygon lune = make_lune({unit, 1.0, 3.0});
        const std::string first = curve_to_json(lune);
        std::istringstream in(first);
        const CurveVariant back = read_curve_json(in);
        REQUIRE(std::holds_alternative<ArcPolygon>(back));
        const std::string second = curve_to_json(std::get<ArcPolygon>(back));
        CHECK(first == second); // byte-identical write -> read -> write
        CHECK(std::get<ArcPolygon>(back).length() == doctest::Approx(lune.length()).epsilon(1e-12));
    }
    SUBCASE("support representation") {
        const SupportCurve track = make_racetrack(1.0, 0.4, unit, 512);
        const std::string first = curve_to_json(track);
        std::istringstream in(first);
        const CurveVariant back = read_curve_json(in);
        REQUIRE(std::holds_alternative<SupportCurve>(back));
        CHECK(first == curve_to_json(std::get<SupportCurve>(back)));
    }
    SUBCASE("mixed-radius polygons refuse the arc representation") {
        const ArcPolygon track = make_racetrack_polygon(1.0, 0.4, unit);
        CHECK_THROWS_AS(curve_to_json(track), DomainError);
    }
}

TEST_CASE("malformed input is a parse error") {
    auto expect_parse_error = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_curve_json(in), ParseError);
    };
    expect_parse_error("not json at all");
    expect_parse_error("[1,2,3]");
    expect_parse_error(R"({"k1": 1.0})");
    expect_parse_error(R"({"k1": 1.0, "lambda": 1.0, "repr": "bogus"})");
    expect_parse_error(R"({"k1": 1.0, "lambda": 1.0, "repr": "support"})");
    CHECK_THROWS_AS(read_curve_file("/nonexistent/path.json"), ParseError);
}

TEST_CASE("as_support view") {
    const Metric unit{1.0};
    const ArcPolygon lune = make_lune({unit, 1.0, 2.0});
    const SupportCurve c = as_support(CurveVariant{lune}, 512);
    CHECK(c.samples() == 512);
    const SupportCurve direct = support_from_arcs(lune, 512);
    for (int j = 0; j < 512; ++j) {
        CHECK(c.h[static_cast<size_t>(j)] == direct.h[static_cast<size_t>(j)]);
    }
}
