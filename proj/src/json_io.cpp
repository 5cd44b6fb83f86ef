#include "sphconv/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"

namespace sphconv {

namespace {

using nlohmann::json;

json curve_header(const Metric& m, double lambda) {
    json j;
    j["k1"] = m.k1;
    j["lambda"] = lambda;
    return j;
}

} // namespace

CurveVariant read_curve_json(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("curve JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw ParseError("curve JSON: top level must be an object");
        const Metric m{j.at("k1").get<double>()};
        const double lambda = j.at("lambda").get<double>();
        const std::string repr = j.at("repr").get<std::string>();
        if (repr == "support") {
            SupportCurve curve;
            curve.m = m;
            curve.lambda = lambda;
            curve.h = j.at("h").get<std::vector<double>>();
            curve.validate();
            return curve;
        }
        if (repr == "arcs") {
            ArcPolygon poly;
            poly.m = m;
            poly.lambda = lambda;
            if (!(lambda > 0.0)) throw ParseError("curve JSON: arc representation needs lambda > 0");
            const double rho = std::atan2(m.k1, lambda);
            for (const auto& item : j.at("arcs")) {
                Arc a;
                a.r = rho;
                const double t = m.k1 * item.at("center_t").get<double>();
                const double theta = item.at("center_theta").get<double>();
                a.c = to_vec({t, theta});
                const CenterFrame f(a.c);
                const double start = item.at("start").get<double>();
                a.extent = item.at("extent").get<double>();
                a.start = f.point(rho, start);
                poly.arcs.push_back(a);
            }
            poly.validate(1e-7);
            return poly;
        }
        throw ParseError("curve JSON: repr must be \"support\" or \"arcs\"");
    } catch (const json::exception& e) {
        throw ParseError(std::string("curve JSON: ") + e.what());
    }
}

CurveVariant read_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open curve file: " + path);
    return read_curve_json(in);
}

std::string curve_to_json(const SupportCurve& curve) {
    json j = curve_header(curve.m, curve.lambda);
    j["repr"] = "support";
    j["h"] = curve.h;
    return j.dump();
}

std::string curve_to_json(const ArcPolygon& poly) {
    if (!poly.uniform_lambda(1e-9)) {
        throw DomainError(
            "curve JSON: only uniform-curvature polygons serialize as arcs; sample first");
    }
    json j = curve_header(poly.m, poly.lambda);
    j["repr"] = "arcs";
    json arcs = json::array();
    for (const Arc& a : poly.arcs) {
        const SpherePoint c = to_polar(a.c);
        const CenterFrame f(a.c);
        json item;
        item["center_t"] = c.t / poly.m.k1;
        item["center_theta"] = c.theta;
        item["start"] = f.angle_of(a.start);
        item["extent"] = a.extent;
        arcs.push_back(item);
    }
    j["arcs"] = arcs;
    return j.dump();
}

void write_curve_file(const std::string& path, const CurveVariant& curve) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    std::visit([&](const auto& c) { out << curve_to_json(c) << "\n"; }, curve);
}

SupportCurve as_support(const CurveVariant& curve, int n_samples) {
    if (std::holds_alternative<SupportCurve>(curve)) return std::get<SupportCurve>(curve);
    return support_from_arcs(std::get<ArcPolygon>(curve), n_samples);
}

} // namespace sphconv
