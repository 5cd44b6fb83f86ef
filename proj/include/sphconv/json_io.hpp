#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "sphconv/curve.hpp"

namespace sphconv {

// Shared curve JSON schema:
//   {"k1": float, "lambda": float, "repr": "support"|"arcs",
//    "h": [floats]  |  "arcs": [{"center_t", "center_theta", "start", "extent"}]}
// The "arcs" representation is reserved for uniform-curvature lambda-convex
// polygons (the per-arc radius is implied by lambda and k1); everything else
// round-trips through "support" samples.

using CurveVariant = std::variant<SupportCurve, ArcPolygon>;

CurveVariant read_curve_json(std::istream& in);
CurveVariant read_curve_file(const std::string& path); // throws ParseError

std::string curve_to_json(const SupportCurve& curve);
std::string curve_to_json(const ArcPolygon& poly); // throws DomainError if mixed radii

void write_curve_file(const std::string& path, const CurveVariant& curve);

// Sampled view of either representation (support curves pass through).
SupportCurve as_support(const CurveVariant& curve, int n_samples);

} // namespace sphconv
