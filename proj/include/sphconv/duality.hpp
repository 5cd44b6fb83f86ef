#pragma once

#include <utility>

#include "sphconv/curve.hpp"

namespace sphconv {

// Polar dual of a convex curve, charted back around the origin through the
// antipodal reflection (the raw dual winds around the opposite pole).  The
// sampled overload rebuilds the dual's support function from the reflected
// dual point set {t = pi/2 - h(theta), theta + pi} by gnomonic support
// maximization with local polish; the arc-polygon overload is exact.
SupportCurve polar_dual(const SupportCurve& curve);
ArcPolygon polar_dual(const ArcPolygon& poly);

// Dual curve's geodesic curvature array: kappa* = k1^2 * R sample-wise.
std::vector<double> dual_curvature(const std::vector<double>& radius, const Metric& m);

// Gauss-Bonnet duality predictions: k1*L* = 2*pi - k1^2*A and
// k1^2*A* = 2*pi - k1*L.  Returns (L*, A*).
std::pair<double, double> duality_identities(const MeasureReport& report, const Metric& m);

} // namespace sphconv
