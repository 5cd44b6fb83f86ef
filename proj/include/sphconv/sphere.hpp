#pragma once

#include "sphconv/vec3.hpp"

namespace sphconv {

// The sphere of Gaussian curvature k1^2.  All library internals normalize to
// k1 = 1 and rescale on the way in/out: lengths by k1, areas by k1^2.
struct Metric {
    double k1 = 1.0;

    bool valid() const { return k1 > 0.0; }
};

// Point in the polar chart: geodesic distance t from the chart origin and
// azimuth theta in [0, 2*pi).
struct SpherePoint {
    double t = 0.0;
    double theta = 0.0;
};

// Chart conversions at k1 = 1 with the origin at (0,0,1).
Vec3 to_vec(const SpherePoint& p);
SpherePoint to_polar(const Vec3& v);

struct CircleFacts {
    double curvature = 0.0; // geodesic curvature
    double length = 0.0;    // circumference
    double area = 0.0;      // enclosed area
};

// Geodesic circle of radius rho; requires 0 < rho < pi/(2*k1).
CircleFacts geodesic_circle(double rho, const Metric& m);

// Area of the geodesic triangle with sides a, b and included angle alpha.
double triangle_area(double a, double b, double alpha, const Metric& m);

// The unique alpha maximizing triangle_area(a, b, .) on [0, pi]; sides are in
// unit-sphere radians. Requires tan(a/2)*tan(b/2) <= 1.
double triangle_area_argmax(double a, double b);

// Signed area of the spherical triangle with vertices a, b, c (unit vectors);
// positive for counterclockwise orientation.
double signed_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

// Signed area between a circular arc (unit axis c, geodesic radius r, swept
// angle sigma about +c) and the geodesic chord closing it.
double arc_bulge_area(double r, double sigma);

} // namespace sphconv
