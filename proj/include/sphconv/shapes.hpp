#pragma once

#include "sphconv/curve.hpp"

namespace sphconv {

// Parameters of a lambda-convex lune: the two-arc polygon of a given length.
struct LuneSpec {
    Metric m;
    double lambda = 1.0;
    double length = 1.0;

    // Length of the full circle of geodesic curvature lambda, the degenerate
    // lune closing the admissible interval (0, max_length].
    double max_length() const;
    void validate() const;
};

// Area enclosed by the lune of the given length (closed form, strictly convex
// in L on the admissible interval).
double lune_area(double length, double lambda, const Metric& m);

// Builds the lune as a two-arc polygon centered at the chart origin with the
// vertices on the +/- y axis; the degenerate endpoint yields the full circle.
ArcPolygon make_lune(const LuneSpec& spec);

// A(curve) - lune_area(L(curve)): nonnegative for every lambda-convex curve,
// zero exactly on lunes.
double lower_bound_deficit(const SupportCurve& curve);
double lower_bound_deficit(const ArcPolygon& poly);

// Planar limit of the lune bound: A >= L/(2*lambda) - sin(lambda*L/2)/lambda^2.
double euclid_lower_bound(double length, double lambda);

// Convex hull of two circles of geodesic curvature lambda whose centers are
// `separation` apart (two arcs joined by common-tangent geodesic segments).
// The exact generalized arc polygon; separation = 0 degenerates to the circle.
ArcPolygon make_racetrack_polygon(double lambda, double separation, const Metric& m);

// Sampled form of the racetrack (the shared curve representation).
SupportCurve make_racetrack(double lambda, double separation, const Metric& m, int n_samples = 4096);

// Length bound for curves of curvature in [0, lambda] as a function of the
// enclosed area, minus the measured length; nonnegative, zero on racetracks.
double upper_bound_slack(const SupportCurve& curve, double lambda);
double upper_bound_slack(const ArcPolygon& poly, double lambda);

// The bound itself: max length enclosing area A at curvature <= lambda.
double racetrack_length_bound(double area, double lambda, const Metric& m);

// Planar dual bound: L <= lambda*A + pi/lambda.
double euclid_upper_bound(double area, double lambda);

} // namespace sphconv
