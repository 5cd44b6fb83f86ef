#pragma once

#include <optional>
#include <vector>

#include "sphconv/sphere.hpp"

namespace sphconv {

// Closed convex curve sampled through its support function: h[j] is the
// distance from the chart origin to the supporting geodesic perpendicular to
// the ray of azimuth 2*pi*j/N.  `lambda` is the curve's convexity constant
// (geodesic curvature >= lambda); lambda = 0 marks a merely convex curve such
// as a polar dual.  `breaks` optionally lists azimuths where the curvature
// jumps (arc/vertex boundaries); measurement uses them to split quadrature.
struct SupportCurve {
    Metric m;
    double lambda = 1.0;
    std::vector<double> h;
    std::vector<double> breaks;

    int samples() const { return static_cast<int>(h.size()); }
    void validate() const; // throws DomainError / OverflowError
};

// Curve corner: the support parameter dwells on [alpha, beta] while the
// contact point stays at the single vertex point (u, theta).
struct Vertex {
    double u = 0.0;     // geodesic distance of the vertex from the origin
    double theta = 0.0; // azimuth of the vertex
    double alpha = 0.0; // first support azimuth of the normal fan (unwrapped)
    double beta = 0.0;  // last support azimuth, alpha < beta
    double phi = 0.0;   // jump angle of the tangent
};

// One circular arc: points rotate(c, tau, start) for tau in [0, extent], so
// the enclosed body lies on the side of the axis c and the geodesic curvature
// with respect to that orientation is cot(r) >= 0.
struct Arc {
    Vec3 c;              // unit rotation axis (spherical center)
    double r = 0.0;      // geodesic radius in (0, pi/2]; pi/2 is a geodesic
    Vec3 start;          // unit start point, dist(start, c) == r
    double extent = 0.0; // swept angle about c, > 0

    Vec3 point(double tau) const { return rotate(c, tau, start); }
    Vec3 end() const { return point(extent); }
    // Unit tangent of the traversal at point p of this arc.
    Vec3 tangent_at(const Vec3& p) const { return c.cross(p) / std::sin(r); }
    // Outward normal pole of the supporting geodesic at point p.
    Vec3 normal_pole_at(const Vec3& p) const { return (p * std::cos(r) - c) / std::sin(r); }
};

// Exact piecewise-circular representation of a closed convex curve.  For a
// lambda-convex polygon every arc has geodesic curvature lambda; generalized
// instances (racetracks, polar duals) carry mixed radii including geodesic
// segments at r = pi/2.  All geometry is stored at k1 = 1; the metric only
// rescales reported lengths and areas.
struct ArcPolygon {
    Metric m;
    double lambda = 1.0;
    std::vector<Arc> arcs;

    int size() const { return static_cast<int>(arcs.size()); }
    void validate(double tol = 1e-9) const; // closure + convexity, throws

    // Derived corner list (only junctions with a positive jump angle).
    std::vector<Vertex> vertices() const;

    // Jump angle at the junction between arcs[i] and arcs[i+1 mod n].
    double turning_angle(int i) const;

    double length() const;          // k1-rescaled
    double area() const;            // Gauss-Bonnet route, k1-rescaled
    double area_fan() const;        // independent origin-fan route, k1-rescaled
    double total_curvature() const; // integral of geodesic curvature, unitless

    bool uniform_lambda(double tol = 1e-9) const; // all arcs of curvature lambda

    ArcPolygon transformed(const Rot3& q) const;

    // Rotates the polygon so the center of its minimal enclosing disc is the
    // chart origin (the support-function origin convention).
    ArcPolygon recentered() const;

    // Exact support function value at azimuth theta.
    double support(double theta) const;

    // Maximum of the support function (circumradius about the chart origin).
    double max_support() const;
};

// Aggregated measurements of a closed curve.
struct MeasureReport {
    double length = 0.0;
    double area = 0.0;
    double r_min = 0.0;     // min radius of curvature (0 at a corner)
    double r_max = 0.0;     // max radius of curvature
    double kappa_min = 0.0; // min geodesic curvature over smooth points
    double kappa_max = 0.0; // max (infinite when the curve has corners)
};

// --- sampled-representation operations -------------------------------------

// Contact radius g = tan(k1*h)/k1 per sample; throws OverflowError when any
// support distance reaches the quarter circle.
std::vector<double> contact_radius(const SupportCurve& curve);

// Pointwise radius of curvature from the contact radius and its derivatives.
double curvature_radius(double g, double g1, double g2, const Metric& m);

// Per-sample radius of curvature reconstructed by periodic finite differences.
std::vector<double> curvature_radius_profile(const SupportCurve& curve);

double length(const SupportCurve& curve); // throws ConvexityError if R < -tol
double area(const SupportCurve& curve);

// Jump angle of the tangent across a vertex; closed form with the arctan
// branch accumulated continuously.  Requires beta - alpha < pi.
double jump_angle(const Vertex& v, const Metric& m);

// Exact support sampling of an arc polygon on N uniform azimuths, with the
// arc/vertex partition recorded as quadrature breaks.
SupportCurve support_from_arcs(const ArcPolygon& poly, int n_samples);

MeasureReport measure(const SupportCurve& curve);
MeasureReport measure(const ArcPolygon& poly);

bool is_lambda_convex(const SupportCurve& curve, double tol);
bool is_lambda_convex(const ArcPolygon& poly, double tol = 1e-8);

// Support function of the spherical disc of geodesic radius r centered at
// distance d, azimuth theta_c from the origin, evaluated at azimuth theta.
double disc_support(double d, double theta_c, double r, double theta);

// Tangent frame at a circle center used for start-angle bookkeeping: e1 points
// radially away from the chart origin (e1 = x-axis when the center is the
// origin itself), e2 = c x e1.
struct CenterFrame {
    Vec3 c, e1, e2;
    explicit CenterFrame(const Vec3& center);
    Vec3 point(double r, double psi) const {
        return c * std::cos(r) + (e1 * std::cos(psi) + e2 * std::sin(psi)) * std::sin(r);
    }
    double angle_of(const Vec3& p) const;
};

// Support azimuth/distance pair of the outward normal pole nu: theta is the
// azimuth of nu, h = asin(-nu.z).
struct SupportParam {
    double theta = 0.0;
    double h = 0.0;
};
SupportParam support_param(const Vec3& normal_pole);

} // namespace sphconv
