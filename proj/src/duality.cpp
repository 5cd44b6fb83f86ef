#include "sphconv/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"

namespace sphconv {

namespace {

constexpr double kSegEps = 1e-9; // arcs with r >= pi/2 - eps act as geodesics

} // namespace

ArcPolygon polar_dual(const ArcPolygon& poly) {
    poly.validate();
    const int n = poly.size();
    ArcPolygon dual;
    dual.m = poly.m;
    for (int i = 0; i < n; ++i) {
        const Arc& a = poly.arcs[i];
        if (a.r < kPi / 2 - kSegEps) {
            Arc d;
            d.c = a.c;
            d.r = kPi / 2 - a.r;
            d.start = -a.normal_pole_at(a.start);
            d.extent = a.extent;
            dual.arcs.push_back(d);
        }
        // else: a geodesic segment dualizes to a single vertex of the dual.

        const double phi = poly.turning_angle(i);
        if (phi > 1e-12) {
            const Vec3 v = a.end();
            const Vec3 from = -a.normal_pole_at(v);
            const Arc& b = poly.arcs[(i + 1) % n];
            const Vec3 to = -b.normal_pole_at(b.start);
            Vec3 axis = v;
            if ((rotate(axis, phi, from) - to).norm() > 1e-8) {
                axis = -v;
                if ((rotate(axis, phi, from) - to).norm() > 1e-8) {
                    throw Error("polar_dual: vertex fan does not chain");
                }
            }
            Arc d;
            d.c = axis;
            d.r = kPi / 2;
            d.start = from;
            d.extent = phi;
            dual.arcs.push_back(d);
        }
    }
    if (dual.arcs.empty()) throw DomainError("polar_dual: degenerate polygon");

    // Convexity constant of the dual: min geodesic curvature over its arcs.
    double min_kappa = std::numeric_limits<double>::infinity();
    for (const Arc& d : dual.arcs) {
        min_kappa = std::min(min_kappa, std::cos(d.r) / std::sin(d.r));
    }
    dual.lambda = std::max(0.0, poly.m.k1 * min_kappa);
    dual.validate();
    return dual;
}

SupportCurve polar_dual(const SupportCurve& curve) {
    curve.validate();
    const int n = curve.samples();
    const double k1 = curve.m.k1;

    std::vector<double> hh(static_cast<size_t>(n)); // internal (k1=1) support samples
    for (int j = 0; j < n; ++j) {
        const double v = k1 * curve.h[static_cast<size_t>(j)];
        if (v <= 1e-9) {
            throw DomainError("polar_dual: origin must lie strictly inside the curve");
        }
        hh[static_cast<size_t>(j)] = v;
    }
    {
        // Strict convexity precondition.
        SupportCurve probe = curve;
        const auto radius = curvature_radius_profile(probe);
        for (double r : radius) {
            if (r < -1e-6) throw ConvexityError("polar_dual: curve is not convex");
        }
    }

    const double dx = kTwoPi / n;
    // Support objective of the reflected dual point set in direction phi:
    // the dual point of parameter theta sits at distance pi/2 - h(theta),
    // azimuth theta + pi, so its gnomonic support is -cos(phi-theta)/tan(h).
    auto objective_at = [&](double phi, int j) {
        return -std::cos(phi - j * dx) / std::tan(hh[static_cast<size_t>(((j % n) + n) % n)]);
    };

    // Refines the discrete maximum around sample j0.  The objective is smooth
    // except for isolated corner peaks (where the input curve has a straight
    // piece), so the maximum is estimated from one-sided parabola fits through
    // exact samples: clamped parabola vertices handle the smooth case, and
    // intersections of pure one-sided fits recover a corner peak without the
    // overshoot a smoothing interpolant would produce.
    struct Quad {
        double a, b, c;
        double at(double x) const { return (a * x + b) * x + c; }
    };
    auto fit3 = [](double x1, double y1, double x2, double y2, double x3, double y3) {
        const double d1 = (x1 - x2) * (x1 - x3);
        const double d2 = (x2 - x1) * (x2 - x3);
        const double d3 = (x3 - x1) * (x3 - x2);
        Quad q;
        q.a = y1 / d1 + y2 / d2 + y3 / d3;
        q.b = -(y1 * (x2 + x3) / d1 + y2 * (x1 + x3) / d2 + y3 * (x1 + x2) / d3);
        q.c = y1 * x2 * x3 / d1 + y2 * x1 * x3 / d2 + y3 * x1 * x2 / d3;
        return q;
    };
    auto polish = [&](double phi, int j0) {
        double f[7];
        for (int k = -3; k <= 3; ++k) f[k + 3] = objective_at(phi, j0 + k);
        auto x_of = [&](int k) { return k * dx; };
        const Quad l1 = fit3(x_of(-3), f[0], x_of(-2), f[1], x_of(-1), f[2]);
        const Quad l2 = fit3(x_of(-2), f[1], x_of(-1), f[2], x_of(0), f[3]);
        const Quad r1 = fit3(x_of(0), f[3], x_of(1), f[4], x_of(2), f[5]);
        const Quad r2 = fit3(x_of(1), f[4], x_of(2), f[5], x_of(3), f[6]);
        double best = std::max({f[2], f[3], f[4]});
        if (l2.a < 0.0) best = std::max(best, l2.at(std::clamp(-l2.b / (2 * l2.a), -dx, 0.0)));
        if (r1.a < 0.0) best = std::max(best, r1.at(std::clamp(-r1.b / (2 * r1.a), 0.0, dx)));
        // Corner candidates: intersect the pure one-sided branches on the cell
        // that excludes the shared sample.
        auto corner = [&](const Quad& ql, const Quad& qr, double lo, double hi) {
            const double qa = ql.a - qr.a, qb = ql.b - qr.b, qc = ql.c - qr.c;
            double roots[2];
            int nr = 0;
            if (std::abs(qa) < 1e-14) {
                if (std::abs(qb) > 1e-300) roots[nr++] = -qc / qb;
            } else {
                const double disc = qb * qb - 4 * qa * qc;
                if (disc >= 0.0) {
                    const double s = std::sqrt(disc);
                    roots[nr++] = (-qb + s) / (2 * qa);
                    roots[nr++] = (-qb - s) / (2 * qa);
                }
            }
            for (int r = 0; r < nr; ++r) {
                if (roots[r] > lo && roots[r] < hi) {
                    best = std::max(best, std::min(ql.at(roots[r]), qr.at(roots[r])));
                }
            }
        };
        corner(l2, r2, 0.0, dx);  // corner to the right of the winning sample
        corner(l1, r1, -dx, 0.0); // corner to the left
        return best;
    };

    SupportCurve dual;
    dual.m = curve.m;
    dual.h.resize(static_cast<size_t>(n));

    // The maximizing sample index advances monotonically with the query
    // direction; sweep once with a two-pointer and polish per direction.
    int j_star = 0;
    double best0 = objective_at(0.0, 0);
    for (int j = 1; j < n; ++j) {
        const double v = objective_at(0.0, j);
        if (v > best0) {
            best0 = v;
            j_star = j;
        }
    }
    for (int i = 0; i < n; ++i) {
        const double phi = i * dx;
        int guard = 0;
        while (guard++ < n && objective_at(phi, j_star + 1) >= objective_at(phi, j_star)) ++j_star;
        const double val = polish(phi, j_star);
        if (!(val > 0.0)) throw ConvexityError("polar_dual: dual support collapsed");
        dual.h[static_cast<size_t>(i)] = std::atan(val) / k1;
    }

    // Convexity constant of the dual: kappa* = k1^2 R >= k1^2 min R.
    const auto radius = curvature_radius_profile(curve);
    double rmin = std::numeric_limits<double>::infinity();
    for (double r : radius) rmin = std::min(rmin, r);
    dual.lambda = std::max(0.0, k1 * k1 * rmin);
    return dual;
}

std::vector<double> dual_curvature(const std::vector<double>& radius, const Metric& m) {
    std::vector<double> kappa(radius.size());
    for (size_t j = 0; j < radius.size(); ++j) {
        if (radius[j] < 0.0) throw DomainError("dual_curvature: negative curvature radius");
        kappa[j] = m.k1 * m.k1 * radius[j];
    }
    return kappa;
}

std::pair<double, double> duality_identities(const MeasureReport& report, const Metric& m) {
    const double k1 = m.k1;
    const double dual_length = (kTwoPi - k1 * k1 * report.area) / k1;
    const double dual_area = (kTwoPi - k1 * report.length) / (k1 * k1);
    return {dual_length, dual_area};
}

} // namespace sphconv
