#include <algorithm>
#include <cmath>
#include <limits>

#include "sphconv/curve.hpp"
#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"

namespace sphconv {

namespace {

constexpr double kSegmentRadiusEps = 1e-12; // r >= pi/2 - eps is a geodesic

// One interval of the support-azimuth partition: while the support parameter
// runs over [lo, hi] (unwrapped), the contact stays on one arc or one vertex.
struct Piece {
    double lo = 0.0, hi = 0.0;
    int arc = -1;    // contributing arc index, or
    int vertex = -1; // junction index (vertex after arcs[vertex])
    Vec3 vertex_point;
};

// Azimuth advance of a pole rotating about `axis` by `angle`, accumulated in
// chunks small enough that each wrapped increment is unambiguous.
double azimuth_advance(const Vec3& axis, double angle, const Vec3& pole_start) {
    const int chunks = std::max(1, static_cast<int>(std::ceil(angle / (kPi / 8))));
    double total = 0.0;
    double prev = std::atan2(pole_start.y, pole_start.x);
    for (int i = 1; i <= chunks; ++i) {
        const Vec3 p = rotate(axis, angle * i / chunks, pole_start);
        const double az = std::atan2(p.y, p.x);
        total += wrap_signed(az - prev);
        prev = az;
    }
    return total;
}

std::vector<Piece> build_partition(const ArcPolygon& poly) {
    const int n = poly.size();
    std::vector<Piece> pieces;
    pieces.reserve(2 * n);
    const Vec3 first_pole = poly.arcs[0].normal_pole_at(poly.arcs[0].start);
    double cursor = wrap_angle(std::atan2(first_pole.y, first_pole.x));
    for (int i = 0; i < n; ++i) {
        const Arc& a = poly.arcs[i];
        const double adv = azimuth_advance(a.c, a.extent, a.normal_pole_at(a.start));
        if (adv < -1e-9) throw ConvexityError("arc polygon: support azimuth runs backwards");
        pieces.push_back({cursor, cursor + std::max(adv, 0.0), i, -1, {}});
        cursor += std::max(adv, 0.0);

        const Vec3 v = a.end();
        const double phi = poly.turning_angle(i);
        if (phi < -1e-9) throw ConvexityError("arc polygon: negative turning angle");
        if (phi > 1e-13) {
            const double fan = azimuth_advance(v, phi, a.normal_pole_at(v));
            Piece p;
            p.lo = cursor;
            p.hi = cursor + std::max(fan, 0.0);
            p.vertex = i;
            p.vertex_point = v;
            pieces.push_back(p);
            cursor += std::max(fan, 0.0);
        }
    }
    const double total = cursor - pieces.front().lo;
    if (std::abs(total - kTwoPi) > 1e-7) {
        throw ConvexityError("arc polygon: support parameter does not advance by 2*pi");
    }
    return pieces;
}

double support_at(const std::vector<Piece>& pieces, const ArcPolygon& poly, double theta) {
    const double base = pieces.front().lo;
    double th = base + wrap_angle(theta - base);
    // Find the piece with lo <= th <= hi.
    int lo = 0, hi = static_cast<int>(pieces.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (pieces[static_cast<size_t>(mid)].hi < th) lo = mid + 1;
        else hi = mid;
    }
    const Piece& p = pieces[static_cast<size_t>(lo)];
    if (p.arc >= 0) {
        const Arc& a = poly.arcs[p.arc];
        if (a.r >= kPi / 2 - kSegmentRadiusEps) {
            // Geodesic piece: it supports the body at a single azimuth and the
            // supporting geodesic is the piece's own great circle.
            return std::asin(std::clamp(a.c.z, -1.0, 1.0));
        }
        const SpherePoint c = to_polar(a.c);
        return disc_support(c.t, c.theta, a.r, theta);
    }
    const SpherePoint v = to_polar(p.vertex_point);
    return std::atan(std::tan(v.t) * std::cos(theta - v.theta));
}

} // namespace

double disc_support(double d, double theta_c, double r, double theta) {
    const double a = std::cos(d);
    const double b = std::sin(d) * std::cos(theta - theta_c);
    const double m = std::hypot(a, b);
    return std::atan2(b, a) + std::asin(std::min(1.0, std::sin(r) / m));
}

SupportParam support_param(const Vec3& normal_pole) {
    SupportParam s;
    s.theta = wrap_angle(std::atan2(normal_pole.y, normal_pole.x));
    s.h = std::asin(std::clamp(-normal_pole.z, -1.0, 1.0));
    return s;
}

CenterFrame::CenterFrame(const Vec3& center) : c(center) {
    const SpherePoint p = to_polar(center);
    e1 = {std::cos(p.t) * std::cos(p.theta), std::cos(p.t) * std::sin(p.theta), -std::sin(p.t)};
    e2 = c.cross(e1);
}

double CenterFrame::angle_of(const Vec3& p) const {
    const Vec3 rel = p - c * p.dot(c);
    return wrap_angle(std::atan2(rel.dot(e2), rel.dot(e1)));
}

void ArcPolygon::validate(double tol) const {
    if (!m.valid()) throw DomainError("arc polygon: k1 must be positive");
    if (lambda < 0.0) throw DomainError("arc polygon: lambda must be nonnegative");
    if (arcs.empty()) throw DomainError("arc polygon: no arcs");
    for (const Arc& a : arcs) {
        if (!(a.r > 0.0) || a.r > kPi / 2 + 1e-12) {
            throw DomainError("arc polygon: arc radius outside (0, pi/2]");
        }
        if (!(a.extent > 0.0) || a.extent > kTwoPi + 1e-9) {
            throw DomainError("arc polygon: arc extent outside (0, 2*pi]");
        }
        if (std::abs(sphere_dist(a.start, a.c) - a.r) > 1e-9) {
            throw DomainError("arc polygon: start point not on the arc's circle");
        }
    }
    const int n = size();
    for (int i = 0; i < n; ++i) {
        const Vec3 e = arcs[i].end();
        const Vec3 s = arcs[(i + 1) % n].start;
        if ((e - s).norm() > tol) throw DomainError("arc polygon: boundary does not close");
        if (turning_angle(i) < -1e-9) throw ConvexityError("arc polygon: concave vertex");
    }
}

double ArcPolygon::turning_angle(int i) const {
    const int n = size();
    const Arc& a = arcs[i];
    const Arc& b = arcs[(i + 1) % n];
    const Vec3 v = a.end();
    const Vec3 tin = a.tangent_at(v);
    const Vec3 tout = b.tangent_at(b.start);
    return std::atan2(tin.cross(tout).dot(v), tin.dot(tout));
}

std::vector<Vertex> ArcPolygon::vertices() const {
    const auto pieces = build_partition(*this);
    std::vector<Vertex> out;
    for (const Piece& p : pieces) {
        if (p.vertex < 0) continue;
        const SpherePoint sp = to_polar(p.vertex_point);
        Vertex v;
        v.u = sp.t / m.k1;
        v.theta = sp.theta;
        v.alpha = p.lo;
        v.beta = p.hi;
        v.phi = turning_angle(p.vertex);
        out.push_back(v);
    }
    return out;
}

double ArcPolygon::length() const {
    double s = 0.0;
    for (const Arc& a : arcs) s += a.extent * std::sin(a.r);
    return s / m.k1;
}

double ArcPolygon::total_curvature() const {
    double s = 0.0;
    for (const Arc& a : arcs) s += a.extent * std::cos(a.r);
    return s;
}

double ArcPolygon::area() const {
    double jumps = 0.0;
    for (int i = 0; i < size(); ++i) jumps += std::max(0.0, turning_angle(i));
    return (kTwoPi - total_curvature() - jumps) / (m.k1 * m.k1);
}

double ArcPolygon::area_fan() const {
    const Vec3 origin{0, 0, 1};
    double s = 0.0;
    for (const Arc& a : arcs) {
        s += signed_triangle_area(origin, a.start, a.end());
        s += arc_bulge_area(a.r, a.extent);
    }
    return s / (m.k1 * m.k1);
}

bool ArcPolygon::uniform_lambda(double tol) const {
    const double rho = std::atan2(m.k1, lambda); // internal radius of the lambda circle
    for (const Arc& a : arcs) {
        if (std::abs(a.r - rho) > tol) return false;
    }
    return true;
}

ArcPolygon ArcPolygon::transformed(const Rot3& q) const {
    ArcPolygon out = *this;
    for (Arc& a : out.arcs) {
        a.c = q.apply(a.c).normalized();
        a.start = q.apply(a.start).normalized();
    }
    return out;
}

double ArcPolygon::support(double theta) const {
    const auto pieces = build_partition(*this);
    return support_at(pieces, *this, theta) / m.k1;
}

double ArcPolygon::max_support() const {
    const auto pieces = build_partition(*this);
    double best = 0.0;
    for (const Piece& p : pieces) {
        if (p.hi - p.lo < 1e-14 && p.arc >= 0) continue;
        double candidates[3] = {p.lo, p.hi, 0.0};
        int nc = 2;
        double center_az;
        if (p.arc >= 0) {
            center_az = to_polar(arcs[p.arc].c).theta;
        } else {
            center_az = to_polar(p.vertex_point).theta;
        }
        // The support over a piece peaks where the query azimuth passes over
        // the arc center / vertex azimuth, if that angle is inside the piece.
        const double base = p.lo + wrap_angle(center_az - p.lo);
        if (base <= p.hi) {
            candidates[nc++] = base;
        }
        for (int k = 0; k < nc; ++k) {
            best = std::max(best, support_at(pieces, *this, candidates[k]));
        }
    }
    return best / m.k1;
}

namespace {

struct Disc {
    Vec3 center;
    double radius = 0.0;
};

bool in_disc(const Disc& d, const Vec3& p, double tol = 1e-11) {
    return sphere_dist(d.center, p) <= d.radius + tol;
}

Disc disc_from(const Vec3& a, const Vec3& b) {
    Disc d;
    d.center = slerp(a, b, 0.5);
    d.radius = 0.5 * sphere_dist(a, b);
    return d;
}

Disc disc_from(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 n = (b - a).cross(c - a);
    if (n.norm() < 1e-14) {
        // Collinear: largest pairwise disc.
        Disc best = disc_from(a, b);
        for (const Disc& d : {disc_from(a, c), disc_from(b, c)}) {
            if (d.radius > best.radius) best = d;
        }
        return best;
    }
    Disc d;
    d.center = n.normalized();
    d.radius = sphere_dist(d.center, a);
    if (d.radius > kPi / 2) {
        d.center = -d.center;
        d.radius = kPi - d.radius;
    }
    return d;
}

Disc welzl(std::vector<Vec3>& pts, int n, Vec3 support[3], int ns) {
    if (n == 0 || ns == 3) {
        switch (ns) {
            case 1: return {support[0], 0.0};
            case 2: return disc_from(support[0], support[1]);
            case 3: return disc_from(support[0], support[1], support[2]);
            default: return {{0, 0, 1}, -1.0}; // empty marker
        }
    }
    const Vec3 p = pts[static_cast<size_t>(n - 1)];
    const Disc d = welzl(pts, n - 1, support, ns);
    if (d.radius >= 0.0 && in_disc(d, p)) return d;
    support[ns] = p;
    return welzl(pts, n - 1, support, ns + 1);
}

} // namespace

ArcPolygon ArcPolygon::recentered() const {
    std::vector<Vec3> pts;
    for (const Arc& a : arcs) {
        const int k = std::min(128, std::max(4, static_cast<int>(std::ceil(a.extent / 0.05))));
        for (int i = 0; i <= k; ++i) pts.push_back(a.point(a.extent * i / k));
    }
    // Deterministic shuffle for Welzl's expected-linear behaviour.
    Rng rng(0x5eedULL + pts.size());
    for (int i = static_cast<int>(pts.size()) - 1; i > 0; --i) {
        std::swap(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(rng.uniform_int(0, i))]);
    }
    Vec3 support[3];
    const Disc d = welzl(pts, static_cast<int>(pts.size()), support, 0);
    const Vec3 target{0, 0, 1};
    if ((d.center - target).norm() < 1e-14) return *this;
    const Vec3 axis_raw = d.center.cross(target);
    if (axis_raw.norm() < 1e-14) {
        return transformed(Rot3::about_axis({1, 0, 0}, kPi));
    }
    const Vec3 axis = axis_raw.normalized();
    const double ang = sphere_dist(d.center, target);
    return transformed(Rot3::about_axis(axis, ang));
}

SupportCurve support_from_arcs(const ArcPolygon& poly, int n_samples) {
    if (n_samples < 256) throw DomainError("support_from_arcs: need at least 256 samples");
    poly.validate();
    const auto pieces = build_partition(poly);
    SupportCurve curve;
    curve.m = poly.m;
    curve.lambda = poly.lambda;
    curve.h.resize(static_cast<size_t>(n_samples));
    for (int j = 0; j < n_samples; ++j) {
        curve.h[static_cast<size_t>(j)] = support_at(pieces, poly, kTwoPi * j / n_samples) / poly.m.k1;
    }
    for (const Piece& p : pieces) {
        if (p.hi - p.lo < 1e-13) continue;
        curve.breaks.push_back(wrap_angle(p.lo));
    }
    std::sort(curve.breaks.begin(), curve.breaks.end());
    curve.breaks.erase(std::unique(curve.breaks.begin(), curve.breaks.end(),
                                   [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                       curve.breaks.end());
    // A single-arc polygon (full circle) is smooth: no quadrature splits.
    if (curve.breaks.size() <= 1) curve.breaks.clear();
    return curve;
}

MeasureReport measure(const ArcPolygon& poly) {
    poly.validate();
    MeasureReport r;
    r.length = poly.length();
    r.area = poly.area();
    const double k1 = poly.m.k1;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const Arc& a : poly.arcs) {
        const double rad = std::tan(a.r) / k1; // radius of curvature
        rmin = std::min(rmin, rad);
        rmax = std::max(rmax, rad);
    }
    bool has_corner = false;
    for (int i = 0; i < poly.size(); ++i) {
        if (poly.turning_angle(i) > 1e-12) has_corner = true;
    }
    if (has_corner) rmin = 0.0;
    r.r_min = rmin;
    r.r_max = rmax;
    r.kappa_min = (rmax == 0.0) ? 0.0 : 1.0 / rmax;
    r.kappa_max = has_corner ? std::numeric_limits<double>::infinity()
                             : (rmin > 0.0 ? 1.0 / rmin : std::numeric_limits<double>::infinity());
    return r;
}

bool is_lambda_convex(const ArcPolygon& poly, double tol) {
    poly.validate();
    if (poly.lambda <= 0.0) return true;
    const double r_bound = 1.0 / poly.lambda + tol;
    for (const Arc& a : poly.arcs) {
        if (std::tan(a.r) / poly.m.k1 > r_bound) return false;
    }
    return true;
}

} // namespace sphconv
