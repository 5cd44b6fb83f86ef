#include "sphconv/shapes.hpp"

#include <cmath>

#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"

namespace sphconv {

namespace {

// Arc on the circle (axis, r) running from `from` through `via` to `to` in the
// positive rotation sense; flips the start if the sampled midpoint misses via.
Arc arc_through(const Vec3& axis, double r, const Vec3& from, const Vec3& via, const Vec3& to) {
    auto param = [&](const Vec3& ref, const Vec3& p) {
        const Vec3 a = (ref - axis * ref.dot(axis));
        const Vec3 b = (p - axis * p.dot(axis));
        return wrap_angle(std::atan2(a.cross(b).dot(axis), a.dot(b)));
    };
    Arc arc;
    arc.c = axis;
    arc.r = r;
    arc.start = from;
    const double t_via = param(from, via);
    const double t_to = param(from, to);
    if (t_to < 1e-12) {
        arc.extent = kTwoPi;
    } else if (t_via <= t_to + 1e-12) {
        arc.extent = t_to;
    } else {
        throw Error("arc_through: traversal is not a positive rotation about the axis");
    }
    return arc;
}

} // namespace

double LuneSpec::max_length() const {
    return kTwoPi / std::sqrt(lambda * lambda + m.k1 * m.k1);
}

void LuneSpec::validate() const {
    if (!m.valid() || !(lambda > 0.0)) {
        throw DomainError("lune: k1 and lambda must be positive");
    }
    if (!(length > 0.0) || length > max_length() * (1.0 + 1e-12) + 1e-15) {
        throw DomainError("lune: length must lie in (0, 2*pi/sqrt(lambda^2+k1^2)]");
    }
}

double lune_area(double length, double lambda, const Metric& m) {
    LuneSpec spec{m, lambda, length};
    spec.validate();
    const double k1 = m.k1;
    const double mu = std::sqrt(lambda * lambda + k1 * k1);
    const double arg = 0.25 * mu * length; // in (0, pi/2]
    return 4.0 / (k1 * k1) * atan_tan_continuous(lambda / mu, arg) - lambda / (k1 * k1) * length;
}

ArcPolygon make_lune(const LuneSpec& spec) {
    spec.validate();
    const double k1 = spec.m.k1;
    const double rho = std::atan2(k1, spec.lambda); // internal radius of the lambda circle
    const double target = std::min(k1 * spec.length, kTwoPi * std::sin(rho));

    // Internal length as a function of the half center-distance c: the lune is
    // the intersection of two lambda-discs whose centers are 2c apart.
    auto length_of = [&](double c) {
        const double v = std::acos(std::min(1.0, std::cos(rho) / std::cos(c)));
        return 4.0 * std::sin(rho) * std::asin(std::min(1.0, std::sin(v) / std::sin(rho)));
    };
    double c = 0.0;
    if (target < kTwoPi * std::sin(rho) - 1e-15) {
        c = bisect(length_of, 0.0, rho - 1e-14, target, 1e-15);
    }

    const double v = std::acos(std::min(1.0, std::cos(rho) / std::cos(c)));
    const Vec3 c1{std::sin(c), 0.0, std::cos(c)};
    const Vec3 c2{-std::sin(c), 0.0, std::cos(c)};
    const Vec3 vplus{0.0, std::sin(v), std::cos(v)};
    const Vec3 vminus{0.0, -std::sin(v), std::cos(v)};
    const Vec3 far1{std::sin(rho - c), 0.0, std::cos(rho - c)};  // bulge of the c2 arc
    const Vec3 far2{-std::sin(rho - c), 0.0, std::cos(rho - c)}; // bulge of the c1 arc

    ArcPolygon lune;
    lune.m = spec.m;
    lune.lambda = spec.lambda;
    lune.arcs.push_back(arc_through(c2, rho, vminus, far1, vplus));
    lune.arcs.push_back(arc_through(c1, rho, vplus, far2, vminus));
    lune.validate();
    return lune;
}

double lower_bound_deficit(const ArcPolygon& poly) {
    if (!is_lambda_convex(poly)) {
        throw ConvexityError("lower_bound_deficit: polygon is not lambda-convex");
    }
    const double len = std::min(poly.length(), LuneSpec{poly.m, poly.lambda, 1.0}.max_length());
    return poly.area() - lune_area(len, poly.lambda, poly.m);
}

double lower_bound_deficit(const SupportCurve& curve) {
    if (!is_lambda_convex(curve, 1e-6)) {
        throw ConvexityError("lower_bound_deficit: curve is not lambda-convex");
    }
    const MeasureReport r = measure(curve);
    const double len = std::min(r.length, LuneSpec{curve.m, curve.lambda, 1.0}.max_length());
    return r.area - lune_area(len, curve.lambda, curve.m);
}

double euclid_lower_bound(double length, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("euclid_lower_bound: lambda must be positive");
    if (!(length > 0.0) || length > kTwoPi / lambda * (1.0 + 1e-12)) {
        throw DomainError("euclid_lower_bound: length must lie in (0, 2*pi/lambda]");
    }
    return 0.5 * length / lambda - std::sin(0.5 * lambda * length) / (lambda * lambda);
}

ArcPolygon make_racetrack_polygon(double lambda, double separation, const Metric& m) {
    if (!m.valid() || !(lambda > 0.0)) {
        throw DomainError("racetrack: k1 and lambda must be positive");
    }
    if (separation < 0.0) throw DomainError("racetrack: separation must be nonnegative");
    const double k1 = m.k1;
    const double rho = std::atan2(k1, lambda);
    const double delta = 0.5 * k1 * separation;
    if (delta + rho >= kPi / 2 - 1e-12) {
        throw DomainError("racetrack: separation too large for an embedded hull");
    }

    ArcPolygon track;
    track.m = m;
    track.lambda = 0.0; // convexity class: curvature range is [0, lambda]

    if (delta < 1e-14) {
        Arc full;
        full.c = {0, 0, 1};
        full.r = rho;
        full.start = {std::sin(rho), 0.0, std::cos(rho)};
        full.extent = kTwoPi;
        track.arcs.push_back(full);
        return track;
    }

    const Vec3 c1{std::sin(delta), 0.0, std::cos(delta)};
    const Vec3 c2{-std::sin(delta), 0.0, std::cos(delta)};
    const double qz = -std::sin(rho) / std::cos(delta);
    const double qy = std::sqrt(std::max(0.0, 1.0 - qz * qz));
    const Vec3 q_top{0.0, qy, qz};
    const Vec3 q_bot{0.0, -qy, qz};
    auto tangent_point = [&](const Vec3& c, const Vec3& q) {
        return (c / std::cos(rho) + std::tan(rho) * q).normalized();
    };
    const Vec3 t1b = tangent_point(c1, q_bot), t1t = tangent_point(c1, q_top);
    const Vec3 t2t = tangent_point(c2, q_top), t2b = tangent_point(c2, q_bot);
    const Vec3 far1{std::sin(delta + rho), 0.0, std::cos(delta + rho)};
    const Vec3 far2{-std::sin(delta + rho), 0.0, std::cos(delta + rho)};

    track.arcs.push_back(arc_through(c1, rho, t1b, far1, t1t));
    track.arcs.push_back(arc_through(-q_top, kPi / 2, t1t, slerp(t1t, t2t, 0.5), t2t));
    track.arcs.push_back(arc_through(c2, rho, t2t, far2, t2b));
    track.arcs.push_back(arc_through(-q_bot, kPi / 2, t2b, slerp(t2b, t1b, 0.5), t1b));
    track.validate();
    return track;
}

SupportCurve make_racetrack(double lambda, double separation, const Metric& m, int n_samples) {
    return support_from_arcs(make_racetrack_polygon(lambda, separation, m), n_samples);
}

double racetrack_length_bound(double area, double lambda, const Metric& m) {
    if (!m.valid() || !(lambda > 0.0)) {
        throw DomainError("racetrack_length_bound: k1 and lambda must be positive");
    }
    const double k1 = m.k1;
    if (!(area > 0.0) || k1 * k1 * area >= kTwoPi + 1e-12) {
        throw DomainError("racetrack_length_bound: area must lie in (0, 2*pi/k1^2)");
    }
    const double rest = kTwoPi - k1 * k1 * area;
    const double mu = std::sqrt(lambda * lambda + k1 * k1);
    return kTwoPi / k1 + rest / lambda - 4.0 / k1 * atan_tan_continuous(k1 / mu, rest * mu / (4.0 * lambda));
}

namespace {

double slack_from(const MeasureReport& r, double lambda, const Metric& m, double kappa_tol) {
    if (r.kappa_max > lambda * (1.0 + kappa_tol) + kappa_tol) {
        throw CurvatureRangeError("upper_bound_slack: curvature exceeds lambda");
    }
    return racetrack_length_bound(r.area, lambda, m) - r.length;
}

} // namespace

double upper_bound_slack(const ArcPolygon& poly, double lambda) {
    return slack_from(measure(poly), lambda, poly.m, 1e-9);
}

double upper_bound_slack(const SupportCurve& curve, double lambda) {
    return slack_from(measure(curve), lambda, curve.m, 1e-6);
}

double euclid_upper_bound(double area, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("euclid_upper_bound: lambda must be positive");
    if (!(area > 0.0)) throw DomainError("euclid_upper_bound: area must be positive");
    return lambda * area + kPi / lambda;
}

} // namespace sphconv
