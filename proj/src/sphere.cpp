#include "sphconv/sphere.hpp"

#include <cmath>

#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"

namespace sphconv {

Vec3 to_vec(const SpherePoint& p) {
    return {std::sin(p.t) * std::cos(p.theta), std::sin(p.t) * std::sin(p.theta), std::cos(p.t)};
}

SpherePoint to_polar(const Vec3& v) {
    const double t = std::atan2(std::hypot(v.x, v.y), v.z);
    double theta = std::atan2(v.y, v.x);
    if (t < 1e-15) theta = 0.0;
    return {t, wrap_angle(theta)};
}

CircleFacts geodesic_circle(double rho, const Metric& m) {
    if (!m.valid()) throw DomainError("geodesic_circle: k1 must be positive");
    const double r = m.k1 * rho;
    if (!(r > 0.0) || !(r < kPi / 2)) {
        throw DomainError("geodesic_circle: rho must lie in (0, pi/(2*k1))");
    }
    CircleFacts f;
    f.curvature = m.k1 * std::cos(r) / std::sin(r);
    f.length = kTwoPi * std::sin(r) / m.k1;
    f.area = kTwoPi * (1.0 - std::cos(r)) / (m.k1 * m.k1);
    return f;
}

double triangle_area(double a, double b, double alpha, const Metric& m) {
    if (!m.valid()) throw DomainError("triangle_area: k1 must be positive");
    const double sa = m.k1 * a, sb = m.k1 * b;
    if (!(sa >= 0.0) || !(sb >= 0.0) || sa >= kPi || sb >= kPi) {
        throw DomainError("triangle_area: sides must lie in [0, pi/k1)");
    }
    if (alpha < -1e-12 || alpha > kPi + 1e-12) {
        throw DomainError("triangle_area: included angle must lie in [0, pi]");
    }
    // tan(f/2) = sin a sin b sin alpha / ((1+cos a)(1+cos b) + sin a sin b cos alpha),
    // evaluated with atan2 so near-hemispheric triangles stay on the right branch.
    const double num = std::sin(sa) * std::sin(sb) * std::sin(alpha);
    const double den =
        (1.0 + std::cos(sa)) * (1.0 + std::cos(sb)) + std::sin(sa) * std::sin(sb) * std::cos(alpha);
    const double f = 2.0 * std::atan2(num, den);
    return f / (m.k1 * m.k1);
}

double triangle_area_argmax(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || a >= kPi || b >= kPi) {
        throw DomainError("triangle_area_argmax: sides must lie in (0, pi)");
    }
    const double p = std::tan(0.5 * a) * std::tan(0.5 * b);
    if (p > 1.0 + 1e-12) {
        throw DomainError("triangle_area_argmax: tan(a/2)*tan(b/2) exceeds 1");
    }
    return std::acos(std::max(-1.0, -p));
}

double signed_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double num = a.dot(b.cross(c));
    const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(num, den);
}

double arc_bulge_area(double r, double sigma) {
    // sector area sigma*(1-cos r) minus the signed isoceles triangle with legs
    // r and apex angle sigma; sigma > pi makes the triangle term negative,
    // which is exactly the wrap-around segment.
    const double sr = std::sin(r), cr = std::cos(r);
    const double tri =
        2.0 * std::atan2(sr * sr * std::sin(sigma), (1.0 + cr) * (1.0 + cr) + sr * sr * std::cos(sigma));
    return sigma * (1.0 - cr) - tri;
}

} // namespace sphconv
