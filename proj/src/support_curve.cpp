#include <algorithm>
#include <cmath>
#include <limits>

#include "sphconv/curve.hpp"
#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"

namespace sphconv {

void SupportCurve::validate() const {
    if (!m.valid()) throw DomainError("support curve: k1 must be positive");
    if (lambda < 0.0) throw DomainError("support curve: lambda must be nonnegative");
    if (samples() < 16) throw DomainError("support curve: need at least 16 samples");
    const double hard = kPi / (2.0 * m.k1);
    const double bound = (lambda > 0.0) ? std::atan2(m.k1, lambda) / m.k1 : hard;
    for (double v : h) {
        if (!(v >= 0.0) || v >= hard) {
            throw DomainError("support curve: h outside [0, pi/(2*k1))");
        }
        if (v > bound + 1e-9) {
            throw DomainError("support curve: h violates the arccot(lambda/k1)/k1 origin bound");
        }
    }
}

std::vector<double> contact_radius(const SupportCurve& curve) {
    curve.validate();
    std::vector<double> g(curve.h.size());
    for (size_t j = 0; j < curve.h.size(); ++j) {
        const double s = curve.m.k1 * curve.h[j];
        if (s >= kPi / 2 - 1e-12) {
            throw OverflowError("contact_radius: k1*h reached pi/2");
        }
        g[j] = std::tan(s) / curve.m.k1;
    }
    return g;
}

double curvature_radius(double g, double g1, double g2, const Metric& m) {
    const double k = m.k1;
    const double gg = k * g, gg1 = k * g1, gg2 = k * g2;
    const double w = 1.0 + gg1 * gg1 / (1.0 + gg * gg);
    return (gg2 + gg) / (k * w * std::sqrt(w));
}

namespace {

struct Profile {
    std::vector<double> g, g1, g2; // internal (k1 = 1) contact radius data
    std::vector<double> radius;    // internal radius of curvature
    std::vector<double> ds_dtheta; // internal length integrand R*j
    std::vector<double> one_minus_j;
};

Profile build_profile(const SupportCurve& curve) {
    Profile p;
    const double k1 = curve.m.k1;
    const auto g_phys = contact_radius(curve);
    p.g.resize(g_phys.size());
    for (size_t j = 0; j < g_phys.size(); ++j) p.g[j] = k1 * g_phys[j];
    const PeriodicDerivs d = periodic_derivatives(p.g, curve.breaks);
    p.g1 = d.d1;
    p.g2 = d.d2;
    const size_t n = p.g.size();
    p.radius.resize(n);
    p.ds_dtheta.resize(n);
    p.one_minus_j.resize(n);
    for (size_t j = 0; j < n; ++j) {
        const double g = p.g[j], g1 = p.g1[j], g2 = p.g2[j];
        const double q = 1.0 + g * g;
        const double w = 1.0 + g1 * g1 / q;
        p.radius[j] = (g2 + g) / (w * std::sqrt(w));
        const double jac = std::sqrt(q + g1 * g1) / q;
        p.ds_dtheta[j] = p.radius[j] * jac;
        p.one_minus_j[j] = 1.0 - jac;
    }
    return p;
}

void check_convex(const Profile& p) {
    for (double r : p.radius) {
        if (r < -1e-6) {
            throw ConvexityError("support curve: reconstructed curvature radius is negative");
        }
    }
}

} // namespace

std::vector<double> curvature_radius_profile(const SupportCurve& curve) {
    Profile p = build_profile(curve);
    for (double& r : p.radius) r /= curve.m.k1;
    return p.radius;
}

double length(const SupportCurve& curve) {
    const Profile p = build_profile(curve);
    check_convex(p);
    return integrate_periodic(p.ds_dtheta, curve.breaks) / curve.m.k1;
}

double area(const SupportCurve& curve) {
    const Profile p = build_profile(curve);
    check_convex(p);
    return integrate_periodic(p.one_minus_j, curve.breaks) / (curve.m.k1 * curve.m.k1);
}

double jump_angle(const Vertex& v, const Metric& m) {
    if (!(v.beta > v.alpha)) throw DomainError("jump_angle: requires alpha < beta");
    if (v.beta - v.alpha >= kPi) throw DomainError("jump_angle: fan wider than pi");
    const double c = std::cos(m.k1 * v.u);
    return atan_tan_continuous(c, v.beta - v.theta) - atan_tan_continuous(c, v.alpha - v.theta);
}

MeasureReport measure(const SupportCurve& curve) {
    const Profile p = build_profile(curve);
    check_convex(p);
    MeasureReport r;
    const double k1 = curve.m.k1;
    r.length = integrate_periodic(p.ds_dtheta, curve.breaks) / k1;
    r.area = integrate_periodic(p.one_minus_j, curve.breaks) / (k1 * k1);

    // Curvature range over samples, skipping the cells right at a curvature
    // jump where finite differences see a mixture of both regimes.
    const int n = curve.samples();
    const double dx = kTwoPi / n;
    std::vector<bool> skip(static_cast<size_t>(n), false);
    for (double b : curve.breaks) {
        const int jb = static_cast<int>(std::round(b / dx));
        for (int o = -1; o <= 1; ++o) skip[static_cast<size_t>(((jb + o) % n + n) % n)] = true;
    }
    double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
    for (int j = 0; j < n; ++j) {
        if (skip[static_cast<size_t>(j)]) continue;
        rmin = std::min(rmin, p.radius[static_cast<size_t>(j)]);
        rmax = std::max(rmax, p.radius[static_cast<size_t>(j)]);
    }
    if (!std::isfinite(rmin)) { // everything skipped; fall back to all samples
        for (double v : p.radius) {
            rmin = std::min(rmin, v);
            rmax = std::max(rmax, v);
        }
    }
    rmin = std::max(rmin, 0.0);
    r.r_min = rmin / k1;
    r.r_max = rmax / k1;
    r.kappa_max = (rmin > 1e-12) ? k1 / rmin : std::numeric_limits<double>::infinity();
    r.kappa_min = (rmax > 1e-12) ? k1 / rmax : std::numeric_limits<double>::infinity();
    return r;
}

bool is_lambda_convex(const SupportCurve& curve, double tol) {
    if (curve.lambda <= 0.0) return true;
    const Profile p = build_profile(curve);
    const double bound = curve.m.k1 / curve.lambda + curve.m.k1 * tol;
    for (double r : p.radius) {
        if (r > bound) return false;
        if (r < -tol) return false;
    }
    return true;
}

} // namespace sphconv
