#pragma once

#include <array>
#include <cmath>

namespace sphconv {

// Minimal 3-vector for points on the unit sphere and rotation axes.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Robust geodesic distance on the unit sphere.
inline double sphere_dist(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

// Rodrigues rotation of v by angle about a unit axis.
inline Vec3 rotate(const Vec3& axis, double angle, const Vec3& v) {
    const double c = std::cos(angle), s = std::sin(angle);
    return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}

// Point reflection through p (rotation by pi about the axis through p).
inline Vec3 point_reflect(const Vec3& p, const Vec3& v) {
    return p * (2.0 * p.dot(v)) - v;
}

// Point at parameter f along the geodesic from a to b (f=0.5 is the midpoint).
inline Vec3 slerp(const Vec3& a, const Vec3& b, double f) {
    const double d = sphere_dist(a, b);
    if (d < 1e-15) return a;
    const double s = std::sin(d);
    return (a * (std::sin((1.0 - f) * d) / s) + b * (std::sin(f * d) / s)).normalized();
}

// Unit tangent at a pointing towards b; undefined for coincident/antipodal pairs.
inline Vec3 direction(const Vec3& a, const Vec3& b) {
    return (b - a * a.dot(b)).normalized();
}

// 3x3 rotation as column-major array of basis images; used for rigid transport.
struct Rot3 {
    std::array<Vec3, 3> col; // images of e_x, e_y, e_z

    Vec3 apply(const Vec3& v) const {
        return col[0] * v.x + col[1] * v.y + col[2] * v.z;
    }

    static Rot3 identity() {
        return {{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}};
    }

    static Rot3 about_axis(const Vec3& axis, double angle) {
        return {{rotate(axis, angle, {1, 0, 0}), rotate(axis, angle, {0, 1, 0}),
                 rotate(axis, angle, {0, 0, 1})}};
    }

    // Unique proper rotation with a -> a2, b -> b2 (requires dist(a,b) == dist(a2,b2)).
    static Rot3 from_two_points(const Vec3& a, const Vec3& b, const Vec3& a2, const Vec3& b2) {
        const Rot3 f1 = frame(a, b), f2 = frame(a2, b2);
        // f2 * f1^T
        Rot3 r;
        for (int i = 0; i < 3; ++i) {
            const Vec3 e = (i == 0) ? Vec3{1, 0, 0} : (i == 1) ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
            const Vec3 ft = {f1.col[0].dot(e) * 1.0, f1.col[1].dot(e), f1.col[2].dot(e)};
            // ft holds row i of f1, i.e. column i of f1^T
            r.col[i] = f2.apply(Vec3{ft.x, ft.y, ft.z});
        }
        return r;
    }

  private:
    static Rot3 frame(const Vec3& a, const Vec3& b) {
        const Vec3 u = a.normalized();
        const Vec3 w = u.cross(b).normalized();
        const Vec3 v = w.cross(u);
        return {{u, v, w}};
    }
};

} // namespace sphconv
