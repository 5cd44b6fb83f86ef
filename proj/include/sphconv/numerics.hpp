#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace sphconv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

// Wrap into (-pi, pi].
inline double wrap_signed(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    if (a > kPi) a -= kTwoPi;
    return a;
}

// Continuous branch of x |-> arctan(c * tan(x)): equals the principal value on
// (-pi/2, pi/2) and is extended so the result is increasing and continuous
// through the tan poles (adds pi per crossing). Requires c >= 0.
inline double atan_tan_continuous(double c, double x) {
    const double k = std::round(x / kPi);
    const double r = x - k * kPi; // in [-pi/2, pi/2]
    double v;
    if (std::abs(std::abs(r) - kPi / 2) < 1e-14) {
        v = (r > 0 ? 1.0 : -1.0) * kPi / 2;
    } else {
        v = std::atan(c * std::tan(r));
    }
    return v + k * kPi;
}

// Golden-section search for the maximum of f on [a, b]; returns argmax.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-12, int max_iter = 200);

// Bisection for f(x) = target with f monotone between the bracket endpoints.
double bisect(const std::function<double(double)>& f, double lo, double hi, double target,
              double xtol = 1e-13, int max_iter = 200);

// Deterministic uniform doubles in [0, 1) from a splitmix64 stream; used so
// seeded runs are identical across platforms and standard library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return std::ldexp(static_cast<double>(next_u64() >> 11), -53); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    std::uint64_t state_;
};

// Periodic samples f_j = f(2*pi*j/N) integrated over one period.  When
// `breaks` (sorted knot angles in [0, 2*pi)) are supplied the integrand is
// treated as piecewise smooth: each smooth piece is integrated by local cubic
// interpolation through the uniform samples, with polynomial extrapolation to
// the off-grid piece endpoints.  Without breaks this reduces to the plain
// periodic trapezoid rule (exact to spectral accuracy for smooth data).
double integrate_periodic(const std::vector<double>& f, const std::vector<double>& breaks);

// First and second derivative of periodic samples by finite differences.
// Centered 5-point stencils inside smooth pieces, one-sided stencils next to
// the supplied break angles so kinks do not contaminate neighbours.  With an
// empty break list, kink cells are auto-detected from third differences.
struct PeriodicDerivs {
    std::vector<double> d1;
    std::vector<double> d2;
};
PeriodicDerivs periodic_derivatives(const std::vector<double>& f, const std::vector<double>& breaks);

// C^1 periodic Catmull-Rom interpolation of uniform samples over [0, 2*pi).
class PeriodicCubic {
  public:
    explicit PeriodicCubic(const std::vector<double>* samples) : f_(samples) {}
    double operator()(double theta) const;

  private:
    const std::vector<double>* f_;
};

} // namespace sphconv
