#include "sphconv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sphconv {

double golden_max(const std::function<double(double)>& f, double a, double b, double tol,
                  int max_iter) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double target,
              double xtol, int max_iter) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::runtime_error("bisect: target not bracketed");
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid) - target;
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

// Value of the interpolating polynomial through (xs[i], ys[i]) at x (Neville).
double poly_eval(const double* xs, const double* ys, int n, double x) {
    double w[8];
    std::copy(ys, ys + n, w);
    for (int level = 1; level < n; ++level) {
        for (int i = 0; i + level < n; ++i) {
            w[i] = ((x - xs[i + level]) * w[i] + (xs[i] - x) * w[i + 1]) / (xs[i] - xs[i + level]);
        }
    }
    return w[0];
}

// Integral over [a, b] of the cubic through 4 consecutive knots.
double cubic_cell_integral(const double* xs, const double* ys, double a, double b) {
    // Two-point Gauss-Legendre on the cubic interpolant is exact.
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double g = half / std::sqrt(3.0);
    return (b - a) * 0.5 *
           (poly_eval(xs, ys, 4, mid - g) + poly_eval(xs, ys, 4, mid + g)) *
           1.0;
}

} // namespace

double integrate_periodic(const std::vector<double>& f, const std::vector<double>& breaks) {
    const int n = static_cast<int>(f.size());
    const double dx = kTwoPi / n;
    if (breaks.empty()) {
        double s = 0.0;
        for (double v : f) s += v;
        return s * dx;
    }

    // Piecewise path: the samples between consecutive breaks belong to one
    // smooth piece; integrate each piece by local cubics on its own samples,
    // extrapolating to the off-grid piece endpoints.
    auto sample = [&](int j) { return f[((j % n) + n) % n]; };
    double total = 0.0;
    const int nb = static_cast<int>(breaks.size());
    for (int bi = 0; bi < nb; ++bi) {
        const double lo = breaks[bi];
        const double hi = (bi + 1 < nb) ? breaks[bi + 1] : breaks[0] + kTwoPi;
        if (hi - lo < 1e-13) continue;
        // Uniform sample indices strictly inside [lo, hi].
        int j0 = static_cast<int>(std::ceil(lo / dx - 1e-12));
        if (j0 * dx < lo - 1e-12) ++j0;
        int j1 = static_cast<int>(std::floor(hi / dx + 1e-12));
        if (j1 * dx > hi + 1e-12) --j1;
        const int cnt = j1 - j0 + 1;
        if (cnt < 2) {
            // Piece narrower than the grid: trapezoid on whatever we have.
            const double fa = (cnt >= 1) ? sample(j0) : 0.0;
            total += (hi - lo) * fa;
            continue;
        }
        // Knot array: [lo, j0*dx, ..., j1*dx, hi] with extrapolated end values.
        const int m = std::min(cnt, 5);
        double xs0[8], ys0[8], xs1[8], ys1[8];
        for (int k = 0; k < m; ++k) {
            xs0[k] = (j0 + k) * dx;
            ys0[k] = sample(j0 + k);
            xs1[k] = (j1 - (m - 1) + k) * dx;
            ys1[k] = sample(j1 - (m - 1) + k);
        }
        // End strips by extrapolated interpolating polynomial.
        if (lo < xs0[0] - 1e-14) {
            const double gm = 0.5 * (lo + xs0[0]), gh = 0.5 * (xs0[0] - lo) / std::sqrt(3.0);
            total += (xs0[0] - lo) * 0.5 *
                     (poly_eval(xs0, ys0, m, gm - gh) + poly_eval(xs0, ys0, m, gm + gh));
        }
        if (hi > xs1[m - 1] + 1e-14) {
            const double gm = 0.5 * (xs1[m - 1] + hi), gh = 0.5 * (hi - xs1[m - 1]) / std::sqrt(3.0);
            total += (hi - xs1[m - 1]) * 0.5 *
                     (poly_eval(xs1, ys1, m, gm - gh) + poly_eval(xs1, ys1, m, gm + gh));
        }
        // Interior cells with local cubics (shifted stencil at the ends).
        for (int j = j0; j < j1; ++j) {
            int s = j - 1;
            if (s < j0) s = j0;
            if (s + 3 > j1) s = j1 - 3;
            if (s < j0) { // fewer than 4 samples in the piece
                total += 0.5 * dx * (sample(j) + sample(j + 1));
                continue;
            }
            double xs[4], ys[4];
            for (int k = 0; k < 4; ++k) {
                xs[k] = (s + k) * dx;
                ys[k] = sample(s + k);
            }
            total += cubic_cell_integral(xs, ys, j * dx, (j + 1) * dx);
        }
    }
    return total;
}

namespace {

// Five-point finite-difference derivatives at offset `at` within a window of
// samples with spacing dx; at = 2 is the centered stencil.
void stencil5(const double* y, double dx, int at, double& d1, double& d2) {
    static const double c1[5][5] = {
        {-25. / 12, 4., -3., 4. / 3, -1. / 4},
        {-1. / 4, -5. / 6, 3. / 2, -1. / 2, 1. / 12},
        {1. / 12, -2. / 3, 0., 2. / 3, -1. / 12},
        {-1. / 12, 1. / 2, -3. / 2, 5. / 6, 1. / 4},
        {1. / 4, -4. / 3, 3., -4., 25. / 12},
    };
    static const double c2[5][5] = {
        {35. / 12, -26. / 3, 19. / 2, -14. / 3, 11. / 12},
        {11. / 12, -5. / 3, 1. / 2, 1. / 3, -1. / 12},
        {-1. / 12, 4. / 3, -5. / 2, 4. / 3, -1. / 12},
        {-1. / 12, 1. / 3, 1. / 2, -5. / 3, 11. / 12},
        {11. / 12, -14. / 3, 19. / 2, -26. / 3, 35. / 12},
    };
    double s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < 5; ++k) {
        s1 += c1[at][k] * y[k];
        s2 += c2[at][k] * y[k];
    }
    d1 = s1 / dx;
    d2 = s2 / (dx * dx);
}

} // namespace

PeriodicDerivs periodic_derivatives(const std::vector<double>& f, const std::vector<double>& breaks_in) {
    const int n = static_cast<int>(f.size());
    const double dx = kTwoPi / n;
    PeriodicDerivs out;
    out.d1.resize(n);
    out.d2.resize(n);
    auto sample = [&](int j) { return f[((j % n) + n) % n]; };

    std::vector<double> breaks = breaks_in;
    if (breaks.empty()) {
        // Detect kink cells from third differences well above the noise floor.
        std::vector<double> d3(n);
        double med = 0.0;
        for (int j = 0; j < n; ++j) {
            d3[j] = std::abs(sample(j + 2) - 3 * sample(j + 1) + 3 * sample(j) - sample(j - 1));
            med += d3[j];
        }
        med /= n;
        const double thresh = std::max(50.0 * med, 1e-7);
        for (int j = 0; j < n; ++j) {
            if (d3[j] > thresh) breaks.push_back(wrap_angle((j + 0.5) * dx));
        }
        std::sort(breaks.begin(), breaks.end());
    }

    if (breaks.empty()) {
        for (int j = 0; j < n; ++j) {
            double y[5];
            for (int k = 0; k < 5; ++k) y[k] = sample(j - 2 + k);
            stencil5(y, dx, 2, out.d1[j], out.d2[j]);
        }
        return out;
    }

    // Distance (in samples) from j to the nearest break on each side decides
    // the stencil shift, so no stencil straddles a kink.
    auto piece_of = [&](double theta) {
        // index of the break at or before theta (cyclically)
        int lo = 0, hi = static_cast<int>(breaks.size());
        theta = wrap_angle(theta);
        if (theta < breaks.front()) return static_cast<int>(breaks.size()) - 1;
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            if (breaks[static_cast<size_t>(mid)] <= theta) lo = mid;
            else hi = mid;
        }
        return lo;
    };
    const int nb = static_cast<int>(breaks.size());
    for (int j = 0; j < n; ++j) {
        const double theta = j * dx;
        const int pc = piece_of(theta);
        const double lo = breaks[pc];
        double hi = breaks[(pc + 1) % nb];
        if (hi <= lo) hi += kTwoPi;
        double th = theta;
        if (th < lo) th += kTwoPi;
        // Samples available on each side within the piece.
        const int left = static_cast<int>(std::floor((th - lo) / dx + 1e-12));
        const int right = static_cast<int>(std::floor((hi - th) / dx + 1e-12));
        int at = 2;
        if (left < 2) at = left;
        else if (right < 2) at = 4 - right;
        int s = j - at;
        double y[5];
        for (int k = 0; k < 5; ++k) y[k] = sample(s + k);
        if (left + right < 4) {
            // Piece too short for the 5-point stencil: fall back to 3 points
            // clamped inside the piece.
            int a3 = 1;
            if (left < 1) a3 = 0;
            else if (right < 1) a3 = 2;
            const int s3 = j - a3;
            const double y0 = sample(s3), y1 = sample(s3 + 1), y2 = sample(s3 + 2);
            out.d2[j] = (y2 - 2 * y1 + y0) / (dx * dx);
            if (a3 == 0) out.d1[j] = (-3 * y0 + 4 * y1 - y2) / (2 * dx);
            else if (a3 == 2) out.d1[j] = (3 * y2 - 4 * y1 + y0) / (2 * dx);
            else out.d1[j] = (y2 - y0) / (2 * dx);
            continue;
        }
        stencil5(y, dx, at, out.d1[j], out.d2[j]);
    }
    return out;
}

double PeriodicCubic::operator()(double theta) const {
    const auto& f = *f_;
    const int n = static_cast<int>(f.size());
    const double dx = kTwoPi / n;
    const double pos = wrap_angle(theta) / dx;
    const int j = static_cast<int>(std::floor(pos));
    const double t = pos - j;
    auto s = [&](int k) { return f[((k % n) + n) % n]; };
    const double ym1 = s(j - 1), y0 = s(j), y1 = s(j + 1), y2 = s(j + 2);
    // Catmull-Rom
    const double a0 = -0.5 * ym1 + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
    const double a1 = ym1 - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
    const double a2 = -0.5 * ym1 + 0.5 * y1;
    return ((a0 * t + a1) * t + a2) * t + y0;
}

} // namespace sphconv
