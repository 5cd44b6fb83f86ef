#include "sphconv/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"
#include "sphconv/shapes.hpp"

namespace sphconv {

namespace {

constexpr int kStepsPerPeriod = 1 << 16;
constexpr double kBaseStep = kTwoPi / kStepsPerPeriod;

double phi_of(double x1, double x2) { return (1.0 + x1 * x1 + x2 * x2) / (1.0 + x1 * x1); }
double psi_of(double x1, double x2) {
    return std::sqrt(1.0 + x1 * x1 + x2 * x2) / (1.0 + x1 * x1);
}

} // namespace

double ControlSchedule::value_at(double t) const {
    validate();
    t = wrap_angle(t);
    size_t i = times.size();
    while (i > 0 && times[i - 1] > t + 1e-15) --i;
    if (i == 0) i = 1;
    return values[i - 1];
}

void ControlSchedule::validate() const {
    if (times.empty() || times.size() != values.size()) {
        throw DomainError("control schedule: times/values mismatch");
    }
    if (std::abs(times.front()) > 1e-15) {
        throw DomainError("control schedule: must start at t = 0");
    }
    for (size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) throw DomainError("control schedule: times must increase");
    }
    if (times.back() >= kTwoPi) throw DomainError("control schedule: times must stay below 2*pi");
}

std::pair<double, double> dynamics(const ControlState& s) {
    const double f = phi_of(s.x1, s.x2);
    return {s.x2, s.u * f * std::sqrt(f) - s.x1};
}

HamiltonianParts pontryagin_H(const ControlState& s, const AdjointState& a) {
    const double f = phi_of(s.x1, s.x2);
    const double psi = psi_of(s.x1, s.x2);
    HamiltonianParts out;
    out.h1 = a.lambda1 * psi + a.p2 * f * std::sqrt(f);
    const double h2 = a.p1 * s.x2 - a.p2 * s.x1 - a.lambda0 * (1.0 - psi);
    out.h = s.u * out.h1 + h2;
    return out;
}

std::pair<double, double> adjoint_rhs(const ControlState& s, const AdjointState& a) {
    const double x1 = s.x1, x2 = s.x2, u = s.u;
    const double q = 1.0 + x1 * x1;
    const double w = 1.0 + x1 * x1 + x2 * x2;
    const double sw = std::sqrt(w);
    const double mult = a.lambda0 + a.lambda1 * u;
    const double dp1 = a.p2 * (1.0 + 3.0 * u * x1 * x2 * x2 * sw / (q * q * std::sqrt(q))) +
                       x1 * mult * (1.0 + x1 * x1 + 2.0 * x2 * x2) / (q * q * sw);
    const double dp2 =
        -a.p1 - a.p2 * 3.0 * u * x2 * sw / (q * std::sqrt(q)) - x2 * mult / (q * sw);
    return {dp1, dp2};
}

double bang_bang_control(double h1_value, double lambda1) {
    if (h1_value > 0.0) return 1.0;
    if (h1_value < 0.0) return 0.0;
    return lambda1;
}

std::pair<double, double> singular_adjoint(double x1, double x2, double lambda1, double lambda0) {
    const double q = 1.0 + x1 * x1;
    const double w = 1.0 + x1 * x1 + x2 * x2;
    const double p2 = -lambda1 * std::sqrt(q) / w;
    const double p1 = x2 * (lambda1 * x1 * std::sqrt(q) - lambda0 * std::sqrt(w)) / (q * w);
    return {p1, p2};
}

double legendre_clebsch_value(double x1, double x2) {
    const double q = 1.0 + x1 * x1;
    const double w = 1.0 + x1 * x1 + x2 * x2;
    return w * std::sqrt(w) / (q * q * q);
}

namespace {

// One RK4 step of the controlled system plus the objective/constraint
// quadratures; y = (x1, x2, J0, J1).
void rk4_state_step(std::array<double, 4>& y, double u, double h) {
    auto rhs = [&](const std::array<double, 4>& v) {
        ControlState s{0.0, v[0], v[1], u};
        const auto [d1, d2] = dynamics(s);
        const double psi = psi_of(v[0], v[1]);
        return std::array<double, 4>{d1, d2, 1.0 - psi, u * psi};
    };
    const auto k1 = rhs(y);
    std::array<double, 4> t;
    for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * h * k1[i];
    const auto k2 = rhs(t);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * h * k2[i];
    const auto k3 = rhs(t);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * k3[i];
    const auto k4 = rhs(t);
    for (int i = 0; i < 4; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

} // namespace

ControlTrajectory integrate_trajectory(const ControlSchedule& schedule, double x1_0, double x2_0,
                                       double length_target) {
    schedule.validate();
    for (double v : schedule.values) {
        if (v < -1e-12 || v > 1.0 + 1e-12) {
            throw DomainError("integrate_trajectory: control values must lie in [0, 1]");
        }
    }
    ControlTrajectory traj;
    traj.schedule = schedule;
    traj.length_target = length_target;

    std::array<double, 4> y{x1_0, x2_0, 0.0, 0.0};
    const size_t nseg = schedule.times.size();
    traj.t.reserve(kStepsPerPeriod + 8);
    auto record = [&](double t, double u) {
        traj.t.push_back(t);
        traj.x1.push_back(y[0]);
        traj.x2.push_back(y[1]);
        traj.u.push_back(u);
    };
    record(0.0, schedule.values[0]);
    for (size_t seg = 0; seg < nseg; ++seg) {
        const double ta = schedule.times[seg];
        const double tb = (seg + 1 < nseg) ? schedule.times[seg + 1] : kTwoPi;
        const double u = schedule.values[seg];
        const int steps = std::max(1, static_cast<int>(std::ceil((tb - ta) / kBaseStep)));
        const double h = (tb - ta) / steps;
        for (int i = 0; i < steps; ++i) {
            rk4_state_step(y, u, h);
            if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || std::abs(y[0]) > 3.0 ||
                std::abs(y[1]) > 6.0) {
                throw BlowUpError("integrate_trajectory: state left the admissible box");
            }
            const double t_now = ta + (i + 1) * h;
            record(t_now, (i + 1 == steps && seg + 1 < nseg) ? schedule.values[seg + 1] : u);
        }
    }
    traj.objective = y[2];
    traj.constraint_integral = y[3];
    traj.periodicity_residual = std::hypot(y[0] - x1_0, y[1] - x2_0);
    return traj;
}

namespace {

// Joint RK4 over (x1, x2) and the four adjoint basis solutions
// (lambda0, lambda1, p(0)) in {(0,0,e1), (0,0,e2), (1,0,0), (0,1,0)}.
struct AdjointBasis {
    std::vector<std::array<double, 8>> p; // per grid node: (p1,p2) x 4 runs
};

AdjointBasis integrate_adjoint_basis(const ControlTrajectory& traj) {
    AdjointBasis out;
    const size_t n = traj.t.size();
    out.p.resize(n);
    std::array<double, 2> x{traj.x1[0], traj.x2[0]};
    std::array<double, 8> p{1, 0, 0, 1, 0, 0, 0, 0};
    out.p[0] = p;
    const double l0s[4] = {0, 0, 1, 0};
    const double l1s[4] = {0, 0, 0, 1};
    for (size_t i = 0; i + 1 < n; ++i) {
        const double h = traj.t[i + 1] - traj.t[i];
        if (h <= 0.0) {
            out.p[i + 1] = p;
            continue;
        }
        const double u = traj.u[i + 1]; // control on (t_i, t_{i+1})
        auto rhs = [&](const std::array<double, 2>& xv, const std::array<double, 8>& pv,
                       std::array<double, 2>& dx, std::array<double, 8>& dp) {
            ControlState s{0.0, xv[0], xv[1], u};
            const auto [d1, d2] = dynamics(s);
            dx = {d1, d2};
            for (int r = 0; r < 4; ++r) {
                AdjointState a{pv[2 * r], pv[2 * r + 1], l0s[r], l1s[r]};
                const auto [q1, q2] = adjoint_rhs(s, a);
                dp[2 * r] = q1;
                dp[2 * r + 1] = q2;
            }
        };
        std::array<double, 2> kx[4], tx;
        std::array<double, 8> kp[4], tp;
        rhs(x, p, kx[0], kp[0]);
        for (int j = 0; j < 2; ++j) tx[j] = x[j] + 0.5 * h * kx[0][j];
        for (int j = 0; j < 8; ++j) tp[j] = p[j] + 0.5 * h * kp[0][j];
        rhs(tx, tp, kx[1], kp[1]);
        for (int j = 0; j < 2; ++j) tx[j] = x[j] + 0.5 * h * kx[1][j];
        for (int j = 0; j < 8; ++j) tp[j] = p[j] + 0.5 * h * kp[1][j];
        rhs(tx, tp, kx[2], kp[2]);
        for (int j = 0; j < 2; ++j) tx[j] = x[j] + h * kx[2][j];
        for (int j = 0; j < 8; ++j) tp[j] = p[j] + h * kp[2][j];
        rhs(tx, tp, kx[3], kp[3]);
        for (int j = 0; j < 2; ++j) {
            x[j] += h / 6.0 * (kx[0][j] + 2 * kx[1][j] + 2 * kx[2][j] + kx[3][j]);
        }
        for (int j = 0; j < 8; ++j) {
            p[j] += h / 6.0 * (kp[0][j] + 2 * kp[1][j] + 2 * kp[2][j] + kp[3][j]);
        }
        out.p[i + 1] = p;
    }
    return out;
}

size_t node_at_time(const ControlTrajectory& traj, double t) {
    const auto it = std::lower_bound(traj.t.begin(), traj.t.end(), t - 1e-12);
    return static_cast<size_t>(std::min<std::ptrdiff_t>(
        std::distance(traj.t.begin(), it), static_cast<std::ptrdiff_t>(traj.t.size()) - 1));
}

} // namespace

PmpReport verify_pmp(ControlTrajectory& traj) {
    if (traj.t.size() < 8) throw InfeasibleError("verify_pmp: trajectory too short");
    const AdjointBasis basis = integrate_adjoint_basis(traj);
    const size_t n = traj.t.size();

    // H1 at node i for unknown z = (p1(0), p2(0), lambda1):
    //   H1_i(z) = z . row_i + 0 with row from the basis decomposition.
    auto h1_row = [&](size_t i, std::array<double, 3>& row, double& rhs0) {
        const double x1 = traj.x1[i], x2 = traj.x2[i];
        const double f = phi_of(x1, x2);
        const double f32 = f * std::sqrt(f);
        const double psi = psi_of(x1, x2);
        const auto& p = basis.p[i];
        row = {p[1] * f32, p[3] * f32, psi + p[7] * f32};
        rhs0 = p[5] * f32; // lambda0 = 1 contribution
    };

    // Residual rows: H1 at interior switch points, periodicity of p.
    std::vector<std::array<double, 3>> rows;
    std::vector<double> rhs;
    std::vector<size_t> switch_nodes;
    for (size_t s = 1; s < traj.schedule.times.size(); ++s) {
        switch_nodes.push_back(node_at_time(traj, traj.schedule.times[s]));
    }
    for (size_t node : switch_nodes) {
        std::array<double, 3> row;
        double r0;
        h1_row(node, row, r0);
        rows.push_back(row);
        rhs.push_back(-r0);
    }
    {
        const auto& pe = basis.p.back();
        rows.push_back({pe[0] - 1.0, pe[2], pe[6]});
        rhs.push_back(-pe[4]);
        rows.push_back({pe[1], pe[3] - 1.0, pe[7]});
        rhs.push_back(-pe[5]);
    }

    // Normal equations for the 3-parameter linear least squares fit.
    double ata[3][3] = {};
    double atb[3] = {};
    for (size_t r = 0; r < rows.size(); ++r) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata[i][j] += rows[r][static_cast<size_t>(i)] * rows[r][static_cast<size_t>(j)];
            atb[i] += rows[r][static_cast<size_t>(i)] * rhs[r];
        }
    }
    // Gaussian elimination with partial pivoting (3x3).
    double a[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a[i][j] = ata[i][j];
        a[i][3] = atb[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        if (std::abs(a[col][col]) < 1e-14) throw InfeasibleError("verify_pmp: singular adjoint fit");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
        }
    }
    const std::array<double, 3> z = {a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};

    PmpReport report;
    report.p1_0 = z[0];
    report.p2_0 = z[1];
    report.lambda1 = z[2];

    double res2 = 0.0;
    for (size_t r = 0; r < rows.size(); ++r) {
        const double v = rows[r][0] * z[0] + rows[r][1] * z[1] + rows[r][2] * z[2] - rhs[r];
        res2 += v * v;
    }
    report.fit_residual = std::sqrt(res2);
    report.feasible = report.fit_residual < 1e-5;

    // Reconstruct p(t) and H1(t); check H constancy and the sign pattern.
    traj.p1.resize(n);
    traj.p2.resize(n);
    traj.h1.resize(n);
    double hmin = 0.0, hmax = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const auto& pb = basis.p[i];
        traj.p1[i] = z[0] * pb[0] + z[1] * pb[2] + pb[4] + z[2] * pb[6];
        traj.p2[i] = z[0] * pb[1] + z[1] * pb[3] + pb[5] + z[2] * pb[7];
        const ControlState s{traj.t[i], traj.x1[i], traj.x2[i], traj.u[i]};
        const AdjointState ad{traj.p1[i], traj.p2[i], 1.0, z[2]};
        const HamiltonianParts hp = pontryagin_H(s, ad);
        traj.h1[i] = hp.h1;
        if (i == 0) hmin = hmax = hp.h;
        hmin = std::min(hmin, hp.h);
        hmax = std::max(hmax, hp.h);
    }
    report.hamiltonian_drift = hmax - hmin;

    for (size_t node : switch_nodes) {
        report.h1_at_switches.push_back(traj.h1[node]);
        report.max_h1_at_switches =
            std::max(report.max_h1_at_switches, std::abs(traj.h1[node]));
    }

    bool signs_ok = true;
    const size_t nseg = traj.schedule.times.size();
    for (size_t seg = 0; seg < nseg; ++seg) {
        const double ta = traj.schedule.times[seg];
        const double tb = (seg + 1 < nseg) ? traj.schedule.times[seg + 1] : kTwoPi;
        const double mid_lo = ta + 0.2 * (tb - ta), mid_hi = ta + 0.8 * (tb - ta);
        const double u = traj.schedule.values[seg];
        for (size_t i = node_at_time(traj, mid_lo); i <= node_at_time(traj, mid_hi); ++i) {
            if (u > 0.5 && traj.h1[i] < -1e-7) signs_ok = false;
            if (u < 0.5 && traj.h1[i] > 1e-7) signs_ok = false;
        }
    }
    report.consistent = signs_ok && report.feasible && report.max_h1_at_switches < 1e-6;
    return report;
}

LuneProblem lune_control_problem(double length) {
    const Metric unit{1.0};
    LuneSpec spec{unit, 1.0, length};
    const ArcPolygon lune = make_lune(spec);
    LuneProblem problem;
    const auto verts = lune.vertices();
    if (verts.empty()) {
        problem.schedule.times = {0.0};
        problem.schedule.values = {1.0};
    } else {
        // u = 0 on the vertex fans, u = 1 on the arcs between them.
        std::vector<std::pair<double, double>> fans;
        for (const Vertex& v : verts) {
            const double a = wrap_angle(v.alpha);
            fans.emplace_back(a, a + (v.beta - v.alpha));
        }
        std::sort(fans.begin(), fans.end());
        problem.schedule.times.push_back(0.0);
        problem.schedule.values.push_back(1.0);
        for (const auto& [a, b] : fans) {
            problem.schedule.times.push_back(a);
            problem.schedule.values.push_back(0.0);
            problem.schedule.times.push_back(std::min(b, kTwoPi - 1e-12));
            problem.schedule.values.push_back(1.0);
        }
    }
    problem.x1_0 = std::tan(lune.support(0.0));
    problem.x2_0 = 0.0;
    return problem;
}

} // namespace sphconv
