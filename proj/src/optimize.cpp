#include "sphconv/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "sphconv/errors.hpp"
#include "sphconv/numerics.hpp"
#include "sphconv/shapes.hpp"

namespace sphconv {

namespace {

// Circular interval (start, length); length in (0, 2*pi].
struct CInterval {
    double start = 0.0;
    double len = 0.0;
};

// Intersection of two circular intervals; up to two components.
void intersect_circular(const CInterval& x, const CInterval& y, std::vector<CInterval>& out) {
    const double a = wrap_angle(x.start - y.start);
    for (const double shift : {0.0, -kTwoPi}) {
        const double lo = std::max(a + shift, 0.0);
        const double hi = std::min(a + shift + x.len, y.len);
        if (hi - lo > 1e-13) out.push_back({wrap_angle(y.start + lo), hi - lo});
    }
}

} // namespace

ArcPolygon polygon_from_disc_centers(const std::vector<SpherePoint>& centers, double lambda,
                                     const Metric& m) {
    if (centers.empty()) throw DomainError("disc intersection: no centers");
    if (!m.valid() || !(lambda > 0.0)) {
        throw DomainError("disc intersection: k1 and lambda must be positive");
    }
    const double rho = std::atan2(m.k1, lambda);
    const int n = static_cast<int>(centers.size());
    std::vector<Vec3> c(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = m.k1 * centers[static_cast<size_t>(i)].t;
        if (t >= rho) throw DomainError("disc intersection: origin must lie inside every disc");
        c[static_cast<size_t>(i)] = to_vec({t, centers[static_cast<size_t>(i)].theta});
    }

    const double cr = std::cos(rho), sr = std::sin(rho);
    ArcPolygon poly;
    poly.m = m;
    poly.lambda = lambda;
    struct Contribution {
        Arc arc;
        double order_key = 0.0;
    };
    std::vector<Contribution> contrib;
    for (int i = 0; i < n; ++i) {
        const CenterFrame f(c[static_cast<size_t>(i)]);
        std::vector<CInterval> feasible{{0.0, kTwoPi}};
        bool alive = true;
        for (int j = 0; j < n && alive; ++j) {
            if (j == i) continue;
            const double dotc = f.c.dot(c[static_cast<size_t>(j)]);
            if (1.0 - dotc < 1e-15) continue; // duplicate disc
            const double mA = f.e1.dot(c[static_cast<size_t>(j)]);
            const double mB = f.e2.dot(c[static_cast<size_t>(j)]);
            const double mag = std::hypot(mA, mB);
            const double d = cr * (1.0 - dotc) / sr;
            if (mag < d) { // the whole circle lies outside disc j
                alive = false;
                break;
            }
            const double w = std::acos(std::clamp(d / mag, -1.0, 1.0));
            const CInterval constraint{wrap_angle(std::atan2(mB, mA) - w), 2.0 * w};
            std::vector<CInterval> next;
            for (const CInterval& iv : feasible) intersect_circular(iv, constraint, next);
            feasible.swap(next);
            if (feasible.empty()) alive = false;
        }
        if (!alive) continue;
        if (feasible.size() > 1) {
            // Merge components that wrap around the seam.
            std::sort(feasible.begin(), feasible.end(),
                      [](const CInterval& a, const CInterval& b) { return a.start < b.start; });
            if (feasible.size() == 2 &&
                std::abs(wrap_angle(feasible[1].start + feasible[1].len) - feasible[0].start) < 1e-10) {
                feasible = {{feasible[1].start, feasible[1].len + feasible[0].len}};
            } else {
                throw DomainError("disc intersection: circle contributes multiple arcs");
            }
        }
        const CInterval iv = feasible.front();
        if (iv.len < 1e-12) continue;
        Contribution k;
        k.arc.c = f.c;
        k.arc.r = rho;
        k.arc.start = f.c * cr + (f.e1 * std::cos(iv.start) + f.e2 * std::sin(iv.start)) * sr;
        k.arc.extent = std::min(iv.len, kTwoPi);
        const Vec3 mid = k.arc.point(0.5 * k.arc.extent);
        const Vec3 pole = k.arc.normal_pole_at(mid);
        k.order_key = wrap_angle(std::atan2(pole.y, pole.x));
        contrib.push_back(k);
    }
    if (contrib.empty()) throw DomainError("disc intersection: empty boundary");
    std::sort(contrib.begin(), contrib.end(),
              [](const Contribution& a, const Contribution& b) { return a.order_key < b.order_key; });
    for (const Contribution& k : contrib) poly.arcs.push_back(k.arc);
    poly.validate(1e-8);
    if (poly.length() < 1e-9) throw DomainError("disc intersection: degenerate polygon");
    return poly;
}

ArcPolygon random_lambda_polygon(int n_arcs, std::uint64_t seed, double lambda, const Metric& m,
                                 bool centrally_symmetric) {
    if (n_arcs < 2) throw DomainError("random polygon: need at least two arcs");
    if (centrally_symmetric && n_arcs % 2 != 0) {
        throw DomainError("random polygon: central symmetry needs an even arc count");
    }
    const double rho = std::atan2(m.k1, lambda);
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 0xc0ffee);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<SpherePoint> centers;
        if (centrally_symmetric) {
            const int half = n_arcs / 2;
            for (int i = 0; i < half; ++i) {
                const double theta = (i + 0.2 + 0.6 * rng.uniform()) * kPi / half;
                const double t = rho * rng.uniform(0.25, 0.75) / m.k1;
                centers.push_back({t, wrap_angle(theta)});
                centers.push_back({t, wrap_angle(theta + kPi)});
            }
        } else {
            for (int i = 0; i < n_arcs; ++i) {
                const double theta = (i + 0.2 + 0.6 * rng.uniform()) * kTwoPi / n_arcs;
                const double t = rho * rng.uniform(0.2, 0.7) / m.k1;
                centers.push_back({t, wrap_angle(theta)});
            }
        }
        try {
            ArcPolygon poly = polygon_from_disc_centers(centers, lambda, m);
            if (centrally_symmetric && poly.size() != n_arcs) continue;
            if (!centrally_symmetric) poly = poly.recentered();
            if (poly.max_support() > rho / m.k1 + 1e-9) continue;
            return poly;
        } catch (const Error&) {
            continue;
        }
    }
    throw DomainError("random polygon: generation failed for this seed");
}

namespace {

struct BoundarySample {
    Vec3 p;
    int arc = 0;
    double tau = 0.0;
};

std::vector<BoundarySample> sample_boundary(const ArcPolygon& poly, int approx_total) {
    const double total_extent = [&] {
        double s = 0.0;
        for (const Arc& a : poly.arcs) s += a.extent;
        return s;
    }();
    std::vector<BoundarySample> out;
    for (int i = 0; i < poly.size(); ++i) {
        const Arc& a = poly.arcs[static_cast<size_t>(i)];
        const int k = std::max(8, static_cast<int>(std::round(approx_total * a.extent / total_extent)));
        for (int j = 0; j <= k; ++j) {
            const double tau = a.extent * j / k;
            out.push_back({a.point(tau), i, tau});
        }
    }
    return out;
}

} // namespace

DiameterResult diameter(const ArcPolygon& poly) {
    poly.validate();
    const auto samples = sample_boundary(poly, 2048);
    const int ns = static_cast<int>(samples.size());
    int bi = 0, bj = 0;
    double best = -1.0;
    for (int i = 0; i < ns; ++i) {
        for (int j = i + 1; j < ns; ++j) {
            const double d = sphere_dist(samples[static_cast<size_t>(i)].p, samples[static_cast<size_t>(j)].p);
            if (d > best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    // Alternating golden polish over the two arc parameters.
    int arc_p = samples[static_cast<size_t>(bi)].arc, arc_q = samples[static_cast<size_t>(bj)].arc;
    double tau_p = samples[static_cast<size_t>(bi)].tau, tau_q = samples[static_cast<size_t>(bj)].tau;
    const double win = 2.5 * kTwoPi / 2048;
    for (int round = 0; round < 60; ++round) {
        const Arc& aq = poly.arcs[static_cast<size_t>(arc_q)];
        const Vec3 q = aq.point(tau_q);
        const Arc& ap = poly.arcs[static_cast<size_t>(arc_p)];
        tau_p = golden_max(
            [&](double t) { return sphere_dist(ap.point(t), q); },
            std::max(0.0, tau_p - win), std::min(ap.extent, tau_p + win), 1e-13);
        const Vec3 p = ap.point(tau_p);
        tau_q = golden_max(
            [&](double t) { return sphere_dist(aq.point(t), p); },
            std::max(0.0, tau_q - win), std::min(aq.extent, tau_q + win), 1e-13);
    }
    DiameterResult r;
    r.p = poly.arcs[static_cast<size_t>(arc_p)].point(tau_p);
    r.q = poly.arcs[static_cast<size_t>(arc_q)].point(tau_q);
    r.length = sphere_dist(r.p, r.q) / poly.m.k1;

    // First-variation check: the chord must be orthogonal to a supporting
    // geodesic at both ends (i.e. parallel to an outward normal in the fan).
    auto violation = [&](const Vec3& p, int arc_idx, double tau, const Vec3& other) {
        const Arc& a = poly.arcs[static_cast<size_t>(arc_idx)];
        const Vec3 d = direction(p, other) * -1.0; // outward pointing
        const double eps = 1e-9;
        if (tau > eps && tau < a.extent - eps) {
            const Vec3 nrm = a.tangent_at(p).cross(p);
            return std::atan2(nrm.cross(d).norm(), nrm.dot(d));
        }
        // Vertex: the normal cone spans the fan between the adjacent arcs.
        const int n = poly.size();
        const int prev = (tau <= eps) ? (arc_idx + n - 1) % n : arc_idx;
        const int next = (tau <= eps) ? arc_idx : (arc_idx + 1) % n;
        const Vec3 n_in = poly.arcs[static_cast<size_t>(prev)].tangent_at(p).cross(p);
        const Vec3 n_out = poly.arcs[static_cast<size_t>(next)].tangent_at(p).cross(p);
        const double b1 = std::atan2(n_in.cross(d).dot(p), n_in.dot(d));
        const double b2 = std::atan2(d.cross(n_out).dot(p), d.dot(n_out));
        return std::max(0.0, std::max(-b1, -b2));
    };
    r.orthogonality = std::max(violation(r.p, arc_p, tau_p, r.q), violation(r.q, arc_q, tau_q, r.p));
    return r;
}

namespace {

// Cuts the polygon boundary at boundary points p (on arc ip at tau_p) and q,
// returning the two chains of arcs from p to q and from q to p.
std::pair<std::vector<Arc>, std::vector<Arc>> split_boundary(const ArcPolygon& poly, int ip,
                                                             double tau_p, int iq, double tau_q) {
    const int n = poly.size();
    auto pieces_between = [&](int ia, double ta, int ib, double tb) {
        std::vector<Arc> chain;
        auto push = [&](const Arc& a, double lo, double hi) {
            if (hi - lo > 1e-12) {
                Arc piece = a;
                piece.start = a.point(lo);
                piece.extent = hi - lo;
                chain.push_back(piece);
            }
        };
        if (ia == ib && tb > ta + 1e-15) {
            push(poly.arcs[static_cast<size_t>(ia)], ta, tb);
            return chain;
        }
        push(poly.arcs[static_cast<size_t>(ia)], ta, poly.arcs[static_cast<size_t>(ia)].extent);
        for (int idx = (ia + 1) % n; idx != ib; idx = (idx + 1) % n) {
            push(poly.arcs[static_cast<size_t>(idx)], 0.0, poly.arcs[static_cast<size_t>(idx)].extent);
        }
        push(poly.arcs[static_cast<size_t>(ib)], 0.0, tb);
        return chain;
    };
    return {pieces_between(ip, tau_p, iq, tau_q), pieces_between(iq, tau_q, ip, tau_p)};
}

std::vector<Arc> reflect_chain(const std::vector<Arc>& chain, const Vec3& center) {
    std::vector<Arc> out;
    out.reserve(chain.size());
    for (const Arc& a : chain) {
        Arc b = a;
        b.c = point_reflect(center, a.c);
        b.start = point_reflect(center, a.start);
        out.push_back(b);
    }
    return out;
}

ArcPolygon assemble(const Metric& m, double lambda, const std::vector<std::vector<Arc>>& chains) {
    ArcPolygon poly;
    poly.m = m;
    poly.lambda = lambda;
    for (const auto& ch : chains) {
        for (const Arc& a : ch) poly.arcs.push_back(a);
    }
    return poly;
}

void check_loose_convexity(const ArcPolygon& poly, double turn_tol) {
    const int n = poly.size();
    for (int i = 0; i < n; ++i) {
        const Vec3 e = poly.arcs[static_cast<size_t>(i)].end();
        const Vec3 s = poly.arcs[static_cast<size_t>((i + 1) % n)].start;
        if ((e - s).norm() > 1e-9) throw DomainError("symmetrize: chain does not close");
        if (poly.turning_angle(i) < -turn_tol) {
            throw ConvexityError("symmetrize: reflected curve is not convex");
        }
    }
}

} // namespace

std::pair<ArcPolygon, ArcPolygon> symmetrize(const ArcPolygon& poly) {
    const DiameterResult d = diameter(poly);
    // Locate p and q on the boundary again (arc index + parameter).
    auto locate = [&](const Vec3& x) {
        int best_arc = 0;
        double best_tau = 0.0, best_err = 1e9;
        for (int i = 0; i < poly.size(); ++i) {
            const Arc& a = poly.arcs[static_cast<size_t>(i)];
            const Vec3 rel = x - a.c * x.dot(a.c);
            const Vec3 rel0 = a.start - a.c * a.start.dot(a.c);
            double tau = wrap_angle(std::atan2(rel0.cross(rel).dot(a.c), rel0.dot(rel)));
            if (tau > a.extent) tau = (tau - a.extent < kTwoPi - tau) ? a.extent : 0.0;
            const double err = (a.point(tau) - x).norm();
            if (err < best_err) {
                best_err = err;
                best_arc = i;
                best_tau = tau;
            }
        }
        return std::pair<int, double>(best_arc, best_tau);
    };
    const auto [ip, tau_p] = locate(d.p);
    const auto [iq, tau_q] = locate(d.q);
    const Vec3 mid = slerp(d.p, d.q, 0.5);
    auto [chain_plus, chain_minus] = split_boundary(poly, ip, tau_p, iq, tau_q);

    ArcPolygon g1 = assemble(poly.m, poly.lambda, {chain_plus, reflect_chain(chain_plus, mid)});
    ArcPolygon g2 = assemble(poly.m, poly.lambda, {chain_minus, reflect_chain(chain_minus, mid)});
    check_loose_convexity(g1, 1e-6);
    check_loose_convexity(g2, 1e-6);
    return {g1, g2};
}

namespace {

double spherical_angle(const Vec3& at, const Vec3& towards1, const Vec3& towards2) {
    const Vec3 u = direction(at, towards1);
    const Vec3 v = direction(at, towards2);
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

struct SymmetricLinkage {
    Vec3 a, b, abar, bbar; // quadrilateral vertices in boundary order
    std::vector<Arc> chain_ab, chain_b_abar;
    double side_a = 0.0, side_b = 0.0; // |AB| and |A Bbar|
    double alpha = 0.0, beta = 0.0;    // quadrilateral angles at A and B
};

// Junction indices whose turning angle marks a polygon vertex.
std::vector<int> vertex_junctions(const ArcPolygon& poly, double tol = 1e-10) {
    std::vector<int> out;
    for (int i = 0; i < poly.size(); ++i) {
        if (poly.turning_angle(i) > tol) out.push_back(i);
    }
    return out;
}

} // namespace

DeformResult four_bar_deform(const ArcPolygon& poly, double step) {
    poly.validate();
    if (!(step > 0.0)) throw DomainError("four_bar_deform: step must be positive");
    const auto junct = vertex_junctions(poly);
    const int pairs = static_cast<int>(junct.size()) / 2;
    if (junct.size() % 2 != 0) {
        throw DomainError("four_bar_deform: polygon is not centrally symmetric");
    }
    if (pairs < 2) throw RigidityError("four_bar_deform: a lune admits no linkage deformation");

    // Symmetry center from the (symmetric) vertex set.
    Vec3 zsum{0, 0, 0};
    for (int j : junct) zsum = zsum + poly.arcs[static_cast<size_t>(j)].end();
    const Vec3 z = zsum.normalized();
    const int m = pairs;
    // Vertex i's antipodal partner must be vertex i+m.
    for (int i = 0; i < m; ++i) {
        const Vec3 v = poly.arcs[static_cast<size_t>(junct[static_cast<size_t>(i)])].end();
        const Vec3 w = poly.arcs[static_cast<size_t>(junct[static_cast<size_t>(i + m)])].end();
        if ((point_reflect(z, v) - w).norm() > 1e-7) {
            throw DomainError("four_bar_deform: polygon is not centrally symmetric");
        }
    }

    // Quadrilateral on vertex pairs (0, 1): A, B, Abar, Bbar in boundary order.
    auto linkage_from = [&](int a_idx, int b_idx) {
        SymmetricLinkage l;
        l.a = poly.arcs[static_cast<size_t>(junct[static_cast<size_t>(a_idx)])].end();
        l.b = poly.arcs[static_cast<size_t>(junct[static_cast<size_t>(b_idx)])].end();
        l.abar = poly.arcs[static_cast<size_t>(junct[static_cast<size_t>(a_idx + m)])].end();
        l.bbar = point_reflect(z, l.b);
        const int n = poly.size();
        auto chain = [&](int from_j, int to_j) {
            std::vector<Arc> c;
            for (int i = (from_j + 1) % n; ; i = (i + 1) % n) {
                c.push_back(poly.arcs[static_cast<size_t>(i)]);
                if (i == to_j) break;
            }
            return c;
        };
        l.chain_ab = chain(junct[static_cast<size_t>(a_idx)], junct[static_cast<size_t>(b_idx)]);
        l.chain_b_abar = chain(junct[static_cast<size_t>(b_idx)], junct[static_cast<size_t>(a_idx + m)]);
        l.side_a = sphere_dist(l.a, l.b);
        l.side_b = sphere_dist(l.a, l.bbar);
        l.alpha = spherical_angle(l.a, l.bbar, l.b);
        l.beta = spherical_angle(l.b, l.a, l.abar);
        return l;
    };

    SymmetricLinkage link = linkage_from(0, 1);
    const double alpha0 = triangle_area_argmax(link.side_a, link.side_b);
    bool hinge_at_b = false;
    if (link.alpha < alpha0 - 1e-12) {
        // Lemma dichotomy: then beta >= alpha0 and opening beta shrinks the area.
        hinge_at_b = true;
    }
    if (hinge_at_b) {
        // Shift the quadrilateral roles one step along the cycle so the hinge
        // vertex plays the role of A.
        link = linkage_from(1, m);
    }

    // Rebuild the polygon for a given hinge angle alpha'.
    const Vec3 dir_b = direction(link.a, link.b);
    const Vec3 dir_bbar = direction(link.a, link.bbar);
    const Vec3 bisector = (dir_b + dir_bbar).normalized();
    const Vec3 wing = link.a.cross(bisector).normalized();
    const double sign_b = (dir_b.dot(wing) >= 0.0) ? 1.0 : -1.0;
    auto build = [&](double alpha_new) {
        const double half = 0.5 * alpha_new;
        const Vec3 db = (bisector * std::cos(half) + wing * (sign_b * std::sin(half))).normalized();
        const Vec3 dbb = (bisector * std::cos(half) - wing * (sign_b * std::sin(half))).normalized();
        const Vec3 b_new = link.a * std::cos(link.side_a) + db * std::sin(link.side_a);
        const Vec3 bbar_new = link.a * std::cos(link.side_b) + dbb * std::sin(link.side_b);
        const Vec3 center_new = slerp(b_new, bbar_new, 0.5);
        const Vec3 abar_new = point_reflect(center_new, link.a);

        const Rot3 q1 = Rot3::from_two_points(link.a, link.b, link.a, b_new);
        const Rot3 q2 = Rot3::from_two_points(link.b, link.abar, b_new, abar_new);
        std::vector<Arc> c1, c2;
        for (const Arc& a : link.chain_ab) {
            Arc t = a;
            t.c = q1.apply(a.c).normalized();
            t.start = q1.apply(a.start).normalized();
            c1.push_back(t);
        }
        for (const Arc& a : link.chain_b_abar) {
            Arc t = a;
            t.c = q2.apply(a.c).normalized();
            t.start = q2.apply(a.start).normalized();
            c2.push_back(t);
        }
        const std::vector<Arc> c3 = reflect_chain(c1, center_new);
        const std::vector<Arc> c4 = reflect_chain(c2, center_new);
        ArcPolygon out = assemble(poly.m, poly.lambda, {c1, c2, c3, c4});
        return std::pair<ArcPolygon, Vec3>(out, center_new);
    };

    // Jump angle at the hinge vertex A as the quadrilateral opens.
    auto hinge_jump = [&](double alpha_new) {
        auto [cand, center] = build(alpha_new);
        return cand.turning_angle(cand.size() - 1); // junction closing at A
    };

    const double phi_now = hinge_jump(link.alpha);
    double alpha_target = link.alpha + step;
    bool flattened = false;
    if (hinge_jump(alpha_target) <= 0.0) {
        alpha_target = bisect([&](double a) { return hinge_jump(a); }, link.alpha, alpha_target, 0.0, 1e-14);
        flattened = true;
    }
    (void)phi_now;

    auto [result, center_new] = build(alpha_target);
    if (flattened) {
        // The two arcs meeting at the hinge (and at its antipode) are now
        // tangent with equal curvature: they lie on one circle, so merge them.
        const int n = result.size();
        auto mergeable = [&](int junction) {
            const Arc& a = result.arcs[static_cast<size_t>(junction)];
            const Arc& b = result.arcs[static_cast<size_t>((junction + 1) % n)];
            return (a.c - b.c).norm() < 1e-7 && std::abs(a.r - b.r) < 1e-9 &&
                   std::abs(result.turning_angle(junction)) < 1e-7;
        };
        int start = 0;
        while (start < n && mergeable((start + n - 1) % n)) ++start;
        if (start == n) start = 0; // everything tangent: a full circle
        std::vector<Arc> merged;
        for (int k = 0; k < n; ++k) {
            const int i = (start + k) % n;
            if (!merged.empty() && mergeable((i + n - 1) % n)) {
                merged.back().extent += result.arcs[static_cast<size_t>(i)].extent;
            } else {
                merged.push_back(result.arcs[static_cast<size_t>(i)]);
            }
        }
        result.arcs = merged;
    }
    // Recenter the chart on the new symmetry center.
    const Vec3 target{0, 0, 1};
    if ((center_new - target).norm() > 1e-15) {
        const Vec3 axis = center_new.cross(target);
        if (axis.norm() > 1e-15) {
            result = result.transformed(Rot3::about_axis(axis.normalized(), sphere_dist(center_new, target)));
        }
    }
    result.validate(1e-8);

    DeformResult dr;
    dr.poly = result;
    dr.angle_step_taken = alpha_target - link.alpha;
    dr.vertex_eliminated = flattened;
    return dr;
}

DeformRun deform_to_lune(const ArcPolygon& poly, double step, int max_steps) {
    DeformRun run;
    ArcPolygon cur = poly;
    run.trace.push_back({0, cur.length(), cur.area(),
                         static_cast<int>(vertex_junctions(cur).size()) / 2});
    for (int s = 1; s <= max_steps; ++s) {
        const int pairs = static_cast<int>(vertex_junctions(cur).size()) / 2;
        if (pairs <= 1) {
            run.reached_lune = true;
            break;
        }
        const DeformResult dr = four_bar_deform(cur, step);
        cur = dr.poly;
        run.trace.push_back({s, cur.length(), cur.area(),
                             static_cast<int>(vertex_junctions(cur).size()) / 2});
    }
    run.reached_lune = static_cast<int>(vertex_junctions(cur).size()) / 2 <= 1;
    run.final_poly = cur;
    return run;
}

namespace {

struct SearchState {
    std::vector<double> t;     // center distances (internal radians)
    std::vector<double> theta; // center azimuths
};

struct Evaluation {
    double area = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    bool valid = false;
    ArcPolygon poly;
};

Evaluation evaluate_state(const SearchState& s, double length_target_int, double lambda,
                          const Metric& m, double rho) {
    Evaluation ev;
    auto build = [&](double scale) -> ArcPolygon {
        std::vector<SpherePoint> centers;
        for (size_t i = 0; i < s.t.size(); ++i) {
            centers.push_back({std::clamp(scale * s.t[i], 0.0, rho * 0.999) / m.k1, s.theta[i]});
        }
        return polygon_from_disc_centers(centers, lambda, m);
    };
    auto length_int = [&](double scale) -> double {
        try {
            return m.k1 * build(scale).length();
        } catch (const Error&) {
            return 0.0; // treat degeneracies as vanished length
        }
    };
    double tmax = 1e-12;
    for (double v : s.t) tmax = std::max(tmax, v);
    const double smax = rho * 0.995 / tmax;
    if (length_int(smax) > length_target_int) return ev; // target unreachable
    try {
        const double scale =
            bisect([&](double x) { return length_int(x); }, 0.0, smax, length_target_int, 1e-13);
        ev.poly = build(scale);
        const double len = m.k1 * ev.poly.length();
        if (std::abs(len - length_target_int) > 1e-9) return ev;
        ev.area = ev.poly.area() * m.k1 * m.k1; // internal area
        ev.scale = scale;
        ev.valid = true;
    } catch (const Error&) {
        ev.valid = false;
    }
    return ev;
}

struct StartOutcome {
    double area = std::numeric_limits<double>::infinity();
    bool valid = false;
    ArcPolygon poly;
    int sweeps_used = 0;
};

} // namespace

MinimizeResult minimize_area(int n_arcs, double length_target, std::uint64_t seed, int iterations,
                             double lambda, const Metric& m, int n_starts) {
    if (n_arcs < 2) throw DomainError("minimize_area: need at least two arcs");
    const double rho = std::atan2(m.k1, lambda);
    const double target_int = m.k1 * length_target;
    if (!(target_int > 0.0) || target_int >= kTwoPi * std::sin(rho) - 1e-12) {
        throw DomainError("minimize_area: length outside the admissible lune range");
    }

    auto search_one = [&](int start) -> StartOutcome {
        Rng rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(start) * 0xabcdef12345ULL + 7);
        SearchState s;
        if (start % 8 == 0) {
            // Structured start: two dominant discs, the rest nearly redundant.
            const double th = rng.uniform(0.0, kPi);
            s.t.assign(static_cast<size_t>(n_arcs), 0.03 * rho);
            s.theta.resize(static_cast<size_t>(n_arcs));
            s.t[0] = s.t[1] = rho * rng.uniform(0.3, 0.6);
            s.theta[0] = th;
            s.theta[1] = wrap_angle(th + kPi);
            for (int i = 2; i < n_arcs; ++i) s.theta[static_cast<size_t>(i)] = rng.uniform(0.0, kTwoPi);
        } else {
            for (int i = 0; i < n_arcs; ++i) {
                s.t.push_back(rho * rng.uniform(0.1, 0.6));
                s.theta.push_back(wrap_angle((i + rng.uniform(0.2, 0.8)) * kTwoPi / n_arcs));
            }
        }
        StartOutcome out;
        Evaluation cur = evaluate_state(s, target_int, lambda, m, rho);
        for (int retry = 0; retry < 16 && !cur.valid; ++retry) {
            for (auto& v : s.t) v = rho * rng.uniform(0.1, 0.6);
            cur = evaluate_state(s, target_int, lambda, m, rho);
        }
        if (!cur.valid) return out;

        double step_t = 0.12 * rho, step_th = 0.35;
        for (int sweep = 0; sweep < iterations; ++sweep) {
            bool improved = false;
            for (size_t i = 0; i < s.t.size() * 2; ++i) {
                const bool is_t = i < s.t.size();
                const size_t idx = is_t ? i : i - s.t.size();
                double& coord = is_t ? s.t[idx] : s.theta[idx];
                const double saved = coord;
                const double delta = is_t ? step_t : step_th;
                for (const double dir : {+1.0, -1.0}) {
                    coord = is_t ? std::clamp(saved + dir * delta, 0.01 * rho, 0.9 * rho)
                                 : wrap_angle(saved + dir * delta);
                    const Evaluation cand = evaluate_state(s, target_int, lambda, m, rho);
                    if (cand.valid && cand.area < cur.area - 1e-15) {
                        cur = cand;
                        improved = true;
                        break;
                    }
                    coord = saved;
                }
            }
            out.sweeps_used = sweep + 1;
            if (!improved) {
                step_t *= 0.5;
                step_th *= 0.5;
                if (step_t < 1e-8 && step_th < 1e-8) break;
            }
        }
        out.valid = cur.valid;
        out.area = cur.area;
        out.poly = cur.poly;
        return out;
    };

    // Worker pool over the independent starts; reduction prefers the smallest
    // area with the start index as the deterministic tie-break.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, 8);
    std::vector<StartOutcome> outcomes(static_cast<size_t>(n_starts));
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&] {
            for (int i = next.fetch_add(1); i < n_starts; i = next.fetch_add(1)) {
                outcomes[static_cast<size_t>(i)] = search_one(i);
            }
        }));
    }
    for (auto& f : futures) f.get();

    int best = -1;
    for (int i = 0; i < n_starts; ++i) {
        if (!outcomes[static_cast<size_t>(i)].valid) continue;
        if (best < 0 || outcomes[static_cast<size_t>(i)].area < outcomes[static_cast<size_t>(best)].area - 1e-15) {
            best = i;
        }
    }
    if (best < 0) throw DomainError("minimize_area: no feasible polygon found");

    MinimizeResult res;
    res.best = outcomes[static_cast<size_t>(best)].poly;
    res.report.length_target = length_target;
    res.report.n_arcs = n_arcs;
    res.report.seed = seed;
    res.report.iterations = iterations;
    res.report.best_area = res.best.area();
    res.report.best_deficit = res.best.area() - lune_area(length_target, lambda, m);
    int active_arcs = 0;
    for (const Arc& a : res.best.arcs) {
        if (a.extent > 1e-6) ++active_arcs;
    }
    res.report.converged_to_lune = active_arcs <= 2 || res.report.best_deficit < 1e-6;
    return res;
}

} // namespace sphconv
