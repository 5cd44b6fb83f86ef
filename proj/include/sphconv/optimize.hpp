#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sphconv/curve.hpp"

namespace sphconv {

// Lambda-convex polygon as the intersection of equal discs of geodesic radius
// arccot(lambda/k1)/k1 around the given centers; discs that do not contribute
// an arc are dropped.  Throws DomainError if the intersection degenerates.
ArcPolygon polygon_from_disc_centers(const std::vector<SpherePoint>& centers, double lambda,
                                     const Metric& m);

// Seeded random lambda-convex polygon with at most n_arcs arcs, recentered to
// its minimal enclosing disc.  centrally_symmetric forces arcs in antipodal
// center pairs (n_arcs must then be even).
ArcPolygon random_lambda_polygon(int n_arcs, std::uint64_t seed, double lambda, const Metric& m,
                                 bool centrally_symmetric = false);

struct DiameterResult {
    Vec3 p, q;
    double length = 0.0;       // k1-rescaled geodesic distance
    double orthogonality = 0.0; // max |cos| between PQ and the support normals
};

// Longest geodesic chord of the polygon (dense pairwise search + local polish).
DiameterResult diameter(const ArcPolygon& poly);

// Reflects each diameter-split half through the diameter midpoint, producing
// two centrally symmetric polygons with A(poly) = (A(g1)+A(g2))/2.
std::pair<ArcPolygon, ArcPolygon> symmetrize(const ArcPolygon& poly);

struct DeformResult {
    ArcPolygon poly;
    double angle_step_taken = 0.0;
    bool vertex_eliminated = false; // hinge flattened, vertex pair merged away
};

// One Steiner four-bar step on a centrally symmetric polygon: opens the hinge
// angle whose increase shrinks the linkage quadrilateral, transporting the
// boundary chains rigidly.  Length is preserved exactly; area strictly drops.
// Throws RigidityError when the polygon is already a lune.
DeformResult four_bar_deform(const ArcPolygon& poly, double step);

struct DeformTraceRow {
    int step = 0;
    double length = 0.0;
    double area = 0.0;
    int vertex_pairs = 0;
};

// Drives four_bar_deform until the polygon becomes a lune (or max_steps).
struct DeformRun {
    ArcPolygon final_poly;
    std::vector<DeformTraceRow> trace;
    bool reached_lune = false;
};
DeformRun deform_to_lune(const ArcPolygon& poly, double step, int max_steps = 100000);

struct OptimizerReport {
    double best_deficit = 0.0;
    double length_target = 0.0;
    int n_arcs = 0;
    std::uint64_t seed = 0;
    int iterations = 0;
    bool converged_to_lune = false;
    double best_area = 0.0;
};

struct MinimizeResult {
    ArcPolygon best;
    OptimizerReport report;
};

// Multistart coordinate-descent search for the minimal enclosed area among
// lambda-convex polygons with n_arcs arcs and fixed length; the per-start
// searches are independent and deterministic from the seed, and may run on a
// small worker pool.  Reports the deficit against the lune of equal length.
MinimizeResult minimize_area(int n_arcs, double length_target, std::uint64_t seed, int iterations,
                             double lambda, const Metric& m, int n_starts = 64);

} // namespace sphconv
