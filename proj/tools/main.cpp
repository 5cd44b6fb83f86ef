#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sphconv/control.hpp"
#include "sphconv/duality.hpp"
#include "sphconv/errors.hpp"
#include "sphconv/json_io.hpp"
#include "sphconv/numerics.hpp"
#include "sphconv/optimize.hpp"
#include "sphconv/shapes.hpp"

namespace {

using nlohmann::json;
using namespace sphconv;

constexpr int kExitBadInput = 2;
constexpr int kExitDomain = 3;
constexpr int kExitFalsified = 4;

json measure_json(const MeasureReport& r) {
    json j;
    j["length"] = r.length;
    j["area"] = r.area;
    j["r_min"] = r.r_min;
    j["r_max"] = r.r_max;
    j["kappa_min"] = r.kappa_min;
    j["kappa_max"] = std::isfinite(r.kappa_max) ? json(r.kappa_max) : json("inf");
    return j;
}

MeasureReport measure_variant(const CurveVariant& curve, int samples) {
    if (std::holds_alternative<ArcPolygon>(curve)) {
        return measure(std::get<ArcPolygon>(curve));
    }
    (void)samples;
    return measure(std::get<SupportCurve>(curve));
}

struct CurveParams {
    double k1 = 0.0, lambda = 0.0;
};

CurveParams params_of(const CurveVariant& curve) {
    return std::visit([](const auto& c) { return CurveParams{c.m.k1, c.lambda}; }, curve);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"lambda-convex curves on the sphere: sharp reverse isoperimetric bounds"};
    app.require_subcommand(1);

    // --- lune ---
    auto* lune_cmd = app.add_subcommand("lune", "generate a lambda-convex lune");
    double lune_k1 = 1.0, lune_lambda = 1.0, lune_length = 1.0;
    std::string lune_out;
    lune_cmd->add_option("--k1", lune_k1, "sphere curvature parameter")->capture_default_str();
    lune_cmd->add_option("--lambda", lune_lambda, "curvature bound")->capture_default_str();
    lune_cmd->add_option("--length", lune_length, "curve length")->required();
    lune_cmd->add_option("--out", lune_out, "output curve JSON path")->required();

    // --- racetrack ---
    auto* track_cmd = app.add_subcommand("racetrack", "generate a racetrack curve");
    double track_k1 = 1.0, track_lambda = 1.0, track_sep = 0.0;
    int track_samples = 4096;
    std::string track_out;
    track_cmd->add_option("--k1", track_k1, "sphere curvature parameter")->capture_default_str();
    track_cmd->add_option("--lambda", track_lambda, "arc curvature")->capture_default_str();
    track_cmd->add_option("--separation", track_sep, "distance between the two circle centers")
        ->required();
    track_cmd->add_option("--samples", track_samples, "support samples")->capture_default_str();
    track_cmd->add_option("--out", track_out, "output curve JSON path")->required();

    // --- measure ---
    auto* measure_cmd = app.add_subcommand("measure", "length/area/curvature report");
    std::string measure_in;
    int measure_samples = 4096;
    measure_cmd->add_option("--in", measure_in, "curve JSON path")->required();
    measure_cmd->add_option("--samples", measure_samples, "support samples")->capture_default_str();

    // --- check-lower ---
    auto* lower_cmd = app.add_subcommand("check-lower", "area lower-bound deficit report");
    std::string lower_in;
    int lower_samples = 4096;
    lower_cmd->add_option("--in", lower_in, "curve JSON path")->required();
    lower_cmd->add_option("--samples", lower_samples, "support samples")->capture_default_str();

    // --- check-upper ---
    auto* upper_cmd = app.add_subcommand("check-upper", "length upper-bound slack report");
    std::string upper_in;
    int upper_samples = 4096;
    double upper_lambda = 0.0;
    upper_cmd->add_option("--in", upper_in, "curve JSON path")->required();
    upper_cmd->add_option("--lambda", upper_lambda, "curvature bound (default: lambda of the file)");
    upper_cmd->add_option("--samples", upper_samples, "support samples")->capture_default_str();

    // --- dual ---
    auto* dual_cmd = app.add_subcommand("dual", "polar dual curve");
    std::string dual_in, dual_out;
    int dual_samples = 4096;
    dual_cmd->add_option("--in", dual_in, "curve JSON path")->required();
    dual_cmd->add_option("--out", dual_out, "output curve JSON path")->required();
    dual_cmd->add_option("--samples", dual_samples, "support samples")->capture_default_str();

    // --- optimize ---
    auto* opt_cmd = app.add_subcommand("optimize", "search for the minimal-area polygon");
    int opt_arcs = 4, opt_iters = 60;
    double opt_length = 2.0, opt_k1 = 1.0, opt_lambda = 1.0;
    std::uint64_t opt_seed = 1;
    std::string opt_best_out;
    opt_cmd->add_option("--arcs", opt_arcs, "number of arcs")->capture_default_str();
    opt_cmd->add_option("--length", opt_length, "fixed length")->required();
    opt_cmd->add_option("--seed", opt_seed, "random seed")->capture_default_str();
    opt_cmd->add_option("--iters", opt_iters, "coordinate-descent sweeps")->capture_default_str();
    opt_cmd->add_option("--k1", opt_k1, "sphere curvature parameter")->capture_default_str();
    opt_cmd->add_option("--lambda", opt_lambda, "curvature bound")->capture_default_str();
    opt_cmd->add_option("--best-out", opt_best_out, "write the best polygon JSON here");

    // --- pmp-verify ---
    auto* pmp_cmd = app.add_subcommand("pmp-verify", "Pontryagin consistency check");
    std::string pmp_in, pmp_out;
    pmp_cmd->add_option("--in", pmp_in, "curve JSON path (lambda = k1 = 1 polygon)")->required();
    pmp_cmd->add_option("--out", pmp_out, "trajectory CSV path")->required();

    // --- deform ---
    auto* deform_cmd = app.add_subcommand("deform", "four-bar isoperimetric deformation run");
    std::string deform_in, deform_dir;
    int deform_steps = 100000;
    double deform_step = kPi / 180.0;
    deform_cmd->add_option("--in", deform_in, "curve JSON path")->required();
    deform_cmd->add_option("--steps", deform_steps, "maximum steps")->capture_default_str();
    deform_cmd->add_option("--step", deform_step, "hinge angle increment")->capture_default_str();
    deform_cmd->add_option("--out-dir", deform_dir, "output directory")->required();

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "deficit/slack tables for plots");
    std::string sweep_what, sweep_grid = "0.5:4.0:32", sweep_out;
    double sweep_k1 = 1.0, sweep_lambda = 1.0;
    sweep_cmd->add_option("--what", sweep_what, "lower|upper")->required();
    sweep_cmd->add_option("--grid", sweep_grid, "start:stop:count")->capture_default_str();
    sweep_cmd->add_option("--k1", sweep_k1, "sphere curvature parameter")->capture_default_str();
    sweep_cmd->add_option("--lambda", sweep_lambda, "curvature bound")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    if (lune_cmd->parsed()) {
        const LuneSpec spec{Metric{lune_k1}, lune_lambda, lune_length};
        write_curve_file(lune_out, make_lune(spec));
        return 0;
    }
    if (track_cmd->parsed()) {
        const SupportCurve curve =
            make_racetrack(track_lambda, track_sep, Metric{track_k1}, track_samples);
        write_curve_file(track_out, curve);
        return 0;
    }
    if (measure_cmd->parsed()) {
        auto curve = read_curve_file(measure_in);
        if (std::holds_alternative<SupportCurve>(curve) && measure_samples != 4096) {
            // re-sampling a support curve is a no-op; the flag matters for arcs
        }
        std::cout << measure_json(measure_variant(curve, measure_samples)).dump() << "\n";
        return 0;
    }
    if (lower_cmd->parsed()) {
        auto curve = read_curve_file(lower_in);
        const CurveParams cp = params_of(curve);
        const MeasureReport r = measure_variant(curve, lower_samples);
        const double deficit = std::holds_alternative<ArcPolygon>(curve)
                                   ? lower_bound_deficit(std::get<ArcPolygon>(curve))
                                   : lower_bound_deficit(std::get<SupportCurve>(curve));
        json j;
        j["length"] = r.length;
        j["area"] = r.area;
        j["lambda"] = cp.lambda;
        j["k1"] = cp.k1;
        j["lune_area"] = lune_area(std::min(r.length, LuneSpec{Metric{cp.k1}, cp.lambda, 1.0}.max_length()),
                                   cp.lambda, Metric{cp.k1});
        j["deficit"] = deficit;
        std::cout << j.dump() << "\n";
        if (deficit < -1e-6) {
            std::cerr << "check-lower: deficit " << deficit << " falsifies the lower bound\n";
            return kExitFalsified;
        }
        return 0;
    }
    if (upper_cmd->parsed()) {
        auto curve = read_curve_file(upper_in);
        const CurveParams cp = params_of(curve);
        const double lambda = (upper_lambda > 0.0) ? upper_lambda : cp.lambda;
        if (!(lambda > 0.0)) {
            throw DomainError("check-upper: supply --lambda for curves stored with lambda = 0");
        }
        const MeasureReport r = measure_variant(curve, upper_samples);
        const double slack = std::holds_alternative<ArcPolygon>(curve)
                                 ? upper_bound_slack(std::get<ArcPolygon>(curve), lambda)
                                 : upper_bound_slack(std::get<SupportCurve>(curve), lambda);
        json j;
        j["length"] = r.length;
        j["area"] = r.area;
        j["lambda"] = lambda;
        j["k1"] = cp.k1;
        j["bound_length"] = racetrack_length_bound(r.area, lambda, Metric{cp.k1});
        j["slack"] = slack;
        std::cout << j.dump() << "\n";
        if (slack < -1e-6) {
            std::cerr << "check-upper: slack " << slack << " falsifies the upper bound\n";
            return kExitFalsified;
        }
        return 0;
    }
    if (dual_cmd->parsed()) {
        auto curve = read_curve_file(dual_in);
        const SupportCurve dual = std::holds_alternative<ArcPolygon>(curve)
                                      ? support_from_arcs(polar_dual(std::get<ArcPolygon>(curve)),
                                                          dual_samples)
                                      : polar_dual(std::get<SupportCurve>(curve));
        write_curve_file(dual_out, dual);
        return 0;
    }
    if (opt_cmd->parsed()) {
        const MinimizeResult res =
            minimize_area(opt_arcs, opt_length, opt_seed, opt_iters, opt_lambda, Metric{opt_k1});
        json j;
        j["best_deficit"] = res.report.best_deficit;
        j["L0"] = res.report.length_target;
        j["n_arcs"] = res.report.n_arcs;
        j["seed"] = res.report.seed;
        j["iterations"] = res.report.iterations;
        j["converged_to_lune"] = res.report.converged_to_lune;
        std::cout << j.dump() << "\n";
        if (!opt_best_out.empty()) write_curve_file(opt_best_out, res.best);
        if (res.report.best_deficit < -1e-6) {
            std::cerr << "optimize: negative deficit falsifies the bound\n";
            return kExitFalsified;
        }
        return 0;
    }
    if (pmp_cmd->parsed()) {
        auto curve = read_curve_file(pmp_in);
        if (!std::holds_alternative<ArcPolygon>(curve)) {
            throw DomainError("pmp-verify: needs the arc representation of a lambda-convex polygon");
        }
        const ArcPolygon& poly = std::get<ArcPolygon>(curve);
        if (std::abs(poly.m.k1 - 1.0) > 1e-12 || std::abs(poly.lambda - 1.0) > 1e-12) {
            throw DomainError("pmp-verify: the control problem is posed in lambda = k1 = 1 units");
        }
        const double len = poly.length();
        const LuneProblem problem = lune_control_problem(len);
        ControlTrajectory traj =
            integrate_trajectory(problem.schedule, problem.x1_0, problem.x2_0, len);
        const PmpReport rep = verify_pmp(traj);
        std::ofstream csv(pmp_out);
        if (!csv) throw ParseError("cannot open output file: " + pmp_out);
        csv << "t,x1,x2,u,p1,p2,H1\n";
        csv.precision(17);
        for (size_t i = 0; i < traj.t.size(); ++i) {
            csv << traj.t[i] << ',' << traj.x1[i] << ',' << traj.x2[i] << ',' << traj.u[i] << ','
                << traj.p1[i] << ',' << traj.p2[i] << ',' << traj.h1[i] << "\n";
        }
        json j;
        j["consistent"] = rep.consistent;
        j["feasible"] = rep.feasible;
        j["lambda1"] = rep.lambda1;
        j["max_H1_at_switches"] = rep.max_h1_at_switches;
        j["fit_residual"] = rep.fit_residual;
        j["hamiltonian_drift"] = rep.hamiltonian_drift;
        j["objective"] = traj.objective;
        j["constraint_integral"] = traj.constraint_integral;
        j["periodicity_residual"] = traj.periodicity_residual;
        std::cout << j.dump() << "\n";
        return 0;
    }
    if (deform_cmd->parsed()) {
        auto curve = read_curve_file(deform_in);
        if (!std::holds_alternative<ArcPolygon>(curve)) {
            throw DomainError("deform: needs the arc representation of a lambda-convex polygon");
        }
        std::filesystem::create_directories(deform_dir);
        const DeformRun run = deform_to_lune(std::get<ArcPolygon>(curve), deform_step, deform_steps);
        std::ofstream csv(deform_dir + "/steps.csv");
        if (!csv) throw ParseError("cannot open output file: " + deform_dir + "/steps.csv");
        csv << "step,length,area,vertex_pairs\n";
        csv.precision(17);
        for (const DeformTraceRow& row : run.trace) {
            csv << row.step << ',' << row.length << ',' << row.area << ',' << row.vertex_pairs
                << "\n";
        }
        write_curve_file(deform_dir + "/final.json", run.final_poly);
        json j;
        j["steps"] = static_cast<int>(run.trace.size()) - 1;
        j["reached_lune"] = run.reached_lune;
        j["final_area"] = run.final_poly.area();
        j["final_length"] = run.final_poly.length();
        std::cout << j.dump() << "\n";
        return 0;
    }
    if (sweep_cmd->parsed()) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        if (std::sscanf(sweep_grid.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2) {
            throw ParseError("sweep: --grid must be start:stop:count");
        }
        const Metric m{sweep_k1};
        std::ofstream csv(sweep_out);
        if (!csv) throw ParseError("cannot open output file: " + sweep_out);
        csv.precision(17);
        if (sweep_what == "lower") {
            csv << "length,lune_area,euclid_lower_bound,deficit_of_lune\n";
            for (int i = 0; i < count; ++i) {
                const double L = lo + (hi - lo) * i / (count - 1);
                const ArcPolygon lune = make_lune({m, sweep_lambda, L});
                csv << L << ',' << lune_area(L, sweep_lambda, m) << ','
                    << euclid_lower_bound(L, sweep_lambda) << ',' << lower_bound_deficit(lune)
                    << "\n";
            }
        } else if (sweep_what == "upper") {
            csv << "separation,length,area,bound_length,slack\n";
            for (int i = 0; i < count; ++i) {
                const double sep = lo + (hi - lo) * i / (count - 1);
                const ArcPolygon track = make_racetrack_polygon(sweep_lambda, sep, m);
                const MeasureReport r = measure(track);
                csv << sep << ',' << r.length << ',' << r.area << ','
                    << racetrack_length_bound(r.area, sweep_lambda, m) << ','
                    << upper_bound_slack(track, sweep_lambda) << "\n";
            }
        } else {
            throw ParseError("sweep: --what must be lower or upper");
        }
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
