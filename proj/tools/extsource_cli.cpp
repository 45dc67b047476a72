// Command-line front door: each subcommand is a thin wrapper over one module
// operation and emits CSV data plus a <out>.meta.json sidecar.
#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "extsrc/bridges.hpp"
#include "extsrc/density.hpp"
#include "extsrc/ensemble.hpp"
#include "extsrc/io.hpp"
#include "extsrc/lambda.hpp"
#include "extsrc/levelcurves.hpp"
#include "extsrc/model.hpp"
#include "extsrc/parametrix.hpp"
#include "extsrc/scaling.hpp"
#include "extsrc/surface.hpp"

namespace {

using namespace extsrc;
using Rows = std::vector<std::vector<std::string>>;

std::string fd(double v) { return format_double(v); }

std::vector<double> parse_times(const std::string& spec) {
    double lo, hi;
    int count;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
        throw std::invalid_argument("times must be start:end:count");
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i)
        t[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return t;
}

std::vector<double> linspace(double lo, double hi, int m) {
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = m == 1 ? lo : lo + (hi - lo) * i / (m - 1);
    return x;
}

ordered_json ladder_report_json(const ScalingReport& rep) {
    ordered_json j;
    j["regime"] = rep.regime;
    j["a"] = rep.a;
    j["x0"] = rep.x0;
    j["n_ladder"] = rep.ladder;
    j["sup_product_error"] = rep.product_errors;
    j["sup_diag_error"] = rep.diag_errors;
    j["rate_estimate"] = rep.rate_estimate;
    j["nonincreasing_with_slack"] = rep.nonincreasing();
    return j;
}

void write_json_artifact(const std::string& path, const ordered_json& body,
                         const ordered_json& meta) {
    std::ofstream out(path);
    if (!out) throw NumericalError("cannot open " + path);
    out << body.dump(2) << "\n";
    write_meta(path, meta);
}

int dispatch(CLI::App& app, int argc, char** argv) {
    int jobs = 0;
    app.fallthrough();  // let subcommands forward --jobs to the parent
    app.add_option("--jobs", jobs, "worker threads (0 = hardware concurrency)");

    // ---- density
    auto* cmd_density = app.add_subcommand("density", "equilibrium density on a grid");
    double a = 0.4, xmin = -3.0, xmax = 3.0, x0v = 0.0, b = 1.0;
    int points = 601, n = 50;
    uint64_t seed = 1;
    int reps = 1;
    std::string out, nlist = "50", pairs = "23", times = "0.1:0.9:9";
    cmd_density->add_option("--a", a)->required();
    cmd_density->add_option("--xmin", xmin);
    cmd_density->add_option("--xmax", xmax);
    cmd_density->add_option("--points", points);
    cmd_density->add_option("--out", out)->required();

    auto* cmd_bp = app.add_subcommand("branch-points", "branch points of the spectral curve");
    cmd_bp->add_option("--a", a)->required();
    cmd_bp->add_option("--out", out)->required();

    auto* cmd_support = app.add_subcommand("support", "support intervals of the density");
    cmd_support->add_option("--a", a)->required();
    cmd_support->add_option("--out", out)->required();

    auto* cmd_sample = app.add_subcommand("sample", "Monte Carlo spectra");
    cmd_sample->add_option("--a", a)->required();
    cmd_sample->add_option("--n", n)->required();
    cmd_sample->add_option("--seed", seed);
    cmd_sample->add_option("--reps", reps);
    cmd_sample->add_option("--out", out)->required();

    auto* cmd_kernel = app.add_subcommand("kernel", "correlation kernel on a grid");
    cmd_kernel->add_option("--a", a)->required();
    cmd_kernel->add_option("--n", n)->required();
    cmd_kernel->add_option("--xmin", xmin);
    cmd_kernel->add_option("--xmax", xmax);
    cmd_kernel->add_option("--points", points)->default_val(41);
    cmd_kernel->add_option("--out", out)->required();

    auto* cmd_bulk = app.add_subcommand("bulk-check", "sine-kernel universality report");
    cmd_bulk->add_option("--a", a)->required();
    cmd_bulk->add_option("--x0", x0v);
    cmd_bulk->add_option("--n", nlist, "comma-separated n ladder");
    cmd_bulk->add_option("--out", out)->required();

    auto* cmd_edge = app.add_subcommand("edge-check", "Airy-kernel universality report");
    cmd_edge->add_option("--a", a)->required();
    cmd_edge->add_option("--n", nlist, "comma-separated n ladder");
    cmd_edge->add_option("--out", out)->required();

    auto* cmd_lambda = app.add_subcommand("lambda-check", "lambda jump relation residuals");
    cmd_lambda->add_option("--a", a)->required();
    cmd_lambda->add_option("--out", out)->required();

    auto* cmd_par = app.add_subcommand("parametrix-check", "local parametrix matching rates");
    cmd_par->add_option("--a", a)->required();
    cmd_par->add_option("--n", nlist, "comma-separated n ladder");
    cmd_par->add_option("--out", out)->required();

    auto* cmd_lc = app.add_subcommand("level-curves", "zero level curves of Re(lambda_j - lambda_k)");
    double ymin = -2.0, ymax = 2.0;
    int nx = 81, ny = 81;
    cmd_lc->add_option("--a", a)->required();
    cmd_lc->add_option("--pair", pairs, "12, 13, or 23");
    cmd_lc->add_option("--xmin", xmin);
    cmd_lc->add_option("--xmax", xmax);
    cmd_lc->add_option("--ymin", ymin);
    cmd_lc->add_option("--ymax", ymax);
    cmd_lc->add_option("--nx", nx);
    cmd_lc->add_option("--ny", ny);
    cmd_lc->add_option("--out", out)->required();

    auto* cmd_x0 = app.add_subcommand("x0", "real crossing point of the 23 level curve");
    cmd_x0->add_option("--a", a)->required();
    cmd_x0->add_option("--out", out)->required();

    auto* cmd_bridges = app.add_subcommand("bridges", "non-intersecting bridge paths");
    cmd_bridges->add_option("--b", b)->required();
    cmd_bridges->add_option("--n", n)->required();
    cmd_bridges->add_option("--times", times, "start:end:count");
    cmd_bridges->add_option("--seed", seed);
    cmd_bridges->add_option("--reps", reps);
    cmd_bridges->add_option("--out", out)->required();

    app.require_subcommand(1);
    app.parse(argc, argv);

    auto parse_nlist = [&]() {
        std::vector<int> ns;
        size_t pos = 0;
        while (pos < nlist.size()) {
            size_t comma = nlist.find(',', pos);
            if (comma == std::string::npos) comma = nlist.size();
            ns.push_back(std::stoi(nlist.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        if (ns.empty()) throw std::invalid_argument("empty n ladder");
        return ns;
    };

    if (!*cmd_bridges && a < 0.0)
        throw std::invalid_argument("a must be nonnegative");
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (points < 1) throw std::invalid_argument("points must be >= 1");

    ordered_json meta;
    meta["a"] = a;

    if (*cmd_density) {
        meta["command"] = "density";
        Rows rows;
        for (double x : linspace(xmin, xmax, points))
            rows.push_back({fd(x), fd(density(x, a))});
        write_csv(out, {"x", "rho"}, rows);
        meta["points"] = points;
        meta["mass"] = density_mass(a);
        write_meta(out, meta);
        std::fprintf(stderr, "density mass = %s\n", fd(density_mass(a)).c_str());
    } else if (*cmd_bp) {
        meta["command"] = "branch-points";
        BranchData bd = branch_points(a);
        write_csv(out, {"a", "z1", "z2", "q", "p", "p0"},
                  {{fd(a), fd(bd.z1), fd(bd.z2), fd(bd.q), fd(bd.p), fd(bd.p0)}});
        write_meta(out, meta);
    } else if (*cmd_support) {
        meta["command"] = "support";
        Rows rows;
        for (const Interval& iv : support(a)) rows.push_back({fd(iv.lo), fd(iv.hi)});
        write_csv(out, {"lo", "hi"}, rows);
        meta["intervals"] = rows.size();
        write_meta(out, meta);
    } else if (*cmd_sample) {
        meta["command"] = "sample";
        SourceParams p(a, n);
        std::vector<EigenSample> samples(reps);
        parallel_for(reps, jobs,
                     [&](size_t r) { samples[r] = sample_spectrum(p, seed + r); });
        Rows rows;
        for (int r = 0; r < reps; ++r)
            for (int i = 0; i < n; ++i)
                rows.push_back({std::to_string(r), std::to_string(i),
                                fd(samples[r].eigenvalues[i])});
        write_csv(out, {"replica", "index", "eigenvalue"}, rows);
        meta["n"] = n;
        meta["seed"] = seed;
        meta["reps"] = reps;
        write_meta(out, meta);
    } else if (*cmd_kernel) {
        meta["command"] = "kernel";
        KernelMatrix K(a, n, linspace(xmin, xmax, points));
        Rows rows;
        for (int i = 0; i < points; ++i)
            for (int j = 0; j < points; ++j)
                rows.push_back({fd(K.grid[i]), fd(K.grid[j]), fd(K.values[i][j])});
        write_csv(out, {"x", "y", "K"}, rows);
        meta["n"] = n;
        meta["gauge"] = K.gauge();
        meta["condition_estimate"] = K.condition();
        write_meta(out, meta);
    } else if (*cmd_bulk) {
        meta["command"] = "bulk-check";
        ScalingReport rep = bulk_check(a, x0v, parse_nlist());
        write_json_artifact(out, ladder_report_json(rep), meta);
    } else if (*cmd_edge) {
        meta["command"] = "edge-check";
        ScalingReport rep = edge_check(a, parse_nlist());
        write_json_artifact(out, ladder_report_json(rep), meta);
    } else if (*cmd_lambda) {
        meta["command"] = "lambda-check";
        JumpReport rep = verify_lambda_jumps(a);
        ordered_json body;
        body["max_residual"] = rep.max_residual;
        body["loop_residuals"] = rep.loop_residuals;
        body["checks"] = ordered_json::array();
        for (const JumpResidual& e : rep.entries)
            body["checks"].push_back({{"contour", e.contour},
                                      {"relation", e.relation},
                                      {"re", e.point.real()},
                                      {"im", e.point.imag()},
                                      {"residual", e.residual}});
        write_json_artifact(out, body, meta);
    } else if (*cmd_par) {
        meta["command"] = "parametrix-check";
        LocalParametrix lp(a);
        std::vector<int> ns = parse_nlist();
        ordered_json body;
        body["n_ladder"] = ns;
        std::vector<double> mism;
        for (int nn : ns) mism.push_back(lp.matching_mismatch(nn));
        body["matching_mismatch"] = mism;
        std::vector<double> ratios;
        for (size_t i = 1; i < mism.size(); ++i) ratios.push_back(mism[i - 1] / mism[i]);
        body["halving_ratios"] = ratios;
        body["laurent_defect"] = lp.laurent_defect(ns.front());
        write_json_artifact(out, body, meta);
    } else if (*cmd_lc) {
        meta["command"] = "level-curves";
        int pair = std::stoi(pairs);
        auto curves = level_curves(a, pair, Rect{xmin, xmax, ymin, ymax}, nx, ny);
        Rows rows;
        for (size_t c = 0; c < curves.size(); ++c)
            for (size_t i = 0; i < curves[c].size(); ++i)
                rows.push_back({std::to_string(c), std::to_string(i),
                                fd(curves[c][i].real()), fd(curves[c][i].imag())});
        write_csv(out, {"curve", "index", "x", "y"}, rows);
        meta["pair"] = pair;
        meta["curves"] = curves.size();
        write_meta(out, meta);
    } else if (*cmd_x0) {
        meta["command"] = "x0";
        write_csv(out, {"a", "x0"}, {{fd(a), fd(x0(a))}});
        write_meta(out, meta);
    } else if (*cmd_bridges) {
        meta.erase("a");
        meta["command"] = "bridges";
        meta["b"] = b;
        std::vector<double> ts = parse_times(times);
        std::vector<BridgeEnsemble> ens(reps);
        parallel_for(reps, jobs,
                     [&](size_t r) { ens[r] = simulate(b, n, ts, seed + r); });
        Rows rows;
        for (int r = 0; r < reps; ++r)
            for (size_t k = 0; k < ts.size(); ++k)
                for (int i = 0; i < n; ++i)
                    rows.push_back({std::to_string(r), std::to_string(i), fd(ts[k]),
                                    fd(ens[r].paths[k][i])});
        write_csv(out, {"replica", "path", "time", "position"}, rows);
        meta["n"] = n;
        meta["times"] = ts;
        meta["seed"] = seed;
        meta["reps"] = reps;
        meta["t_c"] = critical_time(b);
        write_meta(out, meta);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"external-source ensemble toolkit"};
    try {
        return dispatch(app, argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0, validation errors 2
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const extsrc::UnsupportedPhase& e) {
        // parameter outside the operation's phase-domain: a validation error
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const extsrc::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
