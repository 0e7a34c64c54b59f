// Command-line front end: reproducible experiments over the random relaxed
// Newton engine with JSON/CSV/PNG outputs and a run manifest per invocation.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stochnewton/basin.hpp"
#include "stochnewton/dynamics.hpp"
#include "stochnewton/engine.hpp"
#include "stochnewton/errors.hpp"
#include "stochnewton/json_io.hpp"
#include "stochnewton/montecarlo.hpp"
#include "stochnewton/version.hpp"

using namespace stochnewton;
using nlohmann::json;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string manifest_path = "stochnewton_manifest.json";
    std::string config_path;
};

std::uint64_t effective_seed(const GlobalOptions& g) {
    if (g.seed_given) return g.seed;
    if (const char* env = std::getenv("STOCHNEWTON_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 42;
}

json load_config(const GlobalOptions& g) {
    if (g.config_path.empty()) return json::object();
    std::ifstream in(g.config_path);
    if (!in) throw BadConfig("cannot open config file " + g.config_path);
    json j;
    in >> j;
    return j;
}

Polynomial poly_from_arg(const std::string& arg) {
    std::ifstream in(arg);
    if (in.good()) {
        json j;
        in >> j;
        return polynomial_from_json(j);
    }
    return Polynomial::parse(arg);
}

// Flags override config-file values override defaults.
LambdaMeasure measure_from_options(const std::string& measure_json,
                                   double radius, bool radius_given,
                                   std::uint64_t seed, const json& config) {
    if (!measure_json.empty()) {
        json j = json::parse(measure_json);
        if (!j.contains("seed")) j["seed"] = seed;
        return measure_from_json(j);
    }
    if (radius_given) return LambdaMeasure::uniform_disk(radius, seed);
    if (config.contains("measure")) {
        json j = config.at("measure");
        if (!j.contains("seed")) j["seed"] = seed;
        return measure_from_json(j);
    }
    return LambdaMeasure::uniform_disk(radius, seed);
}

struct ManifestWriter {
    std::string command;
    json config = json::object();
    std::uint64_t seed = 0;
    std::string path;
    std::vector<std::pair<std::string, std::uint64_t>> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void add_output(const std::string& file) {
        outputs.emplace_back(file, fnv1a64_file(file));
    }

    void write() const {
        json j;
        j["schema"] = "stochnewton.manifest.v1";
        j["command"] = command;
        j["config"] = config;
        j["seed"] = seed;
        j["version"] = kVersion;
        j["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        json outs = json::array();
        for (const auto& [file, hash] : outputs) {
            char hex[20];
            std::snprintf(hex, sizeof(hex), "%016llx",
                          static_cast<unsigned long long>(hash));
            outs.push_back({{"path", file}, {"fnv1a64", hex}});
        }
        j["outputs"] = outs;
        std::ofstream out(path, std::ios::trunc);
        out << j.dump(2) << "\n";
    }
};

void emit(const json& doc, const std::string& target, ManifestWriter& manifest) {
    if (target.empty() || target == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(target, std::ios::trunc);
    if (!out) throw Error("cannot open " + target);
    out << doc.dump(2) << "\n";
    out.close();
    manifest.add_output(target);
}

json root_to_json(const RootRecord& r) {
    return json{{"re", r.value.real()},
                {"im", r.value.imag()},
                {"multiplicity", r.multiplicity_estimate},
                {"residual", r.residual},
                {"polished", r.polished}};
}

json point_to_json(const SphericalPoint& p) {
    if (p.infinite) return json("inf");
    return json::array({p.value.real(), p.value.imag()});
}

SphericalPoint parse_point(const std::string& s) {
    if (s == "inf" || s == "infinity") return SphericalPoint::inf();
    double re = 0, im = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf", &re, &im) < 1)
        throw BadConfig("point must be 're,im' or 'inf'");
    return SphericalPoint::at(cplx(re, im));
}

int run_find_roots(const GlobalOptions& g, const std::string& poly_arg,
                   const std::string& measure_json, double radius,
                   bool radius_given, double tol, int max_iter,
                   const std::string& json_out) {
    ManifestWriter manifest{.command = "find-roots", .path = g.manifest_path};
    manifest.seed = effective_seed(g);
    json config = load_config(g);
    Polynomial p = poly_from_arg(poly_arg);
    LambdaMeasure tau =
        measure_from_options(measure_json, radius, radius_given,
                             manifest.seed, config);
    EngineConfig cfg;
    cfg.residual_tolerance = tol;
    cfg.max_iterations = max_iter;

    manifest.config = {{"poly", polynomial_to_json(p)},
                       {"measure", measure_to_json(tau)},
                       {"tolerance", tol},
                       {"max_iterations", max_iter}};

    auto roots = find_all_roots(p, tau, cfg);
    json doc;
    doc["schema"] = "stochnewton.roots.v1";
    doc["polynomial"] = polynomial_to_json(p);
    doc["measure"] = measure_to_json(tau);
    doc["convergence_hypotheses_met"] =
        tau.contains_half_disk() && tau.supported_in_lambda();
    json arr = json::array();
    for (const auto& r : roots) arr.push_back(root_to_json(r));
    doc["roots"] = arr;
    emit(doc, json_out, manifest);

    if (json_out.empty() || json_out == "-") {
        // nothing further; JSON already on stdout
    } else {
        std::cout << roots.size() << " roots, max residual ";
        double worst = 0;
        for (const auto& r : roots) worst = std::max(worst, r.residual);
        std::cout << worst << "\n";
    }
    manifest.write();
    return 0;
}

int run_trap_demo(const GlobalOptions& g, long runs, const std::string& json_out) {
    ManifestWriter manifest{.command = "trap-demo", .path = g.manifest_path};
    manifest.seed = effective_seed(g);
    manifest.config = {{"runs", runs}};
    Polynomial trap = Polynomial::parse("2 - 2z + z^3");
    EngineConfig cfg;

    OrbitOutcome det = deterministic_newton(trap, cplx(0, 0), cfg);
    LambdaMeasure tau = LambdaMeasure::uniform_disk(0.75, manifest.seed);
    long converged = 0;
    for (long i = 0; i < runs; ++i) {
        OrbitOutcome o = run_random_orbit(trap, tau, cplx(0, 0), {}, cfg, i);
        if (o.status == OrbitStatus::ConvergedToRoot) ++converged;
    }

    if (!json_out.empty()) {
        json doc;
        doc["schema"] = "stochnewton.trap.v1";
        doc["polynomial"] = "z^3 - 2z + 2";
        doc["start"] = {0.0, 0.0};
        doc["deterministic_cycle_length"] =
            det.status == OrbitStatus::DetectedCycle ? det.cycle_length : 0;
        doc["randomized_runs"] = runs;
        doc["randomized_converged"] = converged;
        emit(doc, json_out, manifest);
    }
    if (json_out.empty() || json_out != "-") {
        std::cout << "polynomial: z^3 - 2z + 2, start z0 = 0\n";
        std::cout << "  method                outcome\n";
        std::cout << "  deterministic Newton  ";
        if (det.status == OrbitStatus::DetectedCycle)
            std::cout << "cycle of length " << det.cycle_length << "\n";
        else
            std::cout << "status " << static_cast<int>(det.status) << "\n";
        std::cout << "  random relaxed        " << converged << "/" << runs
                  << " runs converged ("
                  << 100.0 * static_cast<double>(converged) / runs << "%)\n";
    }
    manifest.write();
    return 0;
}

GeneratorFamily family_from_options(const std::string& family,
                                    const std::string& poly_arg,
                                    const LambdaMeasure& tau, int rotation_n,
                                    std::vector<int> rotation_exponents,
                                    const std::string& points_arg,
                                    const std::vector<std::string>& permuters) {
    if (family == "relaxed-newton") {
        Polynomial p = poly_from_arg(poly_arg);
        auto roots = find_all_roots(
            p, LambdaMeasure::uniform_disk(0.75, tau.seed_base() + 1),
            EngineConfig{});
        std::vector<cplx> rv;
        for (const auto& r : roots) rv.push_back(r.value);
        return GeneratorFamily::relaxed_newton(p, rv);
    }
    if (family == "quadratic") return GeneratorFamily::quadratic();
    if (family == "rotation") {
        if (rotation_exponents.empty()) rotation_exponents = {1};
        return GeneratorFamily::rotation(rotation_n, rotation_exponents);
    }
    if (family == "embedded-markov") {
        std::vector<cplx> pts;
        std::stringstream ss(points_arg);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            double re = 0, im = 0;
            if (std::sscanf(tok.c_str(), "%lf,%lf", &re, &im) < 1)
                throw BadConfig("points must be 're,im;re,im;...'");
            pts.emplace_back(re, im);
        }
        std::vector<Polynomial> ps;
        for (const auto& s : permuters) ps.push_back(Polynomial::parse(s));
        return GeneratorFamily::embedded_markov(pts, ps);
    }
    throw BadConfig("unknown family '" + family + "'");
}

int run_lyapunov(const GlobalOptions& g, const std::string& family,
                 const std::string& poly_arg, const std::string& point,
                 const std::string& measure_json, double radius,
                 bool radius_given, int mult, const std::string& json_out) {
    ManifestWriter manifest{.command = "lyapunov", .path = g.manifest_path};
    manifest.seed = effective_seed(g);
    json config = load_config(g);
    LambdaMeasure tau = measure_from_options(measure_json, radius,
                                             radius_given, manifest.seed, config);
    GeneratorFamily fam =
        family_from_options(family, poly_arg, tau, 2, {}, "", {});
    SphericalPoint x = parse_point(point);
    Lyapunov chi = lyapunov_fixed_point(tau, fam, x, mult);

    manifest.config = {{"family", family},
                       {"point", point},
                       {"measure", measure_to_json(tau)}};
    json doc;
    doc["schema"] = "stochnewton.lyapunov.v1";
    doc["family"] = family;
    doc["point"] = point_to_json(x);
    doc["measure"] = measure_to_json(tau);
    doc["minus_infinity"] = chi.minus_infinity;
    doc["chi"] = chi.minus_infinity ? json(nullptr) : json(chi.value);
    doc["std_error"] = chi.std_error;
    doc["exact"] = chi.exact;
    doc["classification"] = chi.minus_infinity  ? "superattracting"
                            : chi.value < 0.0   ? "attracting"
                            : chi.value > 0.0   ? "expanding"
                                                : "neutral";
    emit(doc, json_out, manifest);
    if (!(json_out.empty() || json_out == "-")) {
        std::cout << "chi = " << (chi.minus_infinity ? "-inf" : std::to_string(chi.value))
                  << " (std error " << chi.std_error << ", "
                  << doc["classification"].get<std::string>() << ")\n";
    }
    manifest.write();
    return 0;
}

int run_markov(const GlobalOptions& g, const std::string& family,
               const std::string& poly_arg, const std::string& measure_json,
               int rotation_n, const std::vector<int>& rot_exps,
               const std::string& points_arg,
               const std::vector<std::string>& permuters,
               const std::string& json_out) {
    ManifestWriter manifest{.command = "markov", .path = g.manifest_path};
    manifest.seed = effective_seed(g);
    json config = load_config(g);
    LambdaMeasure tau =
        measure_from_options(measure_json, 0.75, false, manifest.seed, config);
    if (tau.kind() != LambdaMeasure::Kind::FiniteSupport)
        throw BadConfig("markov decomposition needs a finite-support measure");
    GeneratorFamily fam = family_from_options(family, poly_arg, tau, rotation_n,
                                              rot_exps, points_arg, permuters);

    // single-branch families take the measure atoms as branch-0 generators;
    // multi-branch families spread atoms across branches round-robin unless
    // a third entry names the branch
    std::vector<GeneratorAtom> atoms;
    for (std::size_t i = 0; i < tau.atoms().size(); ++i) {
        const auto& a = tau.atoms()[i];
        int branch = fam.branch_count() > 1
                         ? static_cast<int>(i) % fam.branch_count()
                         : 0;
        atoms.push_back(GeneratorAtom{branch, a.lambda, a.prob});
    }
    auto reports = markov_decompose(fam, atoms);

    manifest.config = {{"family", family}, {"measure", measure_to_json(tau)}};
    json doc;
    doc["schema"] = "stochnewton.markov.v1";
    doc["family"] = family;
    doc["measure"] = measure_to_json(tau);
    json sets = json::array();
    for (const auto& r : reports) {
        json s;
        json pts = json::array();
        for (const auto& p : r.points) pts.push_back(point_to_json(p));
        s["points"] = pts;
        s["period"] = r.period;
        s["cyclic_classes"] = r.cyclic_classes;
        s["stationary_measures"] = r.stationary_measures;
        s["lyapunov"] = r.lyapunov.minus_infinity ? json(nullptr)
                                                  : json(r.lyapunov.value);
        s["lyapunov_minus_infinity"] = r.lyapunov.minus_infinity;
        s["classification"] = to_string(r.classification);
        sets.push_back(s);
    }
    doc["minimal_sets"] = sets;
    emit(doc, json_out, manifest);
    if (!(json_out.empty() || json_out == "-")) {
        for (const auto& r : reports) {
            std::cout << "minimal set (" << r.points.size()
                      << " points), period " << r.period << ", chi "
                      << (r.lyapunov.minus_infinity ? std::string("-inf")
                                                    : std::to_string(r.lyapunov.value))
                      << ", " << to_string(r.classification) << "\n";
        }
    }
    manifest.write();
    return 0;
}

int run_classify(const GlobalOptions& g, const std::string& measure_json,
                 const std::string& json_out) {
    ManifestWriter manifest{.command = "classify", .path = g.manifest_path};
    manifest.seed = effective_seed(g);
    json config = load_config(g);
    LambdaMeasure tau =
        measure_from_options(measure_json, 0.75, false, manifest.seed, config);
    QuadraticClassification cls = classify_quadratic_measure(tau);

    manifest.config = {{"measure", measure_to_json(tau)}};
    json doc;
    doc["schema"] = "stochnewton.classify.v1";
    doc["measure"] = measure_to_json(tau);
    doc["type"] = to_string(cls.type);
    doc["ii_candidate"] = cls.ii_candidate;
    doc["chi_at_zero"] =
        cls.chi.minus_infinity ? json(nullptr) : json(cls.chi.value);
    emit(doc, json_out, manifest);
    if (!(json_out.empty() || json_out == "-")) {
        std::cout << "type " << to_string(cls.type)
                  << (cls.ii_candidate ? " (II-candidate)" : "") << "\n";
    }
    manifest.write();
    return 0;
}

int run_basin_map(const GlobalOptions& g, const std::string& poly_arg,
                  const std::string& measure_json, double radius,
                  bool radius_given, const std::string& bounds,
                  const std::string& res, long runs,
                  const std::string& png_out, const std::string& csv_out,
                  const std::string& json_out) {
    ManifestWriter manifest{.command = "basin-map", .path = g.manifest_path};
    manifest.seed = effective_seed(g);
    json config = load_config(g);
    Polynomial p = poly_from_arg(poly_arg);
    LambdaMeasure tau = measure_from_options(measure_json, radius,
                                             radius_given, manifest.seed, config);

    GridSpec spec;
    if (std::sscanf(bounds.c_str(), "%lf,%lf,%lf,%lf", &spec.x_min, &spec.x_max,
                    &spec.y_min, &spec.y_max) != 4)
        throw BadConfig("bounds must be 'x0,x1,y0,y1'");
    if (std::sscanf(res.c_str(), "%dx%d", &spec.nx, &spec.ny) != 2)
        throw BadConfig("resolution must be 'WxH'");

    EngineConfig cfg;
    auto roots = find_all_roots(p, tau, cfg);
    BasinGrid grid = render_basin(p, tau, spec, runs, roots, cfg);
    grid.measure_config = measure_to_json(tau).dump();

    manifest.config = {{"poly", polynomial_to_json(p)},
                       {"measure", measure_to_json(tau)},
                       {"bounds", bounds},
                       {"res", res},
                       {"runs_per_cell", runs}};
    if (!csv_out.empty()) {
        std::ofstream out(csv_out, std::ios::trunc);
        if (!out) throw Error("cannot open " + csv_out);
        write_basin_csv(grid, out);
        out.close();
        manifest.add_output(csv_out);
    }
    if (!png_out.empty()) {
        write_basin_png(grid, png_out);
        manifest.add_output(png_out);
    }
    if (!json_out.empty()) {
        json doc;
        doc["schema"] = "stochnewton.basin.v1";
        doc["polynomial"] = polynomial_to_json(p);
        doc["measure"] = measure_to_json(tau);
        doc["bounds"] = {spec.x_min, spec.x_max, spec.y_min, spec.y_max};
        doc["resolution"] = {spec.nx, spec.ny};
        doc["runs_per_cell"] = runs;
        char hex[20];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(grid.poly_hash));
        doc["poly_hash"] = hex;
        json rarr = json::array();
        for (const auto& r : roots) rarr.push_back(root_to_json(r));
        doc["roots"] = rarr;
        emit(doc, json_out, manifest);
    } else {
        std::cout << "grid " << spec.nx << "x" << spec.ny << ", " << roots.size()
                  << " roots, " << runs << " runs/cell\n";
    }
    manifest.write();
    return 0;
}

int run_rate_check(const GlobalOptions& g, const std::string& poly_arg,
                   double radius, long traces, const std::string& start,
                   const std::string& json_out) {
    ManifestWriter manifest{.command = "rate-check", .path = g.manifest_path};
    manifest.seed = effective_seed(g);
    json config = load_config(g);
    Polynomial p = poly_from_arg(poly_arg);
    LambdaMeasure tau = measure_from_options("", radius, true,
                                             manifest.seed, config);
    SphericalPoint z0 = parse_point(start);
    if (z0.infinite) throw BadConfig("start must be finite");

    EngineConfig cfg;
    cfg.record_trace = true;
    auto roots = find_all_roots(p, tau, cfg);
    std::vector<RootRecord> known = roots;

    double sum_slope = 0;
    long used = 0;
    for (long i = 0; i < traces; ++i) {
        OrbitOutcome o = run_random_orbit(p, tau, z0.value, known, cfg, i);
        if (o.status != OrbitStatus::ConvergedToRoot) continue;
        if (o.log_distance_trace.size() < 50) continue;
        sum_slope += empirical_rate(o.log_distance_trace).slope;
        ++used;
    }
    double mean_slope = used > 0 ? sum_slope / used : 0.0;

    // closed-form exponent at a simple root for disk measures
    double chi = 0.0;
    bool have_chi = false;
    if (tau.kind() != LambdaMeasure::Kind::FiniteSupport) {
        chi = tau.log_potential(cplx(1, 0));
        have_chi = true;
    }

    manifest.config = {{"poly", polynomial_to_json(p)},
                       {"measure", measure_to_json(tau)},
                       {"traces", traces},
                       {"start", start}};
    json doc;
    doc["schema"] = "stochnewton.rate.v1";
    doc["traces_used"] = used;
    doc["mean_tail_slope"] = mean_slope;
    if (have_chi) doc["chi_simple_root"] = chi;
    emit(doc, json_out, manifest);
    if (!(json_out.empty() || json_out == "-")) {
        std::cout << "mean tail slope " << mean_slope;
        if (have_chi) std::cout << "  (chi at simple roots " << chi << ")";
        std::cout << "\n";
    }
    manifest.write();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random relaxed Newton root finding and random-dynamics analysis"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "base seed (env STOCHNEWTON_SEED)")
        ->each([&](const std::string&) { g.seed_given = true; });
    app.add_option("--manifest", g.manifest_path, "run manifest path");
    app.add_option("--config", g.config_path, "JSON config file");

    // find-roots
    std::string fr_poly, fr_measure, fr_json;
    double fr_radius = 0.75, fr_tol = 1e-10;
    int fr_maxiter = 5000;
    auto* fr = app.add_subcommand("find-roots", "find all roots of a polynomial");
    fr->add_option("--poly", fr_poly, "polynomial string or JSON file")->required();
    fr->add_option("--radius", fr_radius, "uniform disk radius");
    fr->add_option("--measure", fr_measure, "measure JSON");
    fr->add_option("--tolerance", fr_tol, "relative residual tolerance");
    fr->add_option("--max-iter", fr_maxiter, "iteration cap per orbit");
    fr->add_option("--json", fr_json, "JSON output path ('-' = stdout)");

    // trap-demo
    long td_runs = 1000;
    std::string td_json;
    auto* td = app.add_subcommand("trap-demo",
                                  "deterministic trap vs randomized engine");
    td->add_option("--runs", td_runs, "randomized runs");
    td->add_option("--json", td_json, "JSON output path");

    // lyapunov
    std::string ly_family = "relaxed-newton", ly_poly, ly_point = "1,0",
                ly_measure, ly_json;
    double ly_radius = 0.75;
    int ly_mult = 0;
    auto* ly = app.add_subcommand("lyapunov", "exponent at a fixed point");
    ly->add_option("--family", ly_family, "relaxed-newton|quadratic");
    ly->add_option("--poly", ly_poly, "polynomial (relaxed-newton)");
    ly->add_option("--point", ly_point, "'re,im' or 'inf'");
    ly->add_option("--measure", ly_measure, "measure JSON");
    ly->add_option("--radius", ly_radius, "uniform disk radius");
    ly->add_option("--mult", ly_mult, "root multiplicity (0 = auto)");
    ly->add_option("--json", ly_json, "JSON output path");

    // markov
    std::string mk_family = "quadratic", mk_poly, mk_measure, mk_points, mk_json;
    int mk_rot_n = 2;
    std::vector<int> mk_rot_exps;
    std::vector<std::string> mk_permuters;
    auto* mk = app.add_subcommand("markov", "minimal-set decomposition");
    mk->add_option("--family", mk_family,
                   "relaxed-newton|quadratic|rotation|embedded-markov");
    mk->add_option("--poly", mk_poly, "polynomial (relaxed-newton)");
    mk->add_option("--measure", mk_measure, "finite measure JSON")->required();
    mk->add_option("--rotation-n", mk_rot_n, "roots of unity order");
    mk->add_option("--rotation-exponent", mk_rot_exps, "branch exponents");
    mk->add_option("--points", mk_points, "embedded point set 're,im;re,im'");
    mk->add_option("--permuter", mk_permuters, "embedded permuter polynomial");
    mk->add_option("--json", mk_json, "JSON output path");

    // classify
    std::string cl_measure, cl_json;
    auto* cl = app.add_subcommand("classify", "quadratic-family measure type");
    cl->add_option("--measure", cl_measure, "measure JSON")->required();
    cl->add_option("--json", cl_json, "JSON output path");

    // basin-map
    std::string bm_poly, bm_measure, bm_bounds = "-2,2,-2,2", bm_res = "64x64",
                bm_png, bm_csv, bm_json;
    double bm_radius = 0.75;
    long bm_runs = 20;
    auto* bm = app.add_subcommand("basin-map", "convergence-probability grid");
    bm->add_option("--poly", bm_poly, "polynomial")->required();
    bm->add_option("--measure", bm_measure, "measure JSON");
    bm->add_option("--radius", bm_radius, "uniform disk radius");
    bm->add_option("--bounds", bm_bounds, "x0,x1,y0,y1");
    bm->add_option("--res", bm_res, "WxH");
    bm->add_option("--runs", bm_runs, "runs per cell");
    bm->add_option("--png", bm_png, "PNG output path");
    bm->add_option("--csv", bm_csv, "CSV output path");
    bm->add_option("--json", bm_json, "JSON summary path");

    // rate-check
    std::string rc_poly = "-1 + z^2", rc_start = "100,0", rc_json;
    double rc_radius = 0.75;
    long rc_traces = 200;
    auto* rc = app.add_subcommand("rate-check",
                                  "empirical contraction rate vs exponent");
    rc->add_option("--poly", rc_poly, "polynomial");
    rc->add_option("--radius", rc_radius, "uniform disk radius");
    rc->add_option("--traces", rc_traces, "number of traced orbits");
    rc->add_option("--start", rc_start, "orbit start 're,im'");
    rc->add_option("--json", rc_json, "JSON output path");

    // let --seed/--manifest/--config appear after the subcommand name
    for (CLI::App* sub : {fr, td, ly, mk, cl, bm, rc}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fr->parsed())
            return run_find_roots(g, fr_poly, fr_measure, fr_radius,
                                  fr->count("--radius") > 0, fr_tol,
                                  fr_maxiter, fr_json);
        if (td->parsed()) return run_trap_demo(g, td_runs, td_json);
        if (ly->parsed())
            return run_lyapunov(g, ly_family, ly_poly, ly_point, ly_measure,
                                ly_radius, ly->count("--radius") > 0, ly_mult,
                                ly_json);
        if (mk->parsed())
            return run_markov(g, mk_family, mk_poly, mk_measure, mk_rot_n,
                              mk_rot_exps, mk_points, mk_permuters, mk_json);
        if (cl->parsed()) return run_classify(g, cl_measure, cl_json);
        if (bm->parsed())
            return run_basin_map(g, bm_poly, bm_measure, bm_radius,
                                 bm->count("--radius") > 0, bm_bounds, bm_res,
                                 bm_runs, bm_png, bm_csv, bm_json);
        if (rc->parsed())
            return run_rate_check(g, rc_poly, rc_radius, rc_traces, rc_start,
                                  rc_json);
    } catch (const BadConfig& e) {
        std::cerr << json{{"schema", "stochnewton.error.v1"},
                          {"type", "BadConfig"},
                          {"message", e.what()}}
                         .dump()
                  << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << json{{"schema", "stochnewton.error.v1"},
                          {"type", "AlgorithmicFailure"},
                          {"message", e.what()}}
                         .dump()
                  << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"schema", "stochnewton.error.v1"},
                          {"type", "Unexpected"},
                          {"message", e.what()}}
                         .dump()
                  << "\n";
        return 2;
    }
    return 1;
}
