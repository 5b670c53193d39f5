#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgsolver/io.hpp"

namespace {

using sg::io::json;

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitVerification = 4;

struct RunConfig {
    int N = 3;
    int m = 4;
    double r = 1.5, s = 1.8, q = 4.0;
    std::string lambda = "auto";
    std::string eta = "auto";
    std::string family = "power";
    double alpha = 1.0, beta = 4.0;   // example_f1 exponents
    std::string f_expr, F_expr;       // custom-expression family
    std::vector<double> coeff = {1.0};
    double t1 = 1.0;                  // plateau level for the rho2 estimate
    double tol_residual = 1e-8;
    double tol_residual_rel = 1e-8;
    long max_iterations = 50000;
    int path_points = 33;
    int doubling_cap = 200;
    long seed = 0;
    std::string out_dir = "out";
};

void apply_config_file(RunConfig& c, const std::string& path) {
    json j = sg::io::read_json(path);
    auto num_or_auto = [](const json& v) -> std::string {
        return v.is_string() ? v.get<std::string>() : sg::io::json(v.get<double>()).dump();
    };
    if (j.contains("N")) c.N = j["N"].get<int>();
    if (j.contains("m")) c.m = j["m"].get<int>();
    if (j.contains("r")) c.r = j["r"].get<double>();
    if (j.contains("s")) c.s = j["s"].get<double>();
    if (j.contains("q")) c.q = j["q"].get<double>();
    if (j.contains("lambda")) c.lambda = num_or_auto(j["lambda"]);
    if (j.contains("eta")) c.eta = num_or_auto(j["eta"]);
    if (j.contains("family")) c.family = j["family"].get<std::string>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("beta")) c.beta = j["beta"].get<double>();
    if (j.contains("f")) c.f_expr = j["f"].get<std::string>();
    if (j.contains("F")) c.F_expr = j["F"].get<std::string>();
    if (j.contains("coeff")) c.coeff = j["coeff"].get<std::vector<double>>();
    if (j.contains("t1")) c.t1 = j["t1"].get<double>();
    if (j.contains("tol_residual")) c.tol_residual = j["tol_residual"].get<double>();
    if (j.contains("tol_residual_rel")) c.tol_residual_rel = j["tol_residual_rel"].get<double>();
    if (j.contains("max_iterations")) c.max_iterations = j["max_iterations"].get<long>();
    if (j.contains("path_points")) c.path_points = j["path_points"].get<int>();
    if (j.contains("doubling_cap")) c.doubling_cap = j["doubling_cap"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<long>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
}

// "auto" or a plain number
bool parse_auto(const std::string& text, double& value) {
    if (text == "auto") return true;
    std::size_t pos = 0;
    value = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("expected a number or \"auto\": " + text);
    return false;
}

sg::SolverOptions solver_options(const RunConfig& c) {
    sg::SolverOptions o;
    o.tol_residual = c.tol_residual;
    o.tol_residual_rel = c.tol_residual_rel;
    o.max_iterations = c.max_iterations;
    return o;
}

sg::Nonlinearity make_family(const RunConfig& c) {
    if (c.family == "example_f1") return sg::example_f1(c.alpha, c.beta, c.coeff);
    if (c.family == "custom-expression")
        return sg::expression_problem(c.f_expr, c.F_expr, c.coeff);
    throw std::invalid_argument("unknown nonlinearity family: " + c.family);
}

int cmd_build_gasket(const RunConfig& c) {
    auto level = sg::build_level(c.N, c.m);
    const std::filesystem::path dir = c.out_dir;
    sg::io::write_json(dir / "gasket.json", sg::io::gasket_json(*level));
    sg::io::write_text(dir / "vertices.csv", sg::io::vertices_csv(*level));
    sg::io::write_text(dir / "edges.csv", sg::io::edges_csv(*level));
    std::printf("gasket N=%d m=%d: %d vertices, %d edges, %d cells -> %s\n", c.N, c.m,
                level->vertex_count(), level->edge_count(), level->cell_count(),
                dir.string().c_str());
    return kExitOk;
}

int cmd_thresholds(const RunConfig& c, const std::string& json_out) {
    auto consts = sg::compute_constants(c.N, c.q, c.s);
    std::printf("c       %.17g\n", consts.c);
    std::printf("R       %.17g\n", consts.R);
    std::printf("m       %.17g\n", consts.barrier);
    std::printf("Lambda  %.17g\n", consts.Lambda);

    sg::ThresholdReport report;
    report.constants = consts;
    report.points = c.N;
    report.level = c.m;

    if (c.family == "power") {
        double lam = 0.0;
        const bool auto_lambda = parse_auto(c.lambda, lam);
        if (auto_lambda) lam = 0.5 * consts.Lambda;
        std::printf("lambda  %.17g%s\n", lam, auto_lambda ? "  (auto: Lambda/2)" : "");

        sg::ProblemSpec spec;
        spec.points = c.N;
        spec.level = c.m;
        spec.r = c.r;
        spec.s = c.s;
        spec.q = c.q;
        spec.lambda = lam;
        auto level = sg::build_level(c.N, c.m);
        auto ul = sg::compute_u_lambda(spec, level, solver_options(c));
        report.lambda = lam;
        report.lambda_resolved = true;
        report.degenerate = ul.degenerate;
        report.u_norm = ul.norm;
        report.psi_value = ul.psi_value;
        report.identity_gap_rel = ul.identity_gap_rel;
        report.norm_bound = ul.norm_bound;
        report.norm_bound_ok = ul.norm_bound_ok;
        report.norm_below_R = ul.norm < consts.R;

        std::printf("u_lambda_norm      %.17g\n", ul.norm);
        std::printf("psi_value          %.17g\n", ul.psi_value);
        std::printf("degenerate         %s\n", ul.degenerate ? "yes" : "no");
        if (!ul.degenerate) {
            std::printf("identity_gap_rel   %.17g\n", ul.identity_gap_rel);
            std::printf("norm_bound         %.17g (holds: %s)\n", ul.norm_bound,
                        ul.norm_bound_ok ? "yes" : "no");
            std::printf("norm_below_R       %s\n", ul.norm < consts.R ? "yes" : "no");
            auto etas = sg::eta_thresholds(spec, consts, ul.u);
            report.etas = etas;
            report.etas_valid = true;
            std::printf("eta1    %.17g\n", etas.eta1);
            std::printf("eta2    %.17g\n", etas.eta2);
            std::printf("eta     %.17g\n", etas.eta);
        }
    } else {
        auto level = sg::build_level(c.N, c.m);
        auto est = sg::estimate_rho2(make_family(c), c.t1, level);
        std::printf("rho2_lower        %.17g\n", est.rho2_lower);
        std::printf("Lambda_upper      %.17g\n", est.Lambda_upper);
        std::printf("truncated_ratio   %.17g\n", est.truncated_ratio);
        std::printf("plateau_vertices  %d\n", est.plateau_vertices);
        report.notes = "rho2_lower " + std::to_string(est.rho2_lower) + " for family " + c.family;
    }

    if (!json_out.empty()) sg::io::write_json(json_out, sg::io::threshold_json(report));
    return kExitOk;
}

int cmd_three_solutions(const RunConfig& c) {
    if (c.family != "power")
        throw std::invalid_argument(
            "three-solutions runs the power family; got family=" + c.family);

    sg::ProblemSpec spec;
    spec.points = c.N;
    spec.level = c.m;
    spec.r = c.r;
    spec.s = c.s;
    spec.q = c.q;
    sg::PipelineOptions opt;
    opt.solver = solver_options(c);
    opt.path_points = c.path_points;
    opt.doubling_cap = c.doubling_cap;
    opt.auto_lambda = parse_auto(c.lambda, spec.lambda);
    opt.auto_eta = parse_auto(c.eta, spec.eta);

    auto result = sg::three_solutions(spec, opt);

    const std::filesystem::path dir = c.out_dir;
    json root = sg::io::result_json(result);
    root["seed"] = c.seed;
    sg::io::write_json(dir / "result.json", root);
    sg::io::write_json(dir / "thresholds.json", sg::io::threshold_json(result.thresholds));
    for (std::size_t i = 0; i < result.solutions.size(); ++i) {
        json s = sg::io::solution_json(result.solutions[i], result.spec);
        s["thresholds"] = sg::io::threshold_json(result.thresholds);
        s["regime"] = {{"in_regime", result.in_regime}, {"status", result.status}};
        sg::io::write_json(dir / ("solution_" + std::to_string(i + 1) + ".json"), s);
        sg::io::write_text(dir / ("solution_" + std::to_string(i + 1) + "_values.csv"),
                           sg::io::function_values_csv(result.solutions[i].u));
    }
    sg::io::write_text(dir / "summary.csv", sg::io::solutions_summary_csv(result));

    for (const auto& s : result.solutions)
        std::printf("%-20s I=%.12e residual=%.3e converged=%s%s\n", s.kind.c_str(),
                    s.energy_value, s.residual, s.converged ? "yes" : "no",
                    s.constrained ? " (constrained)" : "");
    std::printf("ordering I(u1)<0<=I(u2)<m<=I(u3): %s  [status: %s]\n",
                result.ordering.all() ? "holds" : "violated", result.status.c_str());
    if (!result.detail.empty()) std::printf("detail: %s\n", result.detail.c_str());

    if (result.status == "ok") return kExitOk;
    if (result.status == "out-of-regime")
        return result.all_converged() ? kExitOk : kExitNoConvergence;
    if (result.status == "falsified") return kExitVerification;
    return kExitNoConvergence;
}

int cmd_verify(const RunConfig& c, const std::string& report_path, double tol) {
    auto loaded = sg::io::solution_from_json(sg::io::read_json(report_path));
    auto level = sg::build_level(loaded.spec.points, loaded.spec.level);
    sg::FunctionalContext ctx(level, sg::power_problem(loaded.spec));
    sg::DiscreteFunction u(level, loaded.rep.u.values(), loaded.rep.u.zero_boundary());

    const double I = ctx.value(u);
    const double res = sg::energy_norm(ctx.energy_gradient(u));
    const bool energy_ok = std::abs(I - loaded.rep.energy_value) <=
                           tol * (1.0 + std::abs(loaded.rep.energy_value));
    const bool residual_ok = std::abs(res - loaded.rep.residual) <= tol * (1.0 + loaded.rep.residual);
    const bool criticality_ok =
        !loaded.rep.converged || loaded.rep.constrained ||
        (res <= c.tol_residual && res <= c.tol_residual_rel * sg::energy_norm(u));

    std::printf("energy     stored %.17g recomputed %.17g  %s\n", loaded.rep.energy_value, I,
                energy_ok ? "ok" : "MISMATCH");
    std::printf("residual   stored %.17g recomputed %.17g  %s\n", loaded.rep.residual, res,
                residual_ok ? "ok" : "MISMATCH");
    std::printf("critical   %s\n", criticality_ok ? "ok" : "VIOLATED");
    return (energy_ok && residual_ok && criticality_ok) ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    // first pass: a config file supplies defaults, flags override
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(cfg, argv[i + 1]);
            } catch (const std::exception& ex) {
                std::fprintf(stderr, "error: bad config file: %s\n", ex.what());
                return kExitPrecondition;
            }
        }

    CLI::App app{"three-solution variational solver on the Sierpinski gasket"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its keys");

    auto add_common = [&](CLI::App* sub) {
        // accepted here so the flag can follow the subcommand; the value was
        // already consumed by the pre-scan above
        sub->add_option("--config", config_path, "JSON config file; flags override its keys");
        sub->add_option("--N", cfg.N, "simplex corner count")->capture_default_str();
        sub->add_option("--m", cfg.m, "graph approximation level")->capture_default_str();
        sub->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "run seed, recorded in outputs")->capture_default_str();
    };
    auto add_problem = [&](CLI::App* sub) {
        sub->add_option("--r", cfg.r)->capture_default_str();
        sub->add_option("--s", cfg.s)->capture_default_str();
        sub->add_option("--q", cfg.q)->capture_default_str();
        sub->add_option("--lambda", cfg.lambda, "number or \"auto\" (= Lambda/2)")
            ->capture_default_str();
        sub->add_option("--eta", cfg.eta, "number or \"auto\" (= eta_lambda/2)")
            ->capture_default_str();
        sub->add_option("--tol-residual", cfg.tol_residual)->capture_default_str();
        sub->add_option("--tol-residual-rel", cfg.tol_residual_rel)->capture_default_str();
        sub->add_option("--max-iterations", cfg.max_iterations)->capture_default_str();
    };

    auto* bg = app.add_subcommand("build-gasket", "emit gasket JSON and plot CSVs");
    add_common(bg);

    auto* th = app.add_subcommand("thresholds", "print the constructive constants");
    add_common(th);
    add_problem(th);
    std::string thresholds_json_out;
    th->add_option("--json", thresholds_json_out, "also write the table as JSON");
    th->add_option("--family", cfg.family, "power | example_f1 | custom-expression")
        ->capture_default_str();
    th->add_option("--alpha", cfg.alpha)->capture_default_str();
    th->add_option("--beta", cfg.beta)->capture_default_str();
    th->add_option("--f", cfg.f_expr, "custom f(t, a) expression");
    th->add_option("--F", cfg.F_expr, "custom primitive expression (empty: quadrature)");
    th->add_option("--coeff", cfg.coeff, "per-vertex coefficients (single value broadcasts)");
    th->add_option("--t1", cfg.t1, "plateau level for the rho2 witness")->capture_default_str();

    auto* ts = app.add_subcommand("three-solutions", "run the full three-solution pipeline");
    add_common(ts);
    add_problem(ts);
    ts->add_option("--path-points", cfg.path_points)->capture_default_str();
    ts->add_option("--doubling-cap", cfg.doubling_cap)->capture_default_str();
    ts->add_option("--family", cfg.family)->capture_default_str();

    auto* vf = app.add_subcommand("verify", "recheck a serialized solution report");
    std::string report_path;
    double verify_tol = 1e-8;
    vf->add_option("--config", config_path, "JSON config file; flags override its keys");
    vf->add_option("--report", report_path, "solution JSON file")->required();
    vf->add_option("--tol", verify_tol, "relative comparison tolerance")->capture_default_str();
    vf->add_option("--tol-residual", cfg.tol_residual)->capture_default_str();
    vf->add_option("--tol-residual-rel", cfg.tol_residual_rel)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitPrecondition;
    }

    try {
        if (bg->parsed()) return cmd_build_gasket(cfg);
        if (th->parsed()) return cmd_thresholds(cfg, thresholds_json_out);
        if (ts->parsed()) return cmd_three_solutions(cfg);
        if (vf->parsed()) return cmd_verify(cfg, report_path, verify_tol);
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitPrecondition;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitNoConvergence;
    }
    return kExitPrecondition;
}
