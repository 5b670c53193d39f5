#include "sgsolver/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sgsolver/numeric.hpp"

namespace sg::io {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

json gasket_json(const GasketLevel& g) {
    json j;
    j["points"] = g.points;
    j["level"] = g.level;
    j["denominator"] = g.denominator;
    j["energy_scale"] = g.energy_scale;
    json verts = json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
        auto span = g.coord(v);
        verts.push_back(json(std::vector<std::int64_t>(span.begin(), span.end())));
    }
    j["vertices"] = std::move(verts);
    j["boundary"] = g.boundary;
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back({e[0], e[1]});
    j["edges"] = std::move(edges);
    json cells = json::array();
    for (int c = 0; c < g.cell_count(); ++c) {
        auto span = g.cell(c);
        cells.push_back(json(std::vector<int>(span.begin(), span.end())));
    }
    j["cells"] = std::move(cells);
    j["weight_numerators"] = g.cell_incidence;
    std::int64_t denom = 1;
    for (int i = 0; i <= g.level; ++i) denom *= g.points;
    j["weight_denominator"] = denom;
    j["weights"] = g.weights;
    return j;
}

std::string vertices_csv(const GasketLevel& g) {
    std::string out = "index";
    for (int d = 0; d + 1 < g.points; ++d) out += ",x" + std::to_string(d + 1);
    out += ",boundary\n";
    for (int v = 0; v < g.vertex_count(); ++v) {
        out += std::to_string(v);
        for (double c : g.cartesian(v)) out += "," + fmt(c);
        out += g.is_boundary(v) ? ",1\n" : ",0\n";
    }
    return out;
}

std::string edges_csv(const GasketLevel& g) {
    std::string out = "a,b\n";
    for (const auto& e : g.edges)
        out += std::to_string(e[0]) + "," + std::to_string(e[1]) + "\n";
    return out;
}

json function_json(const DiscreteFunction& u) {
    json j;
    j["level_ref"] = {{"N", u.level().points}, {"m", u.level().level}};
    j["zero_boundary"] = u.zero_boundary();
    j["values"] = u.values();
    return j;
}

DiscreteFunction function_from_json(const json& j) {
    const auto& ref = j.at("level_ref");
    auto level = build_level(ref.at("N").get<int>(), ref.at("m").get<int>());
    return DiscreteFunction(level, j.at("values").get<std::vector<double>>(),
                            j.at("zero_boundary").get<bool>());
}

json problem_json(const ProblemSpec& spec) {
    json j;
    j["N"] = spec.points;
    j["m"] = spec.level;
    j["r"] = spec.r;
    j["s"] = spec.s;
    j["q"] = spec.q;
    j["lambda"] = spec.lambda;
    j["eta"] = spec.eta;
    return j;
}

ProblemSpec problem_from_json(const json& j) {
    ProblemSpec spec;
    spec.points = j.at("N").get<int>();
    spec.level = j.at("m").get<int>();
    spec.r = j.at("r").get<double>();
    spec.s = j.at("s").get<double>();
    spec.q = j.at("q").get<double>();
    spec.lambda = j.at("lambda").get<double>();
    spec.eta = j.at("eta").get<double>();
    spec.validate();
    return spec;
}

json solution_json(const SolutionReport& rep, const ProblemSpec& spec) {
    json j;
    j["problem"] = problem_json(spec);
    j["kind"] = rep.kind;
    j["energy"] = rep.energy_value;
    j["residual"] = rep.residual;
    j["converged"] = rep.converged;
    j["constrained"] = rep.constrained;
    j["iterations"] = rep.iterations;
    j["note"] = rep.note;
    j["u"] = function_json(rep.u);
    j["wall_time_ms"] = rep.wall_time_ms;
    return j;
}

LoadedSolution solution_from_json(const json& j) {
    LoadedSolution out{problem_from_json(j.at("problem")),
                       SolutionReport{function_from_json(j.at("u"))}};
    out.rep.kind = j.at("kind").get<std::string>();
    out.rep.energy_value = j.at("energy").get<double>();
    out.rep.residual = j.at("residual").get<double>();
    out.rep.converged = j.at("converged").get<bool>();
    out.rep.constrained = j.at("constrained").get<bool>();
    out.rep.iterations = j.at("iterations").get<long>();
    out.rep.note = j.value("note", std::string{});
    out.rep.wall_time_ms = j.value("wall_time_ms", 0.0);
    return out;
}

json threshold_json(const ThresholdReport& t) {
    json j;
    j["c"] = t.constants.c;
    j["R"] = t.constants.R;
    j["m"] = t.constants.barrier;
    j["Lambda"] = t.constants.Lambda;
    j["N"] = t.points;
    j["level"] = t.level;
    if (t.lambda_resolved) {
        json l;
        l["lambda"] = t.lambda;
        l["degenerate"] = t.degenerate;
        l["u_norm"] = t.u_norm;
        l["psi_value"] = t.psi_value;
        l["identity_gap_rel"] = t.identity_gap_rel;
        l["norm_bound"] = t.norm_bound;
        l["norm_bound_ok"] = t.norm_bound_ok;
        l["norm_below_R"] = t.norm_below_R;
        j["sublinear_stage"] = std::move(l);
    }
    if (t.etas_valid) {
        json e;
        e["eta1"] = t.etas.eta1;
        e["eta2"] = t.etas.eta2;
        e["eta"] = t.etas.eta;
        j["eta_thresholds"] = std::move(e);
    }
    if (!t.notes.empty()) j["notes"] = t.notes;
    return j;
}

json result_json(const ThreeSolutionsResult& r) {
    json j;
    j["problem"] = problem_json(r.spec);
    j["status"] = r.status;
    j["detail"] = r.detail;
    j["in_regime"] = r.in_regime;
    j["doublings"] = r.doublings;
    j["thresholds"] = threshold_json(r.thresholds);
    json ord;
    ord["u1_negative"] = r.ordering.u1_negative;
    ord["u2_nonnegative"] = r.ordering.u2_nonnegative;
    ord["u2_below_barrier"] = r.ordering.u2_below_barrier;
    ord["u3_above_barrier"] = r.ordering.u3_above_barrier;
    ord["all"] = r.ordering.all();
    j["ordering"] = std::move(ord);
    json d;
    d["sup_12"] = r.sup_dist_12;
    d["sup_13"] = r.sup_dist_13;
    d["sup_23"] = r.sup_dist_23;
    j["sup_distances"] = std::move(d);
    json sols = json::array();
    for (const auto& s : r.solutions) sols.push_back(solution_json(s, r.spec));
    j["solutions"] = std::move(sols);
    return j;
}

std::string solutions_summary_csv(const ThreeSolutionsResult& r) {
    std::string out = "kind,energy,residual,converged,constrained,iterations,norm,sup\n";
    for (const auto& s : r.solutions) {
        out += s.kind + "," + fmt(s.energy_value) + "," + fmt(s.residual) + "," +
               (s.converged ? "1" : "0") + "," + (s.constrained ? "1" : "0") + "," +
               std::to_string(s.iterations) + "," + fmt(energy_norm(s.u)) + "," +
               fmt(s.u.sup_norm()) + "\n";
    }
    return out;
}

std::string function_values_csv(const DiscreteFunction& u) {
    const GasketLevel& g = u.level();
    std::string out = "index";
    for (int d = 0; d + 1 < g.points; ++d) out += ",x" + std::to_string(d + 1);
    out += ",value\n";
    for (int v = 0; v < g.vertex_count(); ++v) {
        out += std::to_string(v);
        for (double c : g.cartesian(v)) out += "," + fmt(c);
        out += "," + fmt(u[v]) + "\n";
    }
    return out;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + p.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + p.string());
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + p.string());
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

void write_json(const std::filesystem::path& p, const json& j) {
    write_text(p, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& p) {
    return json::parse(read_text(p));
}

} // namespace sg::io
