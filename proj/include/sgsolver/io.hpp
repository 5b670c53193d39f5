#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sgsolver/pipeline.hpp"

namespace sg::io {

// ordered_json keeps insertion order, so identical runs emit identical bytes
using json = nlohmann::ordered_json;

json gasket_json(const GasketLevel& g);
std::string vertices_csv(const GasketLevel& g);
std::string edges_csv(const GasketLevel& g);

json function_json(const DiscreteFunction& u);
DiscreteFunction function_from_json(const json& j);

json problem_json(const ProblemSpec& spec);
ProblemSpec problem_from_json(const json& j);

// Core solution record: the problem block plus the solution itself; the
// pipeline command adds thresholds and regime blocks on top.
json solution_json(const SolutionReport& rep, const ProblemSpec& spec);

struct LoadedSolution {
    ProblemSpec spec;
    SolutionReport rep;
};
LoadedSolution solution_from_json(const json& j);

json threshold_json(const ThresholdReport& t);
json result_json(const ThreeSolutionsResult& r);

std::string solutions_summary_csv(const ThreeSolutionsResult& r);
std::string function_values_csv(const DiscreteFunction& u);

void write_text(const std::filesystem::path& p, const std::string& text);
std::string read_text(const std::filesystem::path& p);
void write_json(const std::filesystem::path& p, const json& j);
json read_json(const std::filesystem::path& p);

} // namespace sg::io
