#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaussmink/solver.hpp"

namespace gaussmink::cli {

/// Schema violation; the message starts with the JSON path of the offending field.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which top-level fields a command needs. Unknown fields are always rejected.
struct SpecRequirements {
  bool directions = true;
  bool weights = true;
  bool p = true;
};

/// A problem document:
///   { "cone": {"generators": [[...], ...]},
///     "directions": [[...], ...], "weights": [...], "p": number,
///     "solver": {...}, "estimator": {...} }
struct ProblemSpec {
  std::vector<Vec> generators;
  std::vector<Vec> directions;
  std::optional<Vec> weights;
  std::optional<double> p;
  SolverConfig solver;
  EstimatorConfig estimator;

  int dim() const { return generators.empty() ? 0 : static_cast<int>(generators.front().size()); }
};

ProblemSpec parse_problem(const nlohmann::json& doc, const SpecRequirements& req = {});
ProblemSpec load_problem(const std::filesystem::path& path, const SpecRequirements& req = {});

EstimatorPath parse_path(const std::string& name);  // "det2d", "mc" or "auto"
std::string path_name(EstimatorPath path);

nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const MeasureEstimate& e);

}  // namespace gaussmink::cli
