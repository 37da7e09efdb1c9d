#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gaussmink::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNotConverged = 3;

struct Options {
  std::filesystem::path spec;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<std::string> path;  // det2d | mc
  std::optional<double> p;
  std::optional<double> tol;
  std::optional<double> theta;
};

int cmd_solve(const Options& opt, std::ostream& log);
/// suite ∈ {variational, oracles, inequalities, tail}. `inject_violation` swaps
/// the sides of every inequality check (harness self-test).
int cmd_verify(const Options& opt, const std::string& suite, bool inject_violation, std::ostream& log);
int cmd_nonunique(const Options& opt, std::ostream& log);
int cmd_measure(const Options& opt, const std::vector<double>& h, std::ostream& log);

}  // namespace gaussmink::cli
