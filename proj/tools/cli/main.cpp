#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace {

using gaussmink::cli::Options;

void add_common(CLI::App& cmd, Options& opt) {
  cmd.add_option("--spec", opt.spec, "problem JSON file")->required();
  cmd.add_option("--out", opt.out, "output directory")->capture_default_str();
  cmd.add_option("--seed", opt.seed, "Monte Carlo seed (default: spec or 0)");
  cmd.add_option("--samples", opt.samples, "Monte Carlo sample count");
  cmd.add_option("--path", opt.path, "estimator path")->check(CLI::IsMember({"det2d", "mc", "auto"}));
  cmd.add_option("--p", opt.p, "override the exponent p");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete L_p Gaussian Minkowski problem on C-pseudo-cones"};
  app.require_subcommand(1);

  Options opt;
  std::string suite;
  bool inject = false;
  std::vector<double> h;

  auto* solve = app.add_subcommand("solve", "solve the normalized problem for a spec");
  add_common(*solve, opt);
  solve->add_option("--tol", opt.tol, "relative residual tolerance");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(*verify, opt);
  verify->add_option("--suite", suite, "variational | oracles | inequalities | tail")
      ->required()
      ->check(CLI::IsMember({"variational", "oracles", "inequalities", "tail"}));
  verify->add_flag("--inject-violation", inject, "test mode: swap the sides of every inequality");

  auto* nonunique = app.add_subcommand("nonunique", "construct two shapes with equal L_p Gaussian surface area measure");
  add_common(*nonunique, opt);
  nonunique->add_option("--theta", opt.theta, "level fraction in (0,1)")->check(CLI::Range(0.0, 1.0));
  nonunique->add_option("--tol", opt.tol, "relative root-finding tolerance");

  auto* measure = app.add_subcommand("measure", "Gaussian volume, covolume and S_p of a Wulff shape");
  measure->set_help_flag("--help", "Print this help message and exit");
  add_common(*measure, opt);
  measure->add_option("--h", h, "support values, one per direction")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gaussmink::cli::kExitInvalid;
  }

  if (*solve) return gaussmink::cli::cmd_solve(opt, std::cerr);
  if (*verify) return gaussmink::cli::cmd_verify(opt, suite, inject, std::cerr);
  if (*nonunique) return gaussmink::cli::cmd_nonunique(opt, std::cerr);
  return gaussmink::cli::cmd_measure(opt, h, std::cout);
}
