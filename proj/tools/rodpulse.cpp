#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "rodpulse/cli.hpp"

namespace {

using rodpulse::BoundaryKind;
namespace cli = rodpulse::cli;

void add_common(CLI::App& sub, cli::CommandOptions& options) {
  sub.add_option("--config", options.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  sub.add_option("--output", options.output_dir, "output directory (overrides output_dir)");
  sub.add_option("--mode", options.mode, "boundary convention (overrides boundary_mode)")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, BoundaryKind>{{"paper", BoundaryKind::Paper},
                                              {"physical", BoundaryKind::Physical}}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Impulse response of an elastic rod with end masses"};
  app.require_subcommand(1);

  cli::CommandOptions options;
  cli::PointMassOptions pm;
  int status = cli::kExitOk;

  auto* simulate = app.add_subcommand("simulate", "finite-difference run; writes u and tension CSVs");
  auto* invert = app.add_subcommand("invert", "numerical Laplace inversion; writes a u CSV");
  auto* series = app.add_subcommand("series", "term-by-term residue series; writes a u CSV");
  auto* validate = app.add_subcommand("validate", "cross-validation report; exit 1 on a gating failure");
  auto* point = app.add_subcommand("point-mass", "free particle or oscillator impulse response");
  for (auto* sub : {simulate, invert, series, validate, point}) add_common(*sub, options);

  point->add_option("--model", pm.model, "free or oscillator")
      ->transform(CLI::CheckedTransformer(std::map<std::string, cli::PointMassModel>{
          {"free", cli::PointMassModel::Free}, {"oscillator", cli::PointMassModel::Oscillator}}));
  point->add_option("--mass", pm.mass, "particle mass m");
  point->add_option("--damping", pm.damping, "damping b (oscillator)");
  point->add_option("--stiffness", pm.stiffness, "spring constant k (oscillator)");
  point->add_option("--t-end", pm.t_end, "last sample time");
  point->add_option("--samples", pm.samples, "number of samples including t = 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfigError;
  }

  auto run = [&](auto&& command) { status = cli::guarded(command, std::cerr); };
  if (*simulate) run([&] { return cli::cmd_simulate(options, std::cout); });
  if (*invert) run([&] { return cli::cmd_invert(options, std::cout); });
  if (*series) run([&] { return cli::cmd_series(options, std::cout); });
  if (*validate) run([&] { return cli::cmd_validate(options, std::cout); });
  if (*point) run([&] { return cli::cmd_point_mass(options, pm, std::cout); });
  return status;
}
