// Command-line front end: solve / validate from a JSON run configuration.
//
// Exit status: 0 success, 1 solver error, 2 configuration error,
// 3 kinetic law fails admissibility.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include <semiclassical/semiclassical.hpp>

namespace sc = semiclassical;

namespace {

constexpr int exit_solver = 1;
constexpr int exit_config = 2;
constexpr int exit_invalid = 3;

void print_report(const sc::ValidationReport& report, std::ostream& os) {
  os << "kinetic law: " << report.law
     << (report.smoothness == sc::Smoothness::non_smooth_at_zero ? " (non_smooth_at_zero)" : "") << '\n';
  for (const auto& check : report.checks) {
    os << "  [" << (check.passed ? "pass" : "FAIL") << "] " << check.id << ": " << check.description;
    if (!check.passed) {
      os << "  (worst sample p = " << check.worst_sample << ", violation " << check.worst_violation << ")";
    }
    os << '\n';
  }
  for (const auto& note : report.notes) os << "  note: " << note << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound states of H = T(p) + V(x): classical, WKBJ and Fourier-grid solutions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string pipeline = "compare";
  std::string out_dir;

  auto* solve = app.add_subcommand("solve", "run a pipeline and write its tables");
  solve->add_option("--config", config_path, "run configuration (JSON)")->required();
  solve->add_option("--pipeline", pipeline, "classical | wkbj | fgh | compare")
      ->check(CLI::IsMember({"classical", "wkbj", "fgh", "compare"}));
  solve->add_option("--out", out_dir, "output directory (overrides outputs.directory)");

  auto* validate = app.add_subcommand("validate", "check the kinetic law and settings; writes nothing");
  validate->add_option("--config", config_path, "run configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_config;
  }

  sc::RunConfig config;
  try {
    config = sc::load_config(config_path);
  } catch (const sc::ConfigError& e) {
    std::cerr << "config error in " << config_path << ": " << e.what() << '\n';
    return exit_config;
  }

  try {
    const sc::ValidationReport report = sc::validate(config);
    if (*validate) {
      print_report(report, std::cout);
      return report.all_passed() ? 0 : exit_invalid;
    }
    if (!report.all_passed()) {
      print_report(report, std::cerr);
      return exit_invalid;
    }
    const std::filesystem::path directory = out_dir.empty() ? config.output_directory : std::filesystem::path(out_dir);
    for (const auto& path : sc::run_solve(config, sc::parse_pipeline(pipeline), directory)) {
      std::cout << path.string() << '\n';
    }
  } catch (const sc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const sc::Error& e) {
    std::cerr << "error [" << e.name() << "]: " << e.what() << '\n';
    return exit_solver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_solver;
  }
  return 0;
}
