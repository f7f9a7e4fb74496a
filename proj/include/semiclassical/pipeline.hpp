#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "classical.hpp"
#include "compare.hpp"
#include "config.hpp"
#include "fgh.hpp"
#include "kinetics.hpp"
#include "wkbj.hpp"

namespace semiclassical {

enum class Pipeline { classical, wkbj, fgh, compare };

inline Pipeline parse_pipeline(std::string_view name) {
  if (name == "classical") return Pipeline::classical;
  if (name == "wkbj") return Pipeline::wkbj;
  if (name == "fgh") return Pipeline::fgh;
  if (name == "compare") return Pipeline::compare;
  throw ConfigError("unknown pipeline '" + std::string(name) + "'");
}

constexpr std::string_view pipeline_name(Pipeline p) noexcept {
  switch (p) {
    case Pipeline::classical: return "classical";
    case Pipeline::wkbj: return "wkbj";
    case Pipeline::fgh: return "fgh";
    case Pipeline::compare: return "compare";
  }
  return "unknown";
}

/// Admissibility of the kinetic law plus sanity of the numeric settings.
/// Writes nothing.
inline ValidationReport validate(const RunConfig& config) {
  const KineticLaw law = make_kinetic(config.kinetic);
  ValidationReport report =
      validate_admissibility(law, symmetric_momentum_grid(config.validation_p_max, config.validation_samples));

  auto sanity = [&](std::string id, std::string description, bool ok) {
    ConditionCheck check{std::move(id), std::move(description)};
    check.passed = ok;
    if (!ok) check.worst_violation = 1.0;
    report.checks.push_back(std::move(check));
  };
  sanity("config.states", "states non-empty and non-negative",
         !config.states.empty() && config.states.front() >= 0);
  sanity("config.fgh.n_points", "n_points odd", config.fgh.n_points % 2 == 1);
  sanity("config.fgh.n_states", "n_points >= 2 n_states + 1 and n_states covers the requested states",
         config.fgh.n_points >= 2 * config.fgh.n_states + 1 &&
             config.fgh.n_states >= static_cast<std::size_t>(config.states.back()) + 1);
  sanity("config.fgh.padding", "padding non-negative", config.fgh.padding >= 0.0);
  sanity("config.classical", "grid_points >= 2 and margin >= 0",
         config.classical_grid_points >= 2 && config.classical_grid_margin >= 0.0);
  sanity("config.wkbj", "positive tolerance and energy ceiling",
         config.wkbj.quadrature.relative_tolerance > 0.0 && config.wkbj.energy_ceiling > 0.0);
  if (config.e_star) sanity("config.wkbj.e_star", "E* positive", *config.e_star > 0.0);
  return report;
}

namespace pipeline_detail {

inline std::vector<WkbjState> quantize_all(const BoundStateProblem& problem, const RunConfig& config) {
  std::vector<WkbjState> states;
  for (int n : config.states) {
    WkbjState state = quantize(problem, n, config.wkbj);
    if (config.e_star) state.alpha = semiclassical_alpha(problem, state, config.e_star);
    states.push_back(state);
  }
  return states;
}

inline RunOutput run_classical(const BoundStateProblem& problem, const RunConfig& config) {
  RunOutput out;
  out.summary.columns = {"n", "energy", "binding_energy", "a", "b", "d", "period"};
  for (const WkbjState& state : quantize_all(problem, config)) {
    const TurningPoints& tp = state.turning_points;
    const auto grid = density_grid(tp, config.classical_grid_points, config.classical_grid_margin);
    out.summary.rows.push_back({state.n, state.energy, binding_energy(problem, state.energy), tp.a, tp.b, tp.d(),
                                period(problem, state.energy, config.wkbj.quadrature)});
    DensityTable table;
    table.n = state.n;
    table.add("rho_cl", classical_density(problem, state.energy, grid, config.wkbj.quadrature));
    out.densities.push_back(std::move(table));
  }
  return out;
}

inline RunOutput run_wkbj(const BoundStateProblem& problem, const RunConfig& config) {
  RunOutput out;
  out.summary.columns = {"n", "energy", "a", "b", "alpha", "alpha_mean_momentum", "action_residual"};
  for (const WkbjState& state : quantize_all(problem, config)) {
    const TurningPoints& tp = state.turning_points;
    const auto grid = density_grid(tp, config.classical_grid_points, config.classical_grid_margin);
    out.summary.rows.push_back(
        {state.n, state.energy, tp.a, tp.b, state.alpha, state.alpha_mean_momentum, state.action_residual});
    DensityTable table;
    table.n = state.n;
    table.add("rho_wkbj", wkbj_wavefunction(problem, state, grid, config.wkbj));
    table.add("rho_wkbj_averaged", wkbj_averaged_density(problem, state, grid, config.wkbj));
    out.densities.push_back(std::move(table));
  }
  return out;
}

inline RunOutput run_fgh(const BoundStateProblem& problem, const RunConfig& config) {
  const Spectrum spectrum = solve(problem, config.fgh);
  RunOutput out;
  out.summary.columns = {"n", "energy", "residual"};
  for (const FghState& state : spectrum.states) {
    out.summary.rows.push_back({state.n, state.energy, state.residual});
  }
  for (int n : config.states) {
    DensityTable table;
    table.n = n;
    table.add("rho_fgh", fgh_density(spectrum, n));
    out.densities.push_back(std::move(table));
  }
  out.extra["fgh_box"] = {spectrum.box.lo, spectrum.box.hi};
  return out;
}

}  // namespace pipeline_detail

/// Full FGH vs WKBJ vs classical comparison on the FGH grid.
inline std::pair<ComparisonReport, std::vector<DensityTable>> run_comparison(const BoundStateProblem& problem,
                                                                             const RunConfig& config) {
  const Spectrum spectrum = solve(problem, config.fgh);
  const std::vector<WkbjState> states = pipeline_detail::quantize_all(problem, config);
  ComparisonReport report = compare_spectra(spectrum, states);
  report.config_echo = config.echo();

  std::vector<DensityTable> tables;
  for (const WkbjState& state : states) {
    const auto& grid = spectrum.grid;
    const SampledDensity rho_cl = classical_density(problem, state.energy, grid, config.wkbj.quadrature);
    const SampledDensity rho_wkbj = wkbj_wavefunction(problem, state, grid, config.wkbj);
    const SampledDensity rho_avg = wkbj_averaged_density(problem, state, grid, config.wkbj);
    SampledDensity rho_fgh = fgh_density(spectrum, state.n);
    rho_fgh.support = state.turning_points;
    // a low level in a small box can ask for more than the box; average over all of it then
    const double window = std::min(auto_window(state.turning_points, state.n), spectrum.box.width());
    const SampledDensity rho_fgh_avg = local_average(rho_fgh, window);

    report.density_metrics.push_back({state.n, density_distance(rho_cl, rho_fgh_avg, DensityMetric::l1),
                                      density_distance(rho_cl, rho_avg, DensityMetric::l1),
                                      density_distance(rho_cl, rho_avg, DensityMetric::sup_interior)});
    DensityTable table;
    table.n = state.n;
    table.add("rho_cl", rho_cl);
    table.add("rho_wkbj", rho_wkbj);
    table.add("rho_fgh", rho_fgh);
    table.add("rho_fgh_averaged", rho_fgh_avg);
    tables.push_back(std::move(table));
  }
  return {std::move(report), std::move(tables)};
}

/// Runs one pipeline and writes its outputs; returns the files written.
inline std::vector<std::filesystem::path> run_solve(const RunConfig& config, Pipeline pipeline,
                                                    const std::filesystem::path& directory) {
  const BoundStateProblem problem = make_problem(config);
  RunOutput out;
  switch (pipeline) {
    case Pipeline::classical: out = pipeline_detail::run_classical(problem, config); break;
    case Pipeline::wkbj: out = pipeline_detail::run_wkbj(problem, config); break;
    case Pipeline::fgh: out = pipeline_detail::run_fgh(problem, config); break;
    case Pipeline::compare: {
      auto [report, tables] = run_comparison(problem, config);
      out = report_output(report, std::move(tables));
      break;
    }
  }
  out.pipeline = std::string(pipeline_name(pipeline));
  out.config_echo = config.echo();
  return write_outputs(out, config.formats, directory);
}

}  // namespace semiclassical
