#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "classical.hpp"
#include "error.hpp"
#include "fgh.hpp"
#include "wkbj.hpp"

namespace semiclassical {

struct StateComparison {
  int n = 0;
  double e_fgh = 0.0;
  double e_wkbj = 0.0;
  double relative_error = 0.0;
  double alpha = 0.0;
};

struct DensityMetrics {
  int n = 0;
  double l1_classical_vs_fgh_averaged = 0.0;
  double l1_classical_vs_wkbj_averaged = 0.0;
  double sup_classical_vs_wkbj_averaged = 0.0;
};

struct ComparisonReport {
  std::vector<StateComparison> per_state;
  std::vector<DensityMetrics> density_metrics;
  nlohmann::json config_echo = nlohmann::json::object();
  bool errors_decrease = false;  // strictly, along increasing n
};

/// Relative eigenvalue errors |E_fgh - E_wkbj| / |E_fgh| per WKBJ level.
inline ComparisonReport compare_spectra(const Spectrum& fgh, const std::vector<WkbjState>& wkbj) {
  if (wkbj.empty()) throw Error(ErrorCode::StateRangeMismatch, "no WKBJ states to compare");
  ComparisonReport report;
  for (const WkbjState& state : wkbj) {
    if (state.n < 0 || static_cast<std::size_t>(state.n) >= fgh.states.size()) {
      throw Error(ErrorCode::StateRangeMismatch,
                  "WKBJ level " + std::to_string(state.n) + " has no FGH counterpart (" +
                      std::to_string(fgh.states.size()) + " FGH states)");
    }
    const double e_fgh = fgh.states[static_cast<std::size_t>(state.n)].energy;
    report.per_state.push_back({state.n, e_fgh, state.energy, std::abs(e_fgh - state.energy) / std::abs(e_fgh),
                                state.alpha});
  }
  std::sort(report.per_state.begin(), report.per_state.end(),
            [](const StateComparison& l, const StateComparison& r) { return l.n < r.n; });
  report.errors_decrease = true;
  for (std::size_t i = 1; i < report.per_state.size(); ++i) {
    if (!(report.per_state[i].relative_error < report.per_state[i - 1].relative_error)) {
      report.errors_decrease = false;
    }
  }
  return report;
}

/// Default averaging length: two mean oscillation periods of sin^2, i.e.
/// 2 d / (n + 1/2), since the phase advances by pi (n + 1/2) across d.
inline double auto_window(const TurningPoints& tp, int n) { return 2.0 * tp.d() / (n + 0.5); }

namespace detail {

inline double uniform_spacing(const std::vector<double>& grid) {
  if (grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "density grid needs at least two samples");
  const double spacing = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - grid[i - 1] - spacing) > 1e-9 * std::abs(spacing)) {
      throw Error(ErrorCode::InvalidArgument, "density grid is not uniform");
    }
  }
  return spacing;
}

inline double finite_sum(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) total += v;
  }
  return total;
}

}  // namespace detail

/// Moving average over `window` (a length; auto uses auto_window of the
/// density's support and quantum number). The integral over the grid is
/// restored after averaging.
inline SampledDensity local_average(const SampledDensity& density, std::optional<double> window = std::nullopt) {
  const double spacing = detail::uniform_spacing(density.grid);
  double length = 0.0;
  if (window) {
    length = *window;
  } else {
    if (!density.support || !density.quantum_number) {
      throw Error(ErrorCode::InvalidArgument, "auto window needs the density's turning points and quantum number");
    }
    length = auto_window(*density.support, *density.quantum_number);
  }
  if (length < 0.0) throw Error(ErrorCode::InvalidArgument, "negative averaging window");
  if (length > density.normalization_domain.width()) {
    throw Error(ErrorCode::WindowTooWide, "window " + std::to_string(length) + " exceeds the support width " +
                                              std::to_string(density.normalization_domain.width()));
  }
  const auto half = static_cast<std::ptrdiff_t>(std::llround(length / (2.0 * spacing)));
  if (half == 0) return density;

  SampledDensity out = density;
  const auto n = static_cast<std::ptrdiff_t>(density.values.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double total = 0.0;
    int count = 0;
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - half); j <= std::min(n - 1, i + half); ++j) {
      const double v = density.values[static_cast<std::size_t>(j)];
      if (std::isfinite(v)) {
        total += v;
        ++count;
      }
    }
    out.values[static_cast<std::size_t>(i)] = count > 0 ? total / count : 0.0;
  }
  const double before = detail::finite_sum(density.values);
  const double after = detail::finite_sum(out.values);
  if (after > 0.0) {
    for (double& v : out.values) v *= before / after;
  }
  return out;
}

enum class DensityMetric { l1, sup_interior };

/// Interior margin, as a fraction of d, excluded by the sup-norm.
inline constexpr double interior_margin = 0.02;

/// L1: spacing * sum |rho1 - rho2| over samples finite in both.
/// sup_interior: max |rho1 - rho2| on (a + 0.02 d, b - 0.02 d).
inline double density_distance(const SampledDensity& d1, const SampledDensity& d2, DensityMetric metric) {
  if (d1.grid.size() != d2.grid.size()) throw Error(ErrorCode::GridMismatch, "densities have different sizes");
  for (std::size_t i = 0; i < d1.grid.size(); ++i) {
    if (std::abs(d1.grid[i] - d2.grid[i]) > 1e-12 * std::max(1.0, std::abs(d1.grid[i]))) {
      throw Error(ErrorCode::GridMismatch, "densities are sampled on different grids");
    }
  }
  if (metric == DensityMetric::l1) {
    const double spacing = detail::uniform_spacing(d1.grid);
    double total = 0.0;
    for (std::size_t i = 0; i < d1.values.size(); ++i) {
      const double l = d1.values[i];
      const double r = d2.values[i];
      if (std::isfinite(l) && std::isfinite(r)) total += std::abs(l - r);
    }
    return spacing * total;
  }
  const std::optional<TurningPoints> support = d1.support ? d1.support : d2.support;
  if (!support) throw Error(ErrorCode::InvalidArgument, "sup_interior needs turning points");
  const double lo = support->a + interior_margin * support->d();
  const double hi = support->b - interior_margin * support->d();
  double worst = 0.0;
  for (std::size_t i = 0; i < d1.values.size(); ++i) {
    const double x = d1.grid[i];
    if (x <= lo || x >= hi) continue;
    const double l = d1.values[i];
    const double r = d2.values[i];
    if (std::isfinite(l) && std::isfinite(r)) worst = std::max(worst, std::abs(l - r));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Output tables

enum class OutputFormat { csv, json };

/// Summary table; empty cells are written as null.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
};

/// Densities of one state on a shared grid.
struct DensityTable {
  int n = 0;
  std::vector<double> x;
  std::vector<std::pair<std::string, std::vector<double>>> columns;

  void add(std::string name, const SampledDensity& density) {
    if (x.empty()) x = density.grid;
    if (density.grid.size() != x.size()) throw Error(ErrorCode::GridMismatch, "density table column " + name);
    columns.emplace_back(std::move(name), density.values);
  }
};

struct RunOutput {
  std::string pipeline;
  nlohmann::json config_echo = nlohmann::json::object();
  Table summary;
  std::vector<DensityTable> densities;
  nlohmann::json extra = nlohmann::json::object();
};

/// 17 significant digits, locale independent; non-finite values are null.
inline std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

inline void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

inline nlohmann::json number_or_null(double value) {
  return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

}  // namespace detail

inline void write_csv(const std::filesystem::path& path, const Table& table) {
  auto out = detail::open_output(path);
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << (row[c] ? format_number(*row[c]) : std::string("null"));
    }
    out << '\n';
  }
  detail::close_output(out, path);
}

inline void write_csv(const std::filesystem::path& path, const DensityTable& table) {
  auto out = detail::open_output(path);
  out << 'x';
  for (const auto& [name, values] : table.columns) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < table.x.size(); ++i) {
    out << format_number(table.x[i]);
    for (const auto& [name, values] : table.columns) out << ',' << format_number(values[i]);
    out << '\n';
  }
  detail::close_output(out, path);
}

inline nlohmann::json to_json(const RunOutput& output) {
  nlohmann::json doc;
  doc["pipeline"] = output.pipeline;
  doc["config_echo"] = output.config_echo;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : output.summary.rows) {
    nlohmann::json item = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      item[output.summary.columns[c]] = row[c] ? detail::number_or_null(*row[c]) : nlohmann::json(nullptr);
    }
    rows.push_back(std::move(item));
  }
  doc["summary"] = std::move(rows);
  for (const auto& [key, value] : output.extra.items()) doc[key] = value;
  nlohmann::json densities = nlohmann::json::array();
  for (const auto& table : output.densities) {
    nlohmann::json item;
    item["n"] = table.n;
    nlohmann::json xs = nlohmann::json::array();
    for (double x : table.x) xs.push_back(detail::number_or_null(x));
    item["x"] = std::move(xs);
    for (const auto& [name, values] : table.columns) {
      nlohmann::json column = nlohmann::json::array();
      for (double v : values) column.push_back(detail::number_or_null(v));
      item[name] = std::move(column);
    }
    densities.push_back(std::move(item));
  }
  doc["densities"] = std::move(densities);
  return doc;
}

/// Writes summary.csv plus density_n<k>.csv per state, and/or report.json.
/// Returns the files written.
inline std::vector<std::filesystem::path> write_outputs(const RunOutput& output, const std::vector<OutputFormat>& formats,
                                                        const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (OutputFormat format : formats) {
    if (format == OutputFormat::csv) {
      const auto summary = directory / "summary.csv";
      write_csv(summary, output.summary);
      written.push_back(summary);
      for (const auto& table : output.densities) {
        const auto path = directory / ("density_n" + std::to_string(table.n) + ".csv");
        write_csv(path, table);
        written.push_back(path);
      }
    } else {
      const auto path = directory / "report.json";
      auto out = detail::open_output(path);
      out << to_json(output).dump(2) << '\n';
      detail::close_output(out, path);
      written.push_back(path);
    }
  }
  return written;
}

inline RunOutput report_output(const ComparisonReport& report, std::vector<DensityTable> densities) {
  RunOutput output;
  output.pipeline = "compare";
  output.config_echo = report.config_echo;
  output.summary.columns = {"n", "E_fgh", "E_wkbj", "relative_error", "alpha", "l1_cl_vs_fgh_averaged",
                            "l1_cl_vs_wkbj_averaged", "sup_cl_vs_wkbj_averaged"};
  for (const auto& s : report.per_state) {
    std::vector<std::optional<double>> row{s.n, s.e_fgh, s.e_wkbj, s.relative_error, s.alpha,
                                           std::nullopt, std::nullopt, std::nullopt};
    for (const auto& m : report.density_metrics) {
      if (m.n == s.n) {
        row[5] = m.l1_classical_vs_fgh_averaged;
        row[6] = m.l1_classical_vs_wkbj_averaged;
        row[7] = m.sup_classical_vs_wkbj_averaged;
      }
    }
    output.summary.rows.push_back(std::move(row));
  }
  nlohmann::json per_state = nlohmann::json::array();
  for (const auto& s : report.per_state) {
    per_state.push_back({{"n", s.n},
                         {"E_fgh", s.e_fgh},
                         {"E_wkbj", s.e_wkbj},
                         {"relative_error", s.relative_error},
                         {"alpha", s.alpha}});
  }
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& m : report.density_metrics) {
    metrics.push_back({{"n", m.n},
                       {"l1_cl_vs_fgh_averaged", m.l1_classical_vs_fgh_averaged},
                       {"l1_cl_vs_wkbj_averaged", m.l1_classical_vs_wkbj_averaged},
                       {"sup_cl_vs_wkbj_averaged", m.sup_classical_vs_wkbj_averaged}});
  }
  output.extra["per_state"] = std::move(per_state);
  output.extra["density_metrics"] = std::move(metrics);
  output.extra["errors_decrease"] = report.errors_decrease;
  output.densities = std::move(densities);
  return output;
}

/// Report plus per-state density tables in the requested formats.
inline std::vector<std::filesystem::path> export_report(const ComparisonReport& report,
                                                        std::vector<DensityTable> densities, OutputFormat format,
                                                        const std::filesystem::path& directory) {
  return write_outputs(report_output(report, std::move(densities)), {format}, directory);
}

}  // namespace semiclassical
