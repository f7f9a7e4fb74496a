#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "numerics.hpp"
#include "potentials.hpp"

namespace semiclassical {

enum class Provenance { classical, wkbj, wkbj_averaged, fgh };

constexpr std::string_view provenance_name(Provenance p) noexcept {
  switch (p) {
    case Provenance::classical: return "classical";
    case Provenance::wkbj: return "wkbj";
    case Provenance::wkbj_averaged: return "wkbj_averaged";
    case Provenance::fgh: return "fgh";
  }
  return "unknown";
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
};

/// A probability density tabulated on a position grid. Samples at a
/// turning point, where the density genuinely diverges, hold +infinity and
/// are written out as null.
struct SampledDensity {
  std::vector<double> grid;
  std::vector<double> values;
  std::optional<TurningPoints> support;
  Provenance provenance = Provenance::classical;
  Interval normalization_domain;
  std::optional<int> quantum_number;

  std::size_t size() const noexcept { return grid.size(); }

  static bool is_sentinel(double value) noexcept { return std::isinf(value); }

  /// Trapezoid integral over the finite samples.
  double trapezoid_integral() const {
    double total = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (is_sentinel(values[i]) || is_sentinel(values[i - 1])) continue;
      total += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    }
    return total;
  }
};

/// Samples closer than this fraction of d to a turning point are reported
/// with the divergence sentinel.
inline constexpr double turning_point_exclusion = 1e-9;

inline bool at_turning_point(const TurningPoints& tp, double x) noexcept {
  const double margin = turning_point_exclusion * tp.d();
  return std::abs(x - tp.a) <= margin || std::abs(x - tp.b) <= margin;
}

/// `points` uniform samples over [a - margin d, b + margin d].
inline std::vector<double> density_grid(const TurningPoints& tp, std::size_t points = 2001, double margin = 0.05) {
  std::vector<double> grid(points);
  const double lo = tp.a - margin * tp.d();
  const double hi = tp.b + margin * tp.d();
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

/// |v(x)| = T'(T^-1(E - V(x))) inside the classical region.
inline double speed_at(const BoundStateProblem& problem, double energy, double x) {
  const TurningPoints tp = turning_points(problem, energy);
  if (!tp.contains(x)) {
    throw Error(ErrorCode::OutsideClassicalRegion,
                "x = " + std::to_string(x) + " lies outside [" + std::to_string(tp.a) + ", " + std::to_string(tp.b) + "]");
  }
  if (at_turning_point(tp, x)) return 0.0;
  const double binding = binding_energy(problem, energy);
  return problem.kinetic.deriv(problem.local_momentum(binding, x));
}

/// Integral of 1/|v| over (a, b); half the period.
inline numerics::QuadratureResult inverse_speed_integral(const BoundStateProblem& problem, double energy,
                                                         const TurningPoints& tp,
                                                         const numerics::QuadratureSettings& settings = {}) {
  const double binding = binding_energy(problem, energy);
  auto integrand = [&](double x) {
    const double v = problem.kinetic.deriv(problem.local_momentum(binding, x));
    return v > 0.0 ? 1.0 / v : 0.0;
  };
  return numerics::integrate_between_turning_points(integrand, tp.a, problem.potential.minimum_location(), tp.b,
                                                    settings);
}

/// tau = 2 * integral of dx/|v(x)| between the turning points.
inline double period(const BoundStateProblem& problem, double energy, const numerics::QuadratureSettings& settings = {}) {
  const TurningPoints tp = turning_points(problem, energy);
  return 2.0 * inverse_speed_integral(problem, energy, tp, settings).value;
}

/// rho_cl(x) = (2/tau) / |v(x)| on (a, b), zero outside.
inline SampledDensity classical_density(const BoundStateProblem& problem, double energy,
                                        const std::vector<double>& grid,
                                        const numerics::QuadratureSettings& settings = {}) {
  const TurningPoints tp = turning_points(problem, energy);
  const double tau = 2.0 * inverse_speed_integral(problem, energy, tp, settings).value;
  const double binding = binding_energy(problem, energy);

  SampledDensity density;
  density.grid = grid;
  density.values.resize(grid.size());
  density.support = tp;
  density.provenance = Provenance::classical;
  density.normalization_domain = {tp.a, tp.b};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (at_turning_point(tp, x)) {
      density.values[i] = std::numeric_limits<double>::infinity();
    } else if (x <= tp.a || x >= tp.b) {
      density.values[i] = 0.0;
    } else {
      density.values[i] = (2.0 / tau) / problem.kinetic.deriv(problem.local_momentum(binding, x));
    }
  }
  return density;
}

}  // namespace semiclassical
