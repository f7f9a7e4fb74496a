#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/interpolators/cubic_hermite.hpp>

#include "classical.hpp"
#include "error.hpp"
#include "numerics.hpp"
#include "potentials.hpp"

namespace semiclassical {

/// Phase offset at the turning points, carried over from the linear-turning-point
/// connection for p^2/2m since every admissible T reduces to it at small p.
inline constexpr double langer_phase = std::numbers::pi / 4.0;

struct WkbjSettings {
  numerics::QuadratureSettings quadrature{};
  double energy_ceiling = 1e8;         // on E_B - min V
  std::size_t phase_table_cells = 2048;  // per half of the well
};

struct WkbjState {
  int n = 0;
  double energy = 0.0;
  TurningPoints turning_points;
  double alpha = 0.0;                 // E* = E_B - min V
  double alpha_mean_momentum = 0.0;   // E* such that t^-1(E*) d = A(E)
  double action_residual = 0.0;
};

/// A(E) = integral of t^-1(E_B - V(x)) over the classical region.
inline numerics::QuadratureResult action_integral_detail(const BoundStateProblem& problem, double energy,
                                                         const numerics::QuadratureSettings& settings = {}) {
  const double binding = binding_energy(problem, energy);
  const double floor = problem.potential.minimum_value();
  if (binding < floor) {
    throw Error(ErrorCode::NoClassicalRegion, "E_B below the potential minimum");
  }
  if (binding == floor) return {0.0, 0.0, 0, true};
  const TurningPoints tp = turning_points(problem, energy);
  auto integrand = [&](double x) { return problem.local_momentum(binding, x); };
  return numerics::integrate_between_turning_points(integrand, tp.a, problem.potential.minimum_location(), tp.b,
                                                    settings);
}

inline double action_integral(const BoundStateProblem& problem, double energy,
                              const numerics::QuadratureSettings& settings = {}) {
  return action_integral_detail(problem, energy, settings).value;
}

/// alpha = hbar / (t^-1(E*) d); E* defaults to E_B - min V.
inline double semiclassical_alpha(const BoundStateProblem& problem, const WkbjState& state,
                                  std::optional<double> e_star = std::nullopt) {
  const double estar =
      e_star ? *e_star : binding_energy(problem, state.energy) - problem.potential.minimum_value();
  if (!(estar > 0.0)) throw Error(ErrorCode::InvalidArgument, "E* must be positive");
  const double momentum = problem.kinetic.excitation_inverse(estar);
  if (!(momentum > 0.0)) throw Error(ErrorCode::DegenerateAlpha, "t^-1(E*) vanishes");
  return problem.hbar / (momentum * state.turning_points.d());
}

/// Solves A(E_n) = pi hbar (n + 1/2) for the n-th level.
inline WkbjState quantize(const BoundStateProblem& problem, int n, const WkbjSettings& settings = {}) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "quantum number must be non-negative");
  const double target = std::numbers::pi * problem.hbar * (n + 0.5);
  const double rest = problem.kinetic.rest_energy();
  const double floor = problem.potential.minimum_value();
  auto mismatch = [&](double energy) { return action_integral(problem, energy, settings.quadrature) - target; };

  const double lo = floor + rest + 1e-12 * std::max(1.0, std::abs(floor + rest));
  double f_lo = mismatch(lo);
  double hi_lo = lo;
  double step = std::max(1.0, std::abs(floor)) * 1e-3;
  double hi = lo + step;
  double f_hi = mismatch(hi);
  while (f_hi <= 0.0) {
    hi_lo = hi;
    f_lo = f_hi;
    step *= 2.0;
    hi = lo + step;
    if (hi - rest - floor > settings.energy_ceiling) {
      throw Error(ErrorCode::EnergyCeilingExceeded,
                  "no level n = " + std::to_string(n) + " below E_B - min V = " + std::to_string(settings.energy_ceiling));
    }
    f_hi = mismatch(hi);
  }

  WkbjState state;
  state.n = n;
  state.energy = numerics::bracketed_root(mismatch, hi_lo, hi, f_lo, f_hi);
  state.turning_points = turning_points(problem, state.energy);
  const double action = action_integral(problem, state.energy, settings.quadrature);
  state.action_residual = std::abs(action - target);
  state.alpha = semiclassical_alpha(problem, state);
  state.alpha_mean_momentum = problem.hbar / action;
  return state;
}

/// psi(x) = D sin(Phi(x)/hbar + pi/4) / sqrt(T'(T^-1(E - V(x)))) between the
/// turning points, with Phi(x) the action integral from x to b. Phi is
/// tabulated once per half of the well in the variable s of the square-root
/// map and interpolated with cubic Hermite polynomials.
class WkbjWavefunction {
 public:
  WkbjWavefunction(const BoundStateProblem& problem, const WkbjState& state, const WkbjSettings& settings = {})
      : problem_(problem),
        state_(state),
        binding_(binding_energy(problem, state.energy)),
        tp_(state.turning_points),
        split_(problem.potential.minimum_location()) {
    if (!(split_ > tp_.a && split_ < tp_.b)) split_ = 0.5 * (tp_.a + tp_.b);
    left_len_ = split_ - tp_.a;
    right_len_ = tp_.b - split_;
    left_ = tabulate(tp_.a, left_len_, settings.phase_table_cells);
    right_ = tabulate(tp_.b, -right_len_, settings.phase_table_cells);
    left_total_ = (*left_)(1.0);
    right_total_ = (*right_)(1.0);

    auto oscillating = [&](double x) {
      const double v = speed(x);
      if (!(v > 0.0)) return 0.0;
      const double s = std::sin(phase(x) / problem_.hbar + langer_phase);
      return s * s / v;
    };
    const auto norm = numerics::integrate_between_turning_points(oscillating, tp_.a, split_, tp_.b,
                                                                 settings.quadrature);
    amplitude_ = 1.0 / std::sqrt(norm.value);
  }

  /// Phi(x) = integral from x to b of T^-1(E - V(y)) dy
  double phase(double x) const {
    if (x >= tp_.b) return 0.0;
    if (x <= tp_.a) return left_total_ + right_total_;
    if (x >= split_) return (*right_)(std::sqrt((tp_.b - x) / right_len_));
    return right_total_ + left_total_ - (*left_)(std::sqrt((x - tp_.a) / left_len_));
  }

  double total_phase() const { return left_total_ + right_total_; }

  /// D
  double amplitude() const noexcept { return amplitude_; }

  double psi(double x) const {
    if (x <= tp_.a || x >= tp_.b) return 0.0;
    const double v = speed(x);
    const double s = std::sin(phase(x) / problem_.hbar + langer_phase);
    if (!(v > 0.0)) return s > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    return amplitude_ * s / std::sqrt(v);
  }

  double speed(double x) const { return problem_.kinetic.deriv(problem_.local_momentum(binding_, x)); }

  const TurningPoints& turning_points() const noexcept { return tp_; }

 private:
  using Spline = boost::math::interpolators::cubic_hermite<std::vector<double>>;

  // G(s) = integral of p over x in [origin, origin + length s^2] (length may be negative)
  std::optional<Spline> tabulate(double origin, double length, std::size_t cells) const {
    const double extent = std::abs(length);
    auto g = [&](double s) { return problem_.local_momentum(binding_, origin + length * s * s) * 2.0 * extent * s; };
    std::vector<double> s(cells + 1), value(cells + 1), slope(cells + 1);
    double accumulated = 0.0;
    for (std::size_t k = 0; k <= cells; ++k) {
      s[k] = static_cast<double>(k) / static_cast<double>(cells);
      if (k > 0) accumulated += numerics::gauss_panels(g, s[k - 1], s[k], 1);
      value[k] = accumulated;
      slope[k] = g(s[k]);
    }
    return Spline(std::move(s), std::move(value), std::move(slope));
  }

  BoundStateProblem problem_;
  WkbjState state_;
  double binding_;
  TurningPoints tp_;
  double split_;
  double left_len_ = 0.0;
  double right_len_ = 0.0;
  std::optional<Spline> left_;
  std::optional<Spline> right_;
  double left_total_ = 0.0;
  double right_total_ = 0.0;
  double amplitude_ = 0.0;
};

/// rho_WKBJ = psi^2 on (a, b), zero outside.
inline SampledDensity wkbj_wavefunction(const BoundStateProblem& problem, const WkbjState& state,
                                        const std::vector<double>& grid, const WkbjSettings& settings = {}) {
  const WkbjWavefunction wave(problem, state, settings);
  const TurningPoints& tp = state.turning_points;
  SampledDensity density;
  density.grid = grid;
  density.values.resize(grid.size());
  density.support = tp;
  density.provenance = Provenance::wkbj;
  density.normalization_domain = {tp.a, tp.b};
  density.quantum_number = state.n;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (at_turning_point(tp, x)) {
      density.values[i] = std::numeric_limits<double>::infinity();
    } else {
      const double psi = wave.psi(x);
      density.values[i] = psi * psi;
    }
  }
  return density;
}

struct AveragedWkbj {
  SampledDensity density;
  /// Integral of D^2 / (2 T') with D from the oscillating wavefunction;
  /// tends to 1 as the oscillations become rapid.
  double raw_normalization = 0.0;
};

/// D^2 / (2 T'(T^-1(E - V))) renormalized on (a, b): the WKBJ density with
/// sin^2 replaced by its mean.
inline AveragedWkbj wkbj_averaged_detail(const BoundStateProblem& problem, const WkbjState& state,
                                         const std::vector<double>& grid, const WkbjSettings& settings = {}) {
  const WkbjWavefunction wave(problem, state, settings);
  const TurningPoints& tp = state.turning_points;
  const double half_d2 = 0.5 * wave.amplitude() * wave.amplitude();
  auto averaged = [&](double x) {
    const double v = wave.speed(x);
    return v > 0.0 ? half_d2 / v : 0.0;
  };
  const double raw = numerics::integrate_between_turning_points(averaged, tp.a, problem.potential.minimum_location(),
                                                                tp.b, settings.quadrature)
                         .value;
  AveragedWkbj out;
  out.raw_normalization = raw;
  SampledDensity& density = out.density;
  density.grid = grid;
  density.values.resize(grid.size());
  density.support = tp;
  density.provenance = Provenance::wkbj_averaged;
  density.normalization_domain = {tp.a, tp.b};
  density.quantum_number = state.n;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (at_turning_point(tp, x)) {
      density.values[i] = std::numeric_limits<double>::infinity();
    } else if (x <= tp.a || x >= tp.b) {
      density.values[i] = 0.0;
    } else {
      density.values[i] = averaged(x) / raw;
    }
  }
  return out;
}

inline SampledDensity wkbj_averaged_density(const BoundStateProblem& problem, const WkbjState& state,
                                            const std::vector<double>& grid, const WkbjSettings& settings = {}) {
  return wkbj_averaged_detail(problem, state, grid, settings).density;
}

}  // namespace semiclassical
