#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "classical.hpp"
#include "error.hpp"
#include "potentials.hpp"
#include "wkbj.hpp"

namespace semiclassical {

struct FghConfig {
  std::size_t n_points = 513;
  std::optional<Interval> box;  // empty: auto_box
  std::size_t n_states = 16;
  double padding = 0.35;        // auto box margin, in units of d
};

struct FghState {
  int n = 0;
  double energy = 0.0;
  std::vector<double> eigenvector;  // spacing * sum psi^2 = 1
  double residual = 0.0;            // max |H psi - E psi|, unit-norm vector
};

struct Spectrum {
  std::vector<FghState> states;
  std::vector<double> grid;
  double spacing = 0.0;
  Interval box;
  Provenance provenance = Provenance::fgh;
};

/// [a - padding d, b + padding d] for the turning points of WKBJ level n_states - 1.
inline Interval auto_box(const BoundStateProblem& problem, std::size_t n_states, double padding = 0.35,
                         const WkbjSettings& settings = {}) {
  if (n_states < 1) throw Error(ErrorCode::InvalidArgument, "auto_box needs at least one state");
  const WkbjState top = quantize(problem, static_cast<int>(n_states) - 1, settings);
  const TurningPoints& tp = top.turning_points;
  return {tp.a - padding * tp.d(), tp.b + padding * tp.d()};
}

namespace detail {

inline void check_config(const FghConfig& config) {
  if (config.n_points % 2 == 0) {
    throw Error(ErrorCode::OddGridRequired, "n_points = " + std::to_string(config.n_points) + " is even");
  }
  if (config.n_points < 2 * config.n_states + 1) {
    throw Error(ErrorCode::InvalidArgument, "n_points must be at least 2 n_states + 1");
  }
  if (config.box && !(config.box->hi > config.box->lo)) {
    throw Error(ErrorCode::InvalidArgument, "FGH box must have positive width");
  }
}

inline Interval resolve_box(const BoundStateProblem& problem, const FghConfig& config) {
  return config.box ? *config.box : auto_box(problem, config.n_states, config.padding);
}

}  // namespace detail

/// Kinetic kernel K(m) = (1/N) sum_k T(p_k) cos(2 pi k m / N) over the
/// symmetric momentum set k = -(N-1)/2 .. (N-1)/2, for m = 0 .. N-1.
inline std::vector<double> kinetic_kernel(const KineticLaw& law, std::size_t n_points, double spacing) {
  const auto n = static_cast<long long>(n_points);
  const long long half = (n - 1) / 2;
  const double dp = 2.0 * std::numbers::pi / (static_cast<double>(n) * spacing);
  std::vector<double> t(static_cast<std::size_t>(half) + 1);
  for (long long k = 0; k <= half; ++k) t[static_cast<std::size_t>(k)] = law.eval(dp * static_cast<double>(k));

  std::vector<double> kernel(n_points);
  for (long long m = 0; m < n; ++m) {
    double sum = t[0];
    for (long long k = 1; k <= half; ++k) {
      const long long r = (k * m) % n;
      sum += 2.0 * t[static_cast<std::size_t>(k)] * std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
    }
    kernel[static_cast<std::size_t>(m)] = sum / static_cast<double>(n);
  }
  return kernel;
}

inline std::vector<double> fgh_grid(const Interval& box, std::size_t n_points) {
  const double spacing = box.width() / static_cast<double>(n_points);
  std::vector<double> grid(n_points);
  for (std::size_t i = 0; i < n_points; ++i) grid[i] = box.lo + static_cast<double>(i) * spacing;
  return grid;
}

/// H_ij = V(x_i) delta_ij + K(|i - j|) on x_i = x_min + i (x_max - x_min)/N.
inline Eigen::MatrixXd build_hamiltonian(const BoundStateProblem& problem, const FghConfig& config) {
  detail::check_config(config);
  const Interval box = detail::resolve_box(problem, config);
  const std::size_t n = config.n_points;
  const double spacing = box.width() / static_cast<double>(n);
  const std::vector<double> kernel = kinetic_kernel(problem.kinetic, n, spacing);
  const std::vector<double> grid = fgh_grid(box, n);

  Eigen::MatrixXd h(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kernel[i > j ? i - j : j - i];
    }
    h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += problem.potential(grid[j]);
  }
  return h;
}

/// Lowest config.n_states eigenpairs of the grid Hamiltonian.
inline Spectrum solve(const BoundStateProblem& problem, const FghConfig& config) {
  detail::check_config(config);
  FghConfig resolved = config;
  resolved.box = detail::resolve_box(problem, config);
  const Eigen::MatrixXd h = build_hamiltonian(problem, resolved);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure,
                "tridiagonal QL did not converge for N = " + std::to_string(config.n_points) +
                    " (Eigen info " + std::to_string(static_cast<int>(solver.info())) + ")");
  }

  Spectrum spectrum;
  spectrum.box = *resolved.box;
  spectrum.grid = fgh_grid(spectrum.box, config.n_points);
  spectrum.spacing = spectrum.box.width() / static_cast<double>(config.n_points);
  const double scale = 1.0 / std::sqrt(spectrum.spacing);
  for (std::size_t k = 0; k < config.n_states; ++k) {
    const auto idx = static_cast<Eigen::Index>(k);
    Eigen::VectorXd v = solver.eigenvectors().col(idx);
    // sign convention: first non-negligible component positive
    const double cutoff = 1e-6 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > cutoff) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
    FghState state;
    state.n = static_cast<int>(k);
    state.energy = solver.eigenvalues()[idx];
    state.residual = (h * v - state.energy * v).cwiseAbs().maxCoeff();
    state.eigenvector.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) state.eigenvector[static_cast<std::size_t>(i)] = v[i] * scale;
    spectrum.states.push_back(std::move(state));
  }
  return spectrum;
}

/// rho_i = psi_i^2, normalized over the whole grid.
inline SampledDensity fgh_density(const Spectrum& spectrum, int n) {
  if (n < 0 || static_cast<std::size_t>(n) >= spectrum.states.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "state " + std::to_string(n) + " not in spectrum");
  }
  SampledDensity density;
  density.grid = spectrum.grid;
  density.provenance = Provenance::fgh;
  density.normalization_domain = {spectrum.box.lo, spectrum.box.hi};
  density.quantum_number = n;
  const auto& psi = spectrum.states[static_cast<std::size_t>(n)].eigenvector;
  density.values.resize(psi.size());
  std::transform(psi.begin(), psi.end(), density.values.begin(), [](double v) { return v * v; });
  return density;
}

/// Sign changes of a sampled wavefunction, ignoring components below
/// `relative_cutoff` of its maximum modulus.
inline int count_nodes(const std::vector<double>& psi, double relative_cutoff = 1e-6) {
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  const double cutoff = relative_cutoff * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double v : psi) {
    if (std::abs(v) <= cutoff) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

}  // namespace semiclassical
