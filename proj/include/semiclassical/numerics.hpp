#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "error.hpp"

namespace semiclassical::numerics {

inline constexpr std::size_t gauss_order = 20;

struct GaussRule {
  std::array<double, gauss_order> nodes;    // on [-1, 1]
  std::array<double, gauss_order> weights;
};

/// Legendre nodes by Newton iteration on P_n, computed once.
inline const GaussRule& gauss_legendre_rule() {
  static const GaussRule rule = [] {
    GaussRule r{};
    constexpr auto n = static_cast<int>(gauss_order);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - z * z) * dp * dp);
      r.nodes[i] = -z;
      r.nodes[n - 1 - i] = z;
      r.weights[i] = w;
      r.weights[n - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

/// Fixed composite Gauss-Legendre sum with `panels` equal panels on [lo, hi].
template <class F>
double gauss_panels(F&& f, double lo, double hi, std::size_t panels) {
  const auto& rule = gauss_legendre_rule();
  const double width = (hi - lo) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * width;
    double panel = 0.0;
    for (std::size_t k = 0; k < gauss_order; ++k) {
      panel += rule.weights[k] * f(mid + 0.5 * width * rule.nodes[k]);
    }
    total += 0.5 * width * panel;
  }
  return total;
}

struct QuadratureSettings {
  double relative_tolerance = 1e-11;
  std::size_t max_nodes = std::size_t{1} << 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t nodes = 0;
  bool converged = false;
};

/// Doubles the panel count until two successive estimates agree.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureSettings& settings = {}) {
  QuadratureResult result;
  if (hi == lo) {
    result.converged = true;
    return result;
  }
  std::size_t panels = 1;
  double previous = gauss_panels(f, lo, hi, panels);
  result.nodes = gauss_order;
  while (result.nodes * 2 <= settings.max_nodes) {
    panels *= 2;
    const double current = gauss_panels(f, lo, hi, panels);
    result.nodes = panels * gauss_order;
    result.value = current;
    result.error_estimate = std::abs(current - previous);
    if (result.error_estimate <= settings.relative_tolerance * std::abs(current)) {
      result.converged = true;
      return result;
    }
    previous = current;
  }
  return result;
}

/// Integral over [a, b] of an integrand that may behave like (x-a)^(-1/2) or
/// (b-x)^(-1/2) at the ends. The interval is split at `split` (typically the
/// potential minimum, where a kink may sit) and each half is mapped with
/// x = a + (split-a) s^2 or x = b - (b-split) s^2, which removes the
/// inverse-square-root behaviour.
template <class F>
QuadratureResult integrate_between_turning_points(F&& f, double a, double split, double b,
                                                  const QuadratureSettings& settings = {}) {
  if (!(split > a && split < b)) split = 0.5 * (a + b);
  const double left_len = split - a;
  const double right_len = b - split;
  auto left = [&](double s) { return f(a + left_len * s * s) * 2.0 * left_len * s; };
  auto right = [&](double s) { return f(b - right_len * s * s) * 2.0 * right_len * s; };
  const QuadratureResult l = integrate(left, 0.0, 1.0, settings);
  const QuadratureResult r = integrate(right, 0.0, 1.0, settings);
  return {l.value + r.value, l.error_estimate + r.error_estimate, l.nodes + r.nodes,
          l.converged && r.converged};
}

/// Bracketed root of a monotone function (TOMS 748), to near machine precision.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t max_iter = 300;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  const auto [left, right] =
      boost::math::tools::toms748_solve(std::forward<F>(f), lo, hi, f_lo, f_hi, tol, max_iter);
  return 0.5 * (left + right);
}

}  // namespace semiclassical::numerics
