#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <boost/math/tools/minima.hpp>

#include "error.hpp"
#include "kinetics.hpp"
#include "numerics.hpp"

namespace semiclassical {

/// A confining, singularity-free potential well V(x).
class PotentialLaw {
 public:
  using Function = std::function<double(double)>;

  PotentialLaw(std::string name, std::map<std::string, double> parameters, Function eval,
               double minimum_location, double minimum_value, bool symmetric)
      : name_(std::move(name)),
        parameters_(std::move(parameters)),
        eval_(std::move(eval)),
        minimum_location_(minimum_location),
        minimum_value_(minimum_value),
        symmetric_(symmetric) {}

  double eval(double x) const { return eval_(x); }
  double operator()(double x) const { return eval_(x); }

  double minimum_location() const noexcept { return minimum_location_; }
  double minimum_value() const noexcept { return minimum_value_; }
  bool symmetric() const noexcept { return symmetric_; }
  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, double>& parameters() const noexcept { return parameters_; }

 private:
  std::string name_;
  std::map<std::string, double> parameters_;
  Function eval_;
  double minimum_location_;
  double minimum_value_;
  bool symmetric_;
};

namespace potentials {

/// lambda |x|
inline PotentialLaw linear(double lambda) {
  return PotentialLaw("linear", {{"lambda", lambda}}, [lambda](double x) { return lambda * std::abs(x); },
                      0.0, 0.0, true);
}

/// m omega^2 x^2 / 2
inline PotentialLaw harmonic(double mass, double omega) {
  const double k = mass * omega * omega;
  return PotentialLaw("harmonic", {{"m", mass}, {"omega", omega}},
                      [k](double x) { return 0.5 * k * x * x; }, 0.0, 0.0, true);
}

/// c |x|^q
inline PotentialLaw power_law(double c, double q) {
  return PotentialLaw("power", {{"c", c}, {"q", q}},
                      [c, q](double x) { return c * std::pow(std::abs(x), q); }, 0.0, 0.0, true);
}

/// An opaque V(x). Without an analytic minimum, the minimum is located on
/// [search_lo, search_hi] by a coarse scan followed by Brent's method.
inline PotentialLaw from_function(std::string name, std::function<double(double)> eval,
                                  std::optional<double> minimum_location = std::nullopt,
                                  double search_lo = -10.0, double search_hi = 10.0) {
  double x0 = 0.0;
  if (minimum_location) {
    x0 = *minimum_location;
  } else {
    constexpr int scan = 1000;
    const double step = (search_hi - search_lo) / scan;
    int best = 0;
    for (int i = 1; i <= scan; ++i) {
      if (eval(search_lo + i * step) < eval(search_lo + best * step)) best = i;
    }
    const double lo = search_lo + std::max(0, best - 1) * step;
    const double hi = search_lo + std::min(scan, best + 1) * step;
    x0 = boost::math::tools::brent_find_minima(eval, lo, hi, std::numeric_limits<double>::digits / 2).first;
  }
  bool symmetric = x0 == 0.0;
  for (int i = 1; symmetric && i <= 64; ++i) {
    const double x = 0.173 * i;
    symmetric = std::abs(eval(x) - eval(-x)) <= 1e-14 * std::max(1.0, std::abs(eval(x)));
  }
  return PotentialLaw(std::move(name), {}, eval, x0, eval(x0), symmetric);
}

}  // namespace potentials

/// One physical system H = T(p) + V(x) with its hbar.
struct BoundStateProblem {
  KineticLaw kinetic;
  PotentialLaw potential;
  double hbar = 1.0;

  BoundStateProblem(KineticLaw kinetic_law, PotentialLaw potential_law, double hbar_value = 1.0)
      : kinetic(std::move(kinetic_law)), potential(std::move(potential_law)), hbar(hbar_value) {
    if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  }

  /// Local classical momentum t^-1(E_B - V(x)), zero outside the allowed region.
  double local_momentum(double binding, double x) const {
    const double w = binding - potential(x);
    return w > 0.0 ? kinetic.excitation_inverse(w) : 0.0;
  }
};

struct TurningPoints {
  double a = 0.0;
  double b = 0.0;
  double d() const noexcept { return b - a; }
  bool contains(double x) const noexcept { return x >= a && x <= b; }
};

/// E_B = E - T(0)
inline double binding_energy(const BoundStateProblem& problem, double energy) {
  return energy - problem.kinetic.rest_energy();
}

namespace detail {

inline double find_wall(const PotentialLaw& v, double binding, double direction) {
  const double x0 = v.minimum_location();
  auto g = [&](double x) { return v(x) - binding; };
  double step = 1e-3;
  double inner = x0;
  double g_inner = g(x0);
  double outer = x0 + direction * step;
  double g_outer = g(outer);
  while (!(g_outer >= 0.0)) {
    if (std::isnan(g_outer)) {
      throw Error(ErrorCode::NotConfining, v.name() + " is not finite at x = " + std::to_string(outer));
    }
    if (step > 1e15) {
      throw Error(ErrorCode::NotConfining, v.name() + " never exceeds E_B = " + std::to_string(binding));
    }
    inner = outer;
    g_inner = g_outer;
    step *= 2.0;
    outer = x0 + direction * step;
    g_outer = g(outer);
  }
  // the wall must stay above E_B further out, else a second well exists
  for (int k = 1; k <= 8; ++k) {
    const double probe = x0 + direction * step * std::ldexp(1.0, k);
    if (g(probe) < 0.0) {
      throw Error(ErrorCode::MultiWellUnsupported,
                  v.name() + " drops below E_B again at x = " + std::to_string(probe));
    }
  }
  const double lo = std::min(inner, outer);
  const double hi = std::max(inner, outer);
  const double g_lo = lo == inner ? g_inner : g_outer;
  const double g_hi = hi == inner ? g_inner : g_outer;
  return numerics::bracketed_root(g, lo, hi, g_lo, g_hi);
}

}  // namespace detail

/// Classical turning points a < b with V(a) = V(b) = E - T(0).
inline TurningPoints turning_points(const BoundStateProblem& problem, double energy) {
  const double binding = binding_energy(problem, energy);
  const PotentialLaw& v = problem.potential;
  if (!(binding > v.minimum_value())) {
    throw Error(ErrorCode::NoClassicalRegion, "E_B = " + std::to_string(binding) +
                                                  " does not exceed min V = " + std::to_string(v.minimum_value()));
  }
  return {detail::find_wall(v, binding, -1.0), detail::find_wall(v, binding, +1.0)};
}

}  // namespace semiclassical
