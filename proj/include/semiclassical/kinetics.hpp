#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "numerics.hpp"

namespace semiclassical {

enum class Smoothness { smooth, non_smooth_at_zero };

/// Kinetic energy T(p) of an even, non-negative law increasing in |p|.
///
/// The law is stored as a rest energy T(0) plus the excitation
/// t(p) = T(p) - T(0), with t' = T', t'' = T'' and the inverse t^-1 on
/// [0, inf). Keeping t separate avoids the cancellation in T(p) - T(0) for
/// laws such as sqrt(p^2 + m^2), and makes shifting the rest energy exact.
class KineticLaw {
 public:
  using Function = std::function<double(double)>;

  KineticLaw(std::string name, std::map<std::string, double> parameters, double rest_energy,
             Function excitation, Function speed, Function inverse_mass,
             Function excitation_inverse, Smoothness smoothness)
      : name_(std::move(name)),
        parameters_(std::move(parameters)),
        rest_energy_(rest_energy),
        excitation_(std::move(excitation)),
        speed_(std::move(speed)),
        inverse_mass_(std::move(inverse_mass)),
        excitation_inverse_(std::move(excitation_inverse)),
        smoothness_(smoothness) {}

  /// T(p)
  double eval(double p) const { return rest_energy_ + excitation_(p); }
  /// t(p) = T(p) - T(0)
  double excitation(double p) const { return excitation_(p); }
  /// T'(p), the particle speed.
  double deriv(double p) const { return speed_(p); }
  /// T''(p)
  double deriv2(double p) const { return inverse_mass_(p); }

  /// t^-1(w) for w >= 0. Round-off below zero (down to -1e-12) maps to p = 0.
  double excitation_inverse(double w) const {
    if (w < 0.0) {
      if (w >= -clamp_tolerance) return 0.0;
      throw Error(ErrorCode::InverseDomain,
                  "kinetic inverse requested below the rest energy (w = " + std::to_string(w) + ")");
    }
    return excitation_inverse_(w);
  }

  /// T^-1(y) for y >= T(0), the non-negative branch.
  double inverse(double y) const { return excitation_inverse(y - rest_energy_); }

  double rest_energy() const noexcept { return rest_energy_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, double>& parameters() const noexcept { return parameters_; }

  /// Same dynamics with T(0) replaced.
  KineticLaw with_rest_energy(double rest_energy) const {
    KineticLaw copy = *this;
    copy.rest_energy_ = rest_energy;
    return copy;
  }

  static constexpr double clamp_tolerance = 1e-12;

 private:
  std::string name_;
  std::map<std::string, double> parameters_;
  double rest_energy_;
  Function excitation_;
  Function speed_;
  Function inverse_mass_;
  Function excitation_inverse_;
  Smoothness smoothness_;
};

namespace kinetic_laws {

/// p^2 / (2m)
inline KineticLaw nonrelativistic(double mass) {
  return KineticLaw(
      "nonrelativistic", {{"m", mass}}, 0.0, [mass](double p) { return p * p / (2.0 * mass); },
      [mass](double p) { return p / mass; }, [mass](double) { return 1.0 / mass; },
      [mass](double w) { return std::sqrt(2.0 * mass * w); }, Smoothness::smooth);
}

/// |p|
inline KineticLaw massless() {
  return KineticLaw(
      "massless", {}, 0.0, [](double p) { return std::abs(p); },
      [](double p) { return p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0); },
      [](double p) { return p == 0.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0; },
      [](double w) { return w; }, Smoothness::non_smooth_at_zero);
}

/// m sqrt(1 + p^2/m^2), i.e. sqrt(p^2 + m^2) for m > 0. A zero mass gives
/// the massless law; a negative mass yields a law that fails admissibility.
inline KineticLaw relativistic(double mass) {
  if (mass == 0.0) {
    KineticLaw law = massless();
    return KineticLaw("relativistic", {{"m", 0.0}}, 0.0,
                      [law](double p) { return law.excitation(p); },
                      [law](double p) { return law.deriv(p); },
                      [law](double p) { return law.deriv2(p); },
                      [](double w) { return w; }, Smoothness::non_smooth_at_zero);
  }
  const double sign = mass > 0.0 ? 1.0 : -1.0;
  const double mu = std::abs(mass);
  return KineticLaw(
      "relativistic", {{"m", mass}}, mass,
      [sign, mu](double p) { return sign * p * p / (std::hypot(p, mu) + mu); },
      [sign, mu](double p) { return sign * p / std::hypot(p, mu); },
      [sign, mu](double p) {
        const double e = std::hypot(p, mu);
        return sign * mu * mu / (e * e * e);
      },
      [sign, mu](double w) {
        if (sign < 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::sqrt(w * (w + 2.0 * mu));
      },
      Smoothness::smooth);
}

/// A user law given only by T(p). Derivatives come from central differences
/// and the inverse from a bracketed root search.
inline KineticLaw from_function(std::string name, std::function<double(double)> eval,
                                Smoothness smoothness = Smoothness::smooth) {
  const double rest = eval(0.0);
  auto t = [eval, rest](double p) { return eval(p) - rest; };
  auto speed = [eval](double p) {
    const double h = 1e-6 * std::max(1.0, std::abs(p));
    return (eval(p + h) - eval(p - h)) / (2.0 * h);
  };
  // a larger step for the second difference keeps round-off near 1e-8
  auto curvature = [eval](double p) {
    const double h = 1e-4 * std::max(1.0, std::abs(p));
    return (eval(p + h) - 2.0 * eval(p) + eval(p - h)) / (h * h);
  };
  auto inverse = [t](double w) {
    if (w == 0.0) return 0.0;
    double hi = 1.0;
    while (t(hi) < w) {
      hi *= 2.0;
      if (!std::isfinite(hi) || hi > 1e300) {
        throw Error(ErrorCode::InverseDomain, "kinetic law never reaches the requested energy");
      }
    }
    auto g = [&](double p) { return t(p) - w; };
    return numerics::bracketed_root(g, 0.0, hi, -w, g(hi));
  };
  return KineticLaw(std::move(name), {}, rest, t, speed, curvature, inverse, smoothness);
}

}  // namespace kinetic_laws

/// 1 / T''(0), the mass of the Schroedinger limit at small momentum.
inline double effective_mass(const KineticLaw& law) {
  if (law.smoothness() != Smoothness::smooth) {
    throw Error(ErrorCode::NoEffectiveMass, law.name() + " is not twice differentiable at p = 0");
  }
  const double curvature = law.deriv2(0.0);
  if (!(curvature > 0.0) || !std::isfinite(curvature)) {
    throw Error(ErrorCode::NoEffectiveMass, "T''(0) must be positive and finite");
  }
  return 1.0 / curvature;
}

/// t(p) = T(p) - T(0): identical dynamics, zero rest energy.
inline KineticLaw reduced_kinetic(const KineticLaw& law) { return law.with_rest_energy(0.0); }

/// T(p) + c
inline KineticLaw shifted(const KineticLaw& law, double c) {
  return law.with_rest_energy(law.rest_energy() + c);
}

struct ConditionCheck {
  std::string id;
  std::string description;
  bool passed = true;
  bool skipped = false;
  double worst_sample = 0.0;     // momentum of the worst sample
  double worst_violation = 0.0;  // size of the worst violation (0 when passed)
};

struct ValidationReport {
  std::string law;
  Smoothness smoothness = Smoothness::smooth;
  std::vector<ConditionCheck> checks;
  std::vector<std::string> notes;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.passed; });
  }
};

/// `count` equally spaced momenta on [-p_max, p_max].
inline std::vector<double> symmetric_momentum_grid(double p_max, std::size_t count = 2048) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = -p_max + 2.0 * p_max * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

namespace detail {

inline void record(ConditionCheck& check, double p, double violation) {
  if (!(violation <= 0.0)) {  // NaN counts as a violation
    const double size = std::isnan(violation) ? std::numeric_limits<double>::infinity() : violation;
    if (check.passed || size > check.worst_violation) {
      check.worst_sample = p;
      check.worst_violation = size;
    }
    check.passed = false;
  }
}

}  // namespace detail

/// Checks conditions A-D on a finite momentum sample. Never throws: each
/// failure is reported with its worst sample.
inline ValidationReport validate_admissibility(const KineticLaw& law, const std::vector<double>& p_samples) {
  ValidationReport report;
  report.law = law.name();
  report.smoothness = law.smoothness();
  if (p_samples.empty()) {
    report.checks.push_back({"samples", "momentum sample is non-empty", false, false, 0.0, 1.0});
    return report;
  }
  const bool kinked = law.smoothness() == Smoothness::non_smooth_at_zero;

  ConditionCheck positivity{"A", "T(p) >= 0"};
  ConditionCheck evenness{"B", "T(p) = T(-p)"};
  ConditionCheck monotone{"C", "T strictly increasing in |p|"};
  ConditionCheck smooth{"D", "T is C2: T', T'' finite and consistent with differences of T"};
  ConditionCheck odd_speed{"speed", "T'(-p) = -T'(p) and T'(0) = 0"};
  ConditionCheck inverse{"inverse", "T^-1(T(p)) = p for p >= 0"};

  std::vector<double> positive;
  for (double p : p_samples) {
    const double value = law.eval(p);
    detail::record(positivity, p, std::isfinite(value) ? -value : std::numeric_limits<double>::infinity());
    const double mirror = law.eval(-p);
    detail::record(evenness, p, std::abs(value - mirror) - 1e-12 * std::max(1.0, std::abs(value)));
    if (p > 0.0) positive.push_back(p);
  }

  positive.push_back(0.0);
  std::sort(positive.begin(), positive.end());
  positive.erase(std::unique(positive.begin(), positive.end()), positive.end());
  for (std::size_t i = 1; i < positive.size(); ++i) {
    const double rise = law.eval(positive[i]) - law.eval(positive[i - 1]);
    detail::record(monotone, positive[i], rise > 0.0 ? 0.0 : (std::isnan(rise) ? rise : -rise + 1e-300));
  }

  for (double p : p_samples) {
    const double h = 1e-6 * std::max(1.0, std::abs(p));
    if (kinked && std::abs(p) <= 2.0 * h) continue;
    const double v = law.deriv(p);
    const double c = law.deriv2(p);
    if (!std::isfinite(v) || !std::isfinite(c)) {
      detail::record(smooth, p, std::numeric_limits<double>::infinity());
      continue;
    }
    const double fd_speed = (law.eval(p + h) - law.eval(p - h)) / (2.0 * h);
    detail::record(smooth, p, std::abs(fd_speed - v) - 1e-6 * std::max(1.0, std::abs(v)));
    // T' may itself be a difference quotient, so the curvature check uses a wider step
    const double h2 = 1e-4 * std::max(1.0, std::abs(p));
    if (!kinked || std::abs(p) > 2.0 * h2) {
      const double fd_curv = (law.deriv(p + h2) - law.deriv(p - h2)) / (2.0 * h2);
      detail::record(smooth, p, std::abs(fd_curv - c) - 1e-4 * std::max(1.0, std::abs(c)));
    }
    detail::record(odd_speed, p, std::abs(law.deriv(-p) + v) - 1e-12 * std::max(1.0, std::abs(v)));
  }
  if (kinked) {
    report.notes.push_back(law.name() + " is flagged non_smooth_at_zero: T'' is not checked at p = 0");
  } else {
    const double v0 = law.deriv(0.0);
    detail::record(odd_speed, 0.0, std::isfinite(v0) ? std::abs(v0) - 1e-12 : v0);
    const double c0 = law.deriv2(0.0);
    if (!std::isfinite(c0)) detail::record(smooth, 0.0, std::numeric_limits<double>::infinity());
  }

  for (double p : positive) {
    double back = std::numeric_limits<double>::quiet_NaN();
    try {
      back = law.inverse(law.eval(p));
    } catch (const Error&) {
    }
    detail::record(inverse, p, std::isfinite(back) ? std::abs(back - p) - 1e-9 * std::max(1.0, p)
                                                   : std::numeric_limits<double>::infinity());
  }

  report.checks = {positivity, evenness, monotone, smooth, odd_speed, inverse};
  return report;
}

}  // namespace semiclassical
