#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <semiclassical/kinetics.hpp>

namespace sc = semiclassical;
namespace kl = semiclassical::kinetic_laws;

namespace {

const sc::ConditionCheck& find_check(const sc::ValidationReport& report, const std::string& id) {
  for (const auto& c : report.checks) {
    if (c.id == id) return c;
  }
  throw std::runtime_error("no check " + id);
}

std::vector<sc::KineticLaw> builtin_laws() {
  return {kl::nonrelativistic(1.0), kl::nonrelativistic(3.0), kl::relativistic(0.2), kl::relativistic(50.0),
          kl::massless()};
}

}  // namespace

TEST(KineticLaw, NonrelativisticPassesAllConditions) {
  const auto report = sc::validate_admissibility(kl::nonrelativistic(1.0), sc::symmetric_momentum_grid(5.0));
  EXPECT_TRUE(report.all_passed());
}

TEST(KineticLaw, RelativisticPassesAllConditions) {
  const auto report = sc::validate_admissibility(kl::relativistic(0.2), sc::symmetric_momentum_grid(10.0));
  EXPECT_TRUE(report.all_passed());
  EXPECT_EQ(report.smoothness, sc::Smoothness::smooth);
}

TEST(KineticLaw, MasslessPassesWithNonSmoothFlag) {
  const auto report = sc::validate_admissibility(kl::massless(), sc::symmetric_momentum_grid(10.0));
  EXPECT_TRUE(find_check(report, "A").passed);
  EXPECT_TRUE(find_check(report, "B").passed);
  EXPECT_TRUE(find_check(report, "C").passed);
  EXPECT_EQ(report.smoothness, sc::Smoothness::non_smooth_at_zero);
  EXPECT_FALSE(report.notes.empty());
}

TEST(KineticLaw, NegativeMassFailsPositivityAndMonotonicity) {
  const auto report = sc::validate_admissibility(kl::relativistic(-1.0), sc::symmetric_momentum_grid(10.0));
  EXPECT_FALSE(report.all_passed());
  EXPECT_FALSE(find_check(report, "A").passed);
  EXPECT_FALSE(find_check(report, "C").passed);
}

TEST(KineticLaw, OddLawFailsEvenness) {
  const auto law = kl::from_function("odd", [](double p) { return p * p + 0.1 * p * p * p; });
  const auto report = sc::validate_admissibility(law, sc::symmetric_momentum_grid(2.0));
  EXPECT_FALSE(find_check(report, "B").passed);
}

TEST(KineticLaw, EmptySampleIsReportedNotThrown) {
  const auto report = sc::validate_admissibility(kl::massless(), {});
  EXPECT_FALSE(report.all_passed());
}

TEST(EffectiveMass, Values) {
  EXPECT_DOUBLE_EQ(sc::effective_mass(kl::nonrelativistic(3.0)), 3.0);
  // T''(0) = 1/m for sqrt(p^2 + m^2)
  EXPECT_NEAR(sc::effective_mass(kl::relativistic(0.2)), 0.2, 1e-15);
  try {
    sc::effective_mass(kl::massless());
    FAIL() << "massless law has no effective mass";
  } catch (const sc::Error& e) {
    EXPECT_EQ(e.code(), sc::ErrorCode::NoEffectiveMass);
  }
}

TEST(ReducedKinetic, RelativisticRestEnergyRemoved) {
  const auto reduced = sc::reduced_kinetic(kl::relativistic(0.2));
  EXPECT_EQ(reduced.eval(0.0), 0.0);
  EXPECT_EQ(reduced.rest_energy(), 0.0);
  // t^-1(w) = sqrt(w^2 + 2 m w) = sqrt(0.21)
  EXPECT_NEAR(reduced.inverse(0.3), std::sqrt(0.21), 1e-15);
  EXPECT_NEAR(reduced.inverse(0.3), 0.458257569495584, 1e-12);
  EXPECT_EQ(reduced.deriv(0.7), kl::relativistic(0.2).deriv(0.7));
}

TEST(ReducedKinetic, MasslessUnchangedAndIdempotent) {
  const auto massless = kl::massless();
  const auto reduced = sc::reduced_kinetic(massless);
  for (double p : {-3.0, -0.5, 0.0, 0.25, 4.0}) EXPECT_EQ(reduced.eval(p), massless.eval(p));

  for (const auto& law : builtin_laws()) {
    const auto once = sc::reduced_kinetic(law);
    const auto twice = sc::reduced_kinetic(once);
    for (double p : {0.0, 0.1, 1.0, 7.5}) {
      EXPECT_EQ(once.eval(p), twice.eval(p));
      EXPECT_EQ(once.inverse(once.eval(p)), twice.inverse(twice.eval(p)));
    }
  }
}

TEST(KineticLaw, InverseClampsRoundOffBelowRest) {
  const auto law = kl::relativistic(0.2);
  EXPECT_EQ(law.inverse(0.2 - 5e-13), 0.0);
  EXPECT_THROW(law.inverse(0.2 - 1e-9), sc::Error);
}

// Invariant: inverse(eval(|p|)) = |p| within 1e-12 relative. Through eval the
// problem has condition number (p^2 + T(0)^2) / p^2 or so, so the heavy law is
// held to that bound and, separately, to 1e-12 on the excitation.
TEST(KineticLawProperty, InverseRoundTrip) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(-20.0, 20.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (const auto& law : builtin_laws()) {
    const double rest = law.rest_energy();
    for (int i = 0; i < 2000; ++i) {
      const double p = std::abs(dist(rng));
      const double back = law.inverse(law.eval(p));
      const double conditioning = 1.0 + rest * rest / (p * p);
      EXPECT_NEAR(back, p, std::max(1e-12, 4.0 * eps * conditioning) * p) << law.name() << " p=" << p;
      if (rest <= 1.0) {
        EXPECT_NEAR(back, p, 1e-12 * p) << law.name() << " p=" << p;
      }
      EXPECT_NEAR(law.excitation_inverse(law.excitation(p)), p, 1e-12 * p) << law.name() << " p=" << p;
    }
  }
}

// Invariant: T' agrees with central differences (step 1e-6) away from kinks.
TEST(KineticLawProperty, SpeedMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (const auto& law : builtin_laws()) {
    for (int i = 0; i < 300; ++i) {
      const double p = dist(rng);
      if (law.smoothness() == sc::Smoothness::non_smooth_at_zero && std::abs(p) < 1e-5) continue;
      const double h = 1e-6;
      const double fd = (law.eval(p + h) - law.eval(p - h)) / (2.0 * h);
      EXPECT_NEAR(fd, law.deriv(p), 1e-6 * std::max(1.0, std::abs(law.deriv(p)))) << law.name();
      EXPECT_NEAR(law.deriv(-p), -law.deriv(p), 1e-15);
    }
  }
}

// Small-momentum expansion T(p) = T(0) + p^2 / (2M) + O(p^4), C frozen per law.
TEST(KineticLawProperty, SmallMomentumExpansion) {
  struct Case {
    sc::KineticLaw law;
    double c;  // |T''''(0)| / 24 bound
  };
  // p^2/2m: exact (C = 0); sqrt(p^2+m^2): quartic coefficient 1/(8 m^3) = 15.625 at m = 0.2
  const std::vector<Case> cases{{kl::nonrelativistic(2.0), 1e-12}, {kl::relativistic(0.2), 15.625 * 1.0001},
                                {kl::relativistic(50.0), 1.0 / (8.0 * 50.0 * 50.0 * 50.0) * 1.0001}};
  for (const auto& [law, c] : cases) {
    const double mass = sc::effective_mass(law);
    for (int i = -100; i <= 100; ++i) {
      const double p = 0.001 * i;
      const double remainder = std::abs(law.excitation(p) - p * p / (2.0 * mass));
      EXPECT_LE(remainder, c * std::pow(p, 4) + 1e-15) << law.name() << " p=" << p;
    }
  }
}

TEST(KineticLaw, SynthesizedFromEvalOnly) {
  const auto user = kl::from_function("user_rel", [](double p) { return std::sqrt(p * p + 1.0); });
  const auto exact = kl::relativistic(1.0);
  EXPECT_NEAR(user.rest_energy(), 1.0, 1e-15);
  for (double p : {0.0, 0.3, 1.0, 2.5, -4.0}) {
    EXPECT_NEAR(user.deriv(p), exact.deriv(p), 1e-8);
    EXPECT_NEAR(user.deriv2(p), exact.deriv2(p), 1e-6);
  }
  for (double w : {0.0, 0.01, 1.0, 7.0}) EXPECT_NEAR(user.excitation_inverse(w), exact.excitation_inverse(w), 1e-12);
  EXPECT_TRUE(sc::validate_admissibility(user, sc::symmetric_momentum_grid(5.0)).all_passed());
}

TEST(KineticLaw, ShiftAddsRestEnergyOnly) {
  const auto law = kl::relativistic(0.2);
  const auto up = sc::shifted(law, 3.0);
  EXPECT_DOUBLE_EQ(up.rest_energy(), 3.2);
  EXPECT_EQ(up.excitation(1.3), law.excitation(1.3));
  EXPECT_NEAR(up.inverse(3.0 + law.eval(0.8)), 0.8, 1e-14);
}
