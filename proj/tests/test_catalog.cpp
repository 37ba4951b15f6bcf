#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "riccisol/catalog.hpp"

using namespace riccisol;

namespace {

double eval_const(const Expr& e) { return evaluate(e, std::span<const double>{}); }

}  // namespace

TEST_CASE("catalog: five fixtures with the advertised names") {
  const auto& all = builtin_fixtures();
  REQUIRE(all.size() >= 5);
  std::set<std::string> names;
  for (const auto& fx : all) names.insert(fx.name);
  for (const auto* expected :
       {"gaussian-shrinker-2d", "gaussian-expander-2d", "sphere-trivial-n2",
        "hyperbolic-trivial-n3", "cylinder-n3"})
    CHECK(names.count(expected) == 1);
  CHECK(find_fixture("no-such-fixture") == nullptr);
}

TEST_CASE("catalog: triviality/sign coverage cells") {
  bool trivial_shrinking = false, trivial_expanding = false;
  bool nontrivial_shrinking = false, nontrivial_expanding = false;
  for (const auto& fx : builtin_fixtures()) {
    const bool shrinking = fx.spec.kind() == SolitonKind::Shrinking;
    if (fx.trivial && shrinking) trivial_shrinking = true;
    if (fx.trivial && !shrinking) trivial_expanding = true;
    if (!fx.trivial && shrinking) nontrivial_shrinking = true;
    if (!fx.trivial && !shrinking) nontrivial_expanding = true;
  }
  CHECK(trivial_shrinking);
  CHECK(trivial_expanding);
  CHECK(nontrivial_shrinking);
  CHECK(nontrivial_expanding);
}

TEST_CASE("catalog: every fixture passes the identity suite (the contract)") {
  for (const auto& fx : builtin_fixtures()) {
    CAPTURE(fx.name);
    const auto samples = fx.spec.samples();
    CHECK(samples.size() >= 100);
    const auto report = identity_suite(fx.spec);
    CHECK(report.pass);
    for (const auto& e : report.entries) {
      CAPTURE(identity_name(e.id));
      CHECK(e.max_abs <= 1e-7);
    }
    CHECK(std::abs(report.normalization_c - fx.expected_c) <= 1e-9);
  }
}

TEST_CASE("catalog: expected values match computed values at every sample") {
  for (const auto& fx : builtin_fixtures()) {
    CAPTURE(fx.name);
    for (const auto& p : fx.spec.samples()) {
      const auto sp = std::span<const double>(p.data(), static_cast<std::size_t>(p.size()));
      const auto cs = curvature_state(fx.spec.metric(), p);
      const auto ps = potential_state(fx.spec.metric(), fx.spec.potential(), p);
      const double s_expect = evaluate(fx.expected_scalar, sp);
      const double ric2_expect = evaluate(fx.expected_ricci_norm2, sp);
      const double hess2_expect = evaluate(fx.expected_hess_norm2, sp);
      CHECK(std::abs(cs.scalar - s_expect) <= 1e-7 * (1.0 + std::abs(s_expect)));
      CHECK(std::abs(cs.ricci_norm2 - ric2_expect) <= 1e-7 * (1.0 + ric2_expect));
      CHECK(std::abs(ps.hess_norm2 - hess2_expect) <= 1e-7 * (1.0 + hess2_expect));
    }
  }
}

TEST_CASE("catalog: verdicts match the declared triviality") {
  for (const auto& fx : builtin_fixtures()) {
    CAPTURE(fx.name);
    const auto v = classify_triviality(fx.spec);
    CHECK((v.verdict == Triviality::Trivial) == fx.trivial);
    CHECK_FALSE(v.consistency_flag);
  }
}

TEST_CASE("gaussian fixtures: closed-form spot checks") {
  {
    const auto fx = gaussian_shrinker(2, 1.0);
    // Hess f = delta, so |Hess f|^2 = 2 everywhere.
    CHECK(eval_const(fx.expected_hess_norm2) == 2.0);
    CHECK(soliton_residual(fx.spec, Vector::Zero(2)).cwiseAbs().maxCoeff() < 1e-15);
  }
  {
    const auto fx = gaussian_shrinker(3, 0.5);
    Vector p = Vector::Zero(3);
    const auto ps = potential_state(fx.spec.metric(), fx.spec.potential(), p);
    CHECK(ps.lap == doctest::Approx(1.5).epsilon(1e-14));  // n*lambda
  }
  CHECK(classify_triviality(gaussian_shrinker(2, 1.0).spec).verdict ==
        Triviality::NonTrivial);
}

TEST_CASE("einstein fixtures: closed-form spot checks") {
  {
    const auto fx = einstein_trivial(EinsteinKind::Sphere, 2, 1.0);
    CHECK(fx.spec.lambda() == 1.0);
    CHECK(eval_const(fx.expected_scalar) == 2.0);
    // S = lambda*(f + n/2) = 1*(1 + 1).
    const double f = eval_const(fx.spec.potential_expr());
    CHECK(fx.spec.lambda() * (f + 1.0) == 2.0);
  }
  {
    const auto fx = einstein_trivial(EinsteinKind::Hyperbolic, 3, 1.0);
    CHECK(fx.spec.lambda() == -2.0);
    CHECK(eval_const(fx.expected_scalar) == -6.0);
    const double f = eval_const(fx.spec.potential_expr());
    CHECK(fx.spec.lambda() * (f + 1.5) == -6.0);
  }
  {
    // Cauchy-Schwarz is saturated on Einstein metrics.
    const auto fx = einstein_trivial(EinsteinKind::Sphere, 3, 2.0);
    const auto cs = curvature_state(fx.spec.metric(), Vector::Zero(3));
    const double s2 = cs.scalar * cs.scalar;
    CHECK(std::abs(cs.ricci_norm2 - s2 / 3.0) <= 1e-9 * s2);
  }
}

TEST_CASE("cylinder fixture: closed-form spot checks") {
  const auto fx = cylinder_shrinker(3, 1.0);
  CHECK(fx.spec.lambda() == 1.0);
  CHECK(eval_const(fx.expected_scalar) == 2.0);

  Vector p(3);
  p << 0.1, -0.2, 0.7;
  CHECK(soliton_residual(fx.spec, p).cwiseAbs().maxCoeff() <= 1e-8);

  // Hamilton check: S + |grad f|^2 - 2 lambda f = 2 + t^2 - (t^2 + 2) = 0.
  const auto res = hamilton_constant(fx.spec);
  CHECK(std::abs(res.c) < 1e-12);

  // n = 4: the Theorem-1 hypothesis correctly fails (S constant, f not).
  CHECK_FALSE(theorem1_pipeline(cylinder_shrinker(4, 1.0).spec).hypothesis_holds);
}

TEST_CASE("catalog constructors reject bad parameters") {
  CHECK_THROWS_AS(gaussian_shrinker(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_shrinker(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_expander(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(einstein_trivial(EinsteinKind::Sphere, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cylinder_shrinker(2, 1.0), std::invalid_argument);
}
