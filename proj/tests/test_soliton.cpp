#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riccisol/catalog.hpp"
#include "riccisol/soliton.hpp"
#include "support/generators.hpp"

using namespace riccisol;

namespace {

// Flat R^2 with f = x1^3 and lambda = 1: not a soliton. Serves as the
// negative control everywhere below.
SolitonSpec non_soliton() {
  ChartSpec chart(2, {{-2.0, 2.0}, {-2.0, 2.0}});
  MetricField metric(2, {Expr::constant(1.0), Expr::constant(0.0), Expr::constant(1.0)});
  Expr f = pow(Expr::variable(0), 3.0);
  return SolitonSpec(std::move(chart), std::move(metric), std::move(f), 1.0,
                     SamplePlan::grid({5, 5}));
}

Vector vec2(double a, double b) {
  Vector p(2);
  p << a, b;
  return p;
}

}  // namespace

TEST_CASE("soliton_residual: exact fixtures give the zero matrix") {
  const auto gauss = gaussian_shrinker(2, 1.0);
  CHECK(soliton_residual(gauss.spec, vec2(0.7, -1.1)).cwiseAbs().maxCoeff() < 1e-14);

  const auto sphere = einstein_trivial(EinsteinKind::Sphere, 2, 1.0);
  CHECK(soliton_residual(sphere.spec, vec2(0.2, 0.3)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("soliton_residual: negative control is visibly nonzero") {
  const auto spec = non_soliton();
  const Matrix r = soliton_residual(spec, vec2(1.0, 0.0));
  // Hess f = diag(6 x1, 0), Ric = 0, so the residual is diag(6,0) - I.
  CHECK(r(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(r(1, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(r.cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("trace identity equals the trace of the soliton residual") {
  const auto gauss = gaussian_shrinker(3, 0.5);
  CHECK(std::abs(trace_identity_residual(gauss.spec, Vector::Zero(3))) < 1e-14);

  // Trace coherence holds for arbitrary inputs, soliton or not.
  const auto bad = non_soliton();
  gen::ExprGen g(321, 2);
  for (int i = 0; i < 10; ++i) {
    const Vector p = g.point(-1.5, 1.5);
    const auto cs = curvature_state(bad.metric(), p);
    const double via_matrix = (cs.metric_inv * soliton_residual(bad, p)).trace();
    const double direct = trace_identity_residual(bad, p);
    CHECK(std::abs(via_matrix - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("hamilton_constant: fitted constants match the closed forms") {
  {
    const auto fx = gaussian_shrinker(2, 1.0);
    const auto res = hamilton_constant(fx.spec);
    CHECK(std::abs(res.c) < 1e-12);
    CHECK(res.spread < 1e-12);
    CHECK(res.constant);
    // Already normalized: the potential comes back untouched.
    CHECK(structurally_equal(res.normalized.potential_expr(), fx.spec.potential_expr()));
  }
  {
    // Round sphere with f = 0: c = S = n*lambda, and the shift moves f to n/2.
    const auto fx = einstein_trivial(EinsteinKind::Sphere, 2, 1.0);
    const auto spec = fx.spec.with_potential(Expr::constant(0.0));
    const auto res = hamilton_constant(spec);
    CHECK(res.c == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.constant);
    const double shifted =
        evaluate(res.normalized.potential_expr(), std::span<const double>{});
    CHECK(shifted == doctest::Approx(1.0).epsilon(1e-12));  // n/2
  }
  {
    const auto fx = cylinder_shrinker(3, 1.0);
    const auto res = hamilton_constant(fx.spec);
    CHECK(std::abs(res.c) < 1e-12);
    CHECK(res.constant);
  }
  {
    // Non-constant h signals a non-soliton.
    const auto res = hamilton_constant(non_soliton());
    CHECK_FALSE(res.constant);
    CHECK(res.spread > 0.1);
  }
}

TEST_CASE("normalization is idempotent") {
  for (const auto& fx : builtin_fixtures()) {
    const auto once = hamilton_constant(fx.spec);
    const auto twice = hamilton_constant(once.normalized);
    CHECK(std::abs(twice.c) <= 1e-9 * (1.0 + std::abs(fx.spec.lambda())));
    CHECK(structurally_equal(twice.normalized.potential_expr(),
                             once.normalized.potential_expr()));
  }
}

TEST_CASE("identity_suite: negative control fails eq3 with the worst point") {
  const auto report = identity_suite(non_soliton());
  CHECK_FALSE(report.pass);
  const auto* eq3 = report.find(IdentityId::Eq3);
  REQUIRE(eq3 != nullptr);
  CHECK_FALSE(eq3->pass);
  CHECK(eq3->max_abs > 0.1);
  // Worst point is the box corner where |6 x1| peaks.
  CHECK(std::abs(eq3->worst_point[0]) == doctest::Approx(2.0));
}

TEST_CASE("identity_suite: auto-normalizes non-normalized input") {
  const auto fx = einstein_trivial(EinsteinKind::Sphere, 2, 1.0);
  const auto spec = fx.spec.with_potential(Expr::constant(0.0));
  const auto report = identity_suite(spec);
  CHECK(report.auto_normalized);
  CHECK(report.normalization_c == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.pass);
}

TEST_CASE("theorem1_pipeline: trivial fixtures satisfy the derived identities") {
  for (const auto* name : {"sphere-trivial-n2", "hyperbolic-trivial-n3"}) {
    const auto* fx = find_fixture(name);
    REQUIRE(fx != nullptr);
    const auto rep = theorem1_pipeline(fx->spec);
    const double n_half_lambda = 0.5 * fx->spec.dim() * fx->spec.lambda();
    CHECK(rep.hypothesis_holds);
    CHECK(std::abs(rep.c_prime - n_half_lambda) <= 1e-9 * std::abs(n_half_lambda));
    REQUIRE(rep.entries.size() == 3);
    for (const auto& e : rep.entries) {
      CAPTURE(identity_name(e.id));
      CHECK(e.pass);
      CHECK(e.max_abs <= 1e-8);
    }
  }
}

TEST_CASE("theorem1_pipeline: hypothesis correctly fails off the trivial branch") {
  for (const auto* name : {"gaussian-shrinker-2d", "gaussian-expander-2d", "cylinder-n3"}) {
    const auto* fx = find_fixture(name);
    REQUIRE(fx != nullptr);
    const auto rep = theorem1_pipeline(fx->spec);
    CAPTURE(name);
    CHECK_FALSE(rep.hypothesis_holds);
    CHECK(rep.spread > 1e-3);
    CHECK(rep.entries.empty());
    CHECK(rep.pass);  // failure of the hypothesis is an outcome, not an error
  }
  // Larger cylinder: S constant but f is not, so S - lambda f spreads.
  const auto rep = theorem1_pipeline(cylinder_shrinker(4, 1.0).spec);
  CHECK_FALSE(rep.hypothesis_holds);
}

TEST_CASE("classify_triviality: fixture verdicts and iff-consistency") {
  for (const auto& fx : builtin_fixtures()) {
    const auto v = classify_triviality(fx.spec);
    CAPTURE(fx.name);
    CHECK(v.verdict == (fx.trivial ? Triviality::Trivial : Triviality::NonTrivial));
    CHECK_FALSE(v.consistency_flag);
  }
  // Extra coverage off the default instances.
  CHECK(classify_triviality(einstein_trivial(EinsteinKind::Sphere, 3, 2.0).spec).verdict ==
        Triviality::Trivial);
  CHECK(classify_triviality(einstein_trivial(EinsteinKind::Hyperbolic, 2, 1.0).spec).verdict ==
        Triviality::Trivial);
  CHECK(classify_triviality(cylinder_shrinker(4, 1.0).spec).verdict == Triviality::NonTrivial);
  CHECK(classify_triviality(gaussian_expander(3, -0.5).spec).verdict == Triviality::NonTrivial);
}

TEST_CASE("classify_triviality: split predicates give Inconclusive and raise the flag") {
  // Flat metric with constant f and lambda = 1: f-spread is zero but the
  // criterion residual is |0 - 1*(1 + 1)| = 2. Not a soliton, so the flag may
  // (and must) fire.
  ChartSpec chart(2, {{-1.0, 1.0}, {-1.0, 1.0}});
  MetricField metric(2, {Expr::constant(1.0), Expr::constant(0.0), Expr::constant(1.0)});
  SolitonSpec spec(std::move(chart), std::move(metric), Expr::constant(1.0), 1.0,
                   SamplePlan::grid({5, 5}));
  const auto v = classify_triviality(spec);
  CHECK(v.verdict == Triviality::Inconclusive);
  CHECK(v.consistency_flag);
}

TEST_CASE("poisson_check: trivial branch and hypothesis failure") {
  {
    const auto fx = einstein_trivial(EinsteinKind::Sphere, 2, 1.0);
    const auto rep = poisson_check(fx.spec);
    CHECK(rep.hypothesis_holds);          // S constant: both sides vanish
    CHECK(rep.max_r1 < 1e-10);
    CHECK_FALSE(rep.conclusion_applies);  // trivial branch
    CHECK(rep.algebra_ok);
    CHECK(rep.caveat == kCompactnessCaveat);
  }
  {
    // Gaussian: lap S = 0 but lambda(n lambda - S) = n lambda^2.
    const auto fx = gaussian_shrinker(2, 1.0);
    const auto rep = poisson_check(fx.spec);
    CHECK_FALSE(rep.hypothesis_holds);
    CHECK(rep.max_r1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.algebra_ok);
  }
}

TEST_CASE("poisson_check: r2 = r1 is an algebraic consequence of eq5") {
  // On arbitrary smooth (g, f, lambda) the two residuals differ by
  // -lambda * (eq5 residual); wherever eq5 is tiny they must agree.
  gen::ExprGen g(777, 2);
  auto metric = gen::random_perturbed_flat(g.rng(), 2);
  ChartSpec chart(2, {{-1.0, 1.0}, {-1.0, 1.0}});
  SolitonSpec spec(std::move(chart), std::move(metric), gen::random_potential(g.rng(), 2), 0.8,
                   SamplePlan::grid({4, 4}));
  const auto rep = poisson_check(spec);
  CHECK(rep.algebra_ok);
  CHECK(rep.max_r2_minus_r1 <=
        std::abs(spec.lambda()) * rep.max_eq5_residual + 1e-12 * (1.0 + rep.max_r1));

  for (const auto& fx : builtin_fixtures()) {
    const auto r = poisson_check(fx.spec);
    CAPTURE(fx.name);
    CHECK(r.algebra_ok);
    CHECK(r.max_r2_minus_r1 <= 1e-10);
  }
}

TEST_CASE("steady solitons: identities run, theorem operations reject") {
  ChartSpec chart(2, {{-1.0, 1.0}, {-1.0, 1.0}});
  MetricField metric(2, {Expr::constant(1.0), Expr::constant(0.0), Expr::constant(1.0)});
  SolitonSpec steady(std::move(chart), std::move(metric), Expr::constant(0.0), 0.0,
                     SamplePlan::grid({4, 4}));
  CHECK(steady.kind() == SolitonKind::Steady);

  const auto report = identity_suite(steady);  // flat + constant f is a steady soliton
  CHECK(report.pass);

  CHECK_THROWS_AS(hamilton_constant(steady), std::invalid_argument);
  CHECK_THROWS_AS(classify_triviality(steady), std::invalid_argument);
  CHECK_THROWS_AS(theorem1_pipeline(steady), std::invalid_argument);
  CHECK_THROWS_AS(poisson_check(steady), std::invalid_argument);
}

TEST_CASE("sign coverage: shrinking and expanding fixtures both pass") {
  for (const auto* name : {"gaussian-shrinker-2d", "gaussian-expander-2d",
                           "sphere-trivial-n2", "hyperbolic-trivial-n3"}) {
    const auto* fx = find_fixture(name);
    REQUIRE(fx != nullptr);
    CAPTURE(name);
    CHECK(identity_suite(fx->spec).pass);
  }
}

TEST_CASE("sample plans validate") {
  ChartSpec chart(2, {{-1.0, 1.0}, {-1.0, 1.0}});
  MetricField metric(2, {Expr::constant(1.0), Expr::constant(0.0), Expr::constant(1.0)});
  SolitonSpec spec(chart, metric, Expr::constant(0.0), 1.0, SamplePlan::grid({3, 3}));
  CHECK(spec.samples().size() == 9);

  Vector outside(2);
  outside << 5.0, 5.0;  // outside the box is fine; validity predicates decide
  SolitonSpec listed = spec.with_plan(SamplePlan::list({outside}));
  CHECK(listed.samples().size() == 1);

  CHECK_THROWS_AS(SolitonSpec(chart, metric, Expr::variable(2), 1.0, SamplePlan{}),
                  std::invalid_argument);
}
