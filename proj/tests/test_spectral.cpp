#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riccisol/catalog.hpp"
#include "riccisol/spectral.hpp"

using namespace riccisol;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("build_laplacian: stiffness rows sum to zero, pattern symmetric") {
  for (const auto tag : {ManifoldTag::Torus, ManifoldTag::Sphere}) {
    const auto op = build_laplacian(tag, 16, tag == ManifoldTag::Torus ? kTwoPi : 1.0);
    const Vector ones = Vector::Ones(op.vertex_count());
    CHECK((op.stiffness * ones).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::SparseMatrix<double> diff =
        op.stiffness - Eigen::SparseMatrix<double>(op.stiffness.transpose());
    CHECK(Matrix(diff).cwiseAbs().maxCoeff() == 0.0);
    CHECK(op.mass.minCoeff() > 0.0);
  }
}

TEST_CASE("build_laplacian: measures") {
  const auto torus = build_laplacian(ManifoldTag::Torus, 64, kTwoPi);
  CHECK(torus.total_measure() == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-12));

  for (const double r : {1.0, 2.0}) {
    const auto sphere = build_laplacian(ManifoldTag::Sphere, 64, r);
    const double area = 4.0 * std::numbers::pi * r * r;
    CHECK(std::abs(sphere.total_measure() - area) <= 0.01 * area);
    CHECK(sphere.pole_offset == doctest::Approx(0.5 * std::numbers::pi / 64));
  }
}

TEST_CASE("build_laplacian: resolution preconditions and low-res flag") {
  CHECK_THROWS_AS(build_laplacian(ManifoldTag::Torus, 4, kTwoPi), std::invalid_argument);
  CHECK_THROWS_AS(build_laplacian(ManifoldTag::Sphere, 7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_laplacian(ManifoldTag::Sphere, 64, -1.0), std::invalid_argument);
  CHECK(build_laplacian(ManifoldTag::Torus, 8, kTwoPi).low_resolution);
  CHECK_FALSE(build_laplacian(ManifoldTag::Torus, 16, kTwoPi).low_resolution);
}

TEST_CASE("first_eigenvalue: closed forms") {
  {
    const auto op = build_laplacian(ManifoldTag::Torus, 32, kTwoPi);
    const auto est = first_eigenvalue(op);
    CHECK(est.converged);
    CHECK(std::abs(est.lambda1 - 1.0) <= 0.01);
  }
  {
    const auto op = build_laplacian(ManifoldTag::Sphere, 32, 1.0);
    const auto est = first_eigenvalue(op);
    CHECK(std::abs(est.lambda1 - 2.0) <= 0.02);
  }
  {
    // lambda1 scales as 1/r^2; with the same grid the scaling is exact.
    const auto r1 = first_eigenvalue(build_laplacian(ManifoldTag::Sphere, 32, 1.0));
    const auto r2 = first_eigenvalue(build_laplacian(ManifoldTag::Sphere, 32, 2.0));
    CHECK(r2.lambda1 == doctest::Approx(r1.lambda1 / 4.0).epsilon(1e-8));
    CHECK(std::abs(r2.lambda1 - 0.5) <= 0.01);
  }
  {
    // Side length scaling on the torus.
    const auto est = first_eigenvalue(build_laplacian(ManifoldTag::Torus, 32, kTwoPi / 2.0));
    CHECK(std::abs(est.lambda1 - 4.0) <= 0.04);
  }
}

TEST_CASE("first_eigenvalue: deterministic for a fixed seed, deflated exactly") {
  const auto op = build_laplacian(ManifoldTag::Sphere, 16, 1.0);
  const auto a = first_eigenvalue(op, 1e-10, 42);
  const auto b = first_eigenvalue(op, 1e-10, 42);
  CHECK(a.lambda1 == b.lambda1);  // bit-for-bit
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) CHECK(a.history[i] == b.history[i]);

  const auto c = first_eigenvalue(op, 1e-10, 43);
  CHECK(std::abs(c.lambda1 - a.lambda1) <= 1e-8 * a.lambda1);

  CHECK(a.constant_orthogonality <= 1e-10);
}

TEST_CASE("first_eigenvalue: second-order convergence") {
  for (const auto tag : {ManifoldTag::Torus, ManifoldTag::Sphere}) {
    const double size = tag == ManifoldTag::Torus ? kTwoPi : 1.0;
    const double exact = reference_lambda1(tag, size);
    double prev_err = 0.0;
    for (int k : {16, 32}) {
      const auto est = first_eigenvalue(build_laplacian(tag, k, size));
      const double err = std::abs(est.lambda1 - exact);
      if (prev_err > 0.0) CHECK(err <= 0.35 * prev_err);
      prev_err = err;
    }
  }
}

TEST_CASE("reference_lambda1 closed forms") {
  CHECK(reference_lambda1(ManifoldTag::Torus, kTwoPi) == doctest::Approx(1.0));
  CHECK(reference_lambda1(ManifoldTag::Torus, kTwoPi / 3.0) == doctest::Approx(9.0));
  CHECK(reference_lambda1(ManifoldTag::Sphere, 1.0) == doctest::Approx(2.0));
  CHECK(reference_lambda1(ManifoldTag::Sphere, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("dichotomy_report: branches") {
  // Trivial sphere fixture: lambda = (n-1)/r^2 = 1 sits below lambda1 = 2,
  // consistent because the trivial branch carries the statement.
  const auto fx = einstein_trivial(EinsteinKind::Sphere, 2, 1.0);
  const auto poisson = poisson_check(fx.spec);
  const auto verdict = classify_triviality(fx.spec);
  const auto est = first_eigenvalue(build_laplacian(ManifoldTag::Sphere, 32, 1.0));
  const auto rep = dichotomy_report(verdict.verdict == Triviality::Trivial, poisson.max_r1,
                                    fx.spec.lambda(), est.lambda1);
  CHECK(rep.hypothesis_satisfied);
  CHECK(rep.trivial_branch);
  CHECK(rep.dichotomy_satisfied);
  CHECK(rep.lambda < rep.lambda1);

  // Perturbed potential: the quadruple is no longer a soliton, so the
  // premise residual (soliton equation combined with the Poisson residual)
  // is visibly nonzero and the statement is silent.
  const auto perturbed = fx.spec.with_potential(
      Expr::constant(1.0) + Expr::constant(0.2) * Expr::variable(0));
  const auto bad_suite = identity_suite(perturbed);
  const auto bad_poisson = poisson_check(perturbed);
  const double premise =
      std::max(bad_suite.find(IdentityId::Eq3)->max_abs, bad_poisson.max_r1);
  CHECK(premise > 1e-3);
  const auto silent = dichotomy_report(false, premise, fx.spec.lambda(), est.lambda1);
  CHECK_FALSE(silent.hypothesis_satisfied);
  CHECK(silent.note.find("silent") != std::string::npos);
}
