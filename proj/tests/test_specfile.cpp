#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riccisol/catalog.hpp"
#include "riccisol/specfile.hpp"

using namespace riccisol;

namespace {

constexpr const char* kGaussian = R"(# flat-space shrinker
dimension = 2
coordinates = x, y
lambda = 1
potential = (x^2 + y^2)/2
metric 1,1 = 1
metric 2,2 = 1          # off-diagonal defaults to 0
domain x = -2 .. 2
domain y = -2 .. 2
samples x = 11
samples y = 11
)";

}  // namespace

TEST_CASE("flat format: loads and verifies") {
  const auto loaded = load_spec_text(kGaussian);
  const auto& spec = loaded.spec;
  CHECK(spec.dim() == 2);
  CHECK(spec.lambda() == 1.0);
  CHECK(spec.kind() == SolitonKind::Shrinking);
  CHECK(spec.chart().coord_names()[0] == "x");
  CHECK(spec.samples().size() == 121);
  CHECK_FALSE(loaded.tolerance.has_value());

  Vector p(2);
  p << 0.5, -0.5;
  CHECK(soliton_residual(spec, p).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(identity_suite(spec).pass);
}

TEST_CASE("flat format: tolerance override, global samples, explicit points") {
  const auto loaded = load_spec_text(
      "dimension = 2\nlambda = -1\npotential = -(x1^2 + x2^2)/2\n"
      "metric 1,1 = 1\nmetric 2,2 = 1\n"
      "domain x1 = -1 .. 1\ndomain x2 = -1 .. 1\n"
      "samples = 5\n"
      "tolerance abs = 1e-9\ntolerance rel = 1e-7\n");
  REQUIRE(loaded.tolerance.has_value());
  CHECK(loaded.tolerance->abs == 1e-9);
  CHECK(loaded.tolerance->rel == 1e-7);
  CHECK(loaded.spec.samples().size() == 25);
  CHECK(loaded.spec.kind() == SolitonKind::Expanding);

  const auto pts = load_spec_text(
      "dimension = 2\nlambda = 1\npotential = 0\n"
      "metric 1,1 = 1\nmetric 2,2 = 1\n"
      "domain x1 = -1 .. 1\ndomain x2 = -1 .. 1\n"
      "point = 0, 0\npoint = 0.25, -0.75\n");
  CHECK(pts.spec.samples().size() == 2);
  CHECK(pts.spec.samples()[1][1] == -0.75);
}

TEST_CASE("flat format: validity predicate filters the grid") {
  const auto loaded = load_spec_text(
      "dimension = 2\nlambda = 1\npotential = 0\n"
      "metric 1,1 = 1\nmetric 2,2 = 1\n"
      "domain x1 = -1 .. 1\ndomain x2 = -1 .. 1\n"
      "samples = 5\nvalidity = 1 - x1^2 - x2^2\n");
  // Corners of the 5x5 grid violate |x| < 1.
  CHECK(loaded.spec.samples().size() < 25);
  for (const auto& p : loaded.spec.samples()) CHECK(p.squaredNorm() < 1.0);
}

TEST_CASE("flat format: keyed diagnostics") {
  auto expect_error = [](const std::string& text, const std::string& needle,
                         std::size_t line = 0) {
    try {
      load_spec_text(text);
      FAIL("expected a spec error for: ", text);
    } catch (const SpecFileError& e) {
      CAPTURE(text);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      if (line > 0) CHECK(e.line() == line);
    }
  };

  expect_error("dimension = 2\nbogus = 1\n", "unknown key", 2);
  expect_error("lambda = 1\n", "missing key: dimension");
  expect_error("dimension = 2\nlambda = 1\nmetric 1,2 = 1\n", "lower triangle", 3);
  expect_error("dimension = 2\nlambda = 1\nmetric 3,1 = 1\n", "out of range", 3);
  expect_error("dimension = 2\nlambda = 1\nmetric 1,1 = 1\nmetric 1,1 = 2\n", "duplicate", 4);
  expect_error("dimension = 2\nlambda = x\n", "expected a number", 2);
  expect_error("dimension = 2\ndomain q = -1 .. 1\n", "unknown coordinate", 2);
  expect_error("dimension = 2\ntolerance foo = 1\n", "tolerance", 2);
  expect_error("dimension = 2\nlambda = 1\npotential = 0\nmetric 2,2 = 1\n"
               "domain x1 = -1 .. 1\ndomain x2 = -1 .. 1\n",
               "missing metric diagonal");
  expect_error("dimension = 2\nlambda = 1\npotential = x3\nmetric 1,1 = 1\nmetric 2,2 = 1\n"
               "domain x1 = -1 .. 1\ndomain x2 = -1 .. 1\n",
               "out of range", 3);
  expect_error("dimension = 1\nlambda = 1\n", "at least 2");
  expect_error("", "empty");
  expect_error("dimension = 2\nno equals sign here\n", "key = value", 2);
}

TEST_CASE("JSON format: loads and verifies") {
  const auto loaded = load_spec_text(R"({
    "dimension": 2,
    "coordinates": ["x", "y"],
    "lambda": 1.0,
    "potential": "(x^2 + y^2)/2",
    "metric": {"1,1": "1", "2,2": "1"},
    "domain": {"x": [-2, 2], "y": [-2, 2]},
    "samples": {"x": 11, "y": 11},
    "tolerance": {"abs": 1e-8, "rel": 1e-8}
  })");
  CHECK(loaded.spec.dim() == 2);
  CHECK(loaded.spec.samples().size() == 121);
  REQUIRE(loaded.tolerance.has_value());
  CHECK(identity_suite(loaded.spec).pass);
}

TEST_CASE("JSON format: errors") {
  CHECK_THROWS_AS(load_spec_text("{ not json"), SpecFileError);
  CHECK_THROWS_AS(load_spec_text("{\"dimension\": 2, \"bogus\": 1}"), SpecFileError);
  CHECK_THROWS_AS(load_spec_text("[1, 2]"), SpecFileError);
  CHECK_THROWS_AS(load_spec_text(R"({"dimension": 2, "metric": {"1,2": "1"}})"),
                  SpecFileError);
}

TEST_CASE("emit/load round-trip for every fixture") {
  for (const auto& fx : builtin_fixtures()) {
    CAPTURE(fx.name);
    const std::string text = emit_spec_file(fx.spec);
    const auto loaded = load_spec_text(text);
    CHECK(loaded.spec.dim() == fx.spec.dim());
    CHECK(loaded.spec.lambda() == fx.spec.lambda());
    CHECK(loaded.spec.samples().size() == fx.spec.samples().size());

    // Metric and potential agree pointwise after the round trip.
    const auto& pts = fx.spec.samples();
    const Vector& p = pts[pts.size() / 2];
    const auto sp = std::span<const double>(p.data(), static_cast<std::size_t>(p.size()));
    CHECK(evaluate(loaded.spec.potential_expr(), sp) ==
          doctest::Approx(evaluate(fx.spec.potential_expr(), sp)).epsilon(1e-15));
    for (int i = 0; i < fx.spec.dim(); ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(evaluate(loaded.spec.metric().component(i, j), sp) ==
              doctest::Approx(evaluate(fx.spec.metric().component(i, j), sp)).epsilon(1e-15));

    CHECK(identity_suite(loaded.spec).pass);
  }
}
