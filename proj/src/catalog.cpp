#include "riccisol/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace riccisol {

namespace {

// |x|^2 over the first `count` coordinates.
Expr radius2(int count) {
  Expr sum = Expr::constant(0.0);
  for (int i = 0; i < count; ++i) {
    Expr xi = Expr::variable(i);
    sum = std::move(sum) + xi * xi;
  }
  return sum;
}

std::vector<Expr> diagonal_conformal(int n, int block, const Expr& factor) {
  // Lower triangle of factor·δ on the first `block` coordinates, 1·δ beyond.
  std::vector<Expr> lower;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      if (i != j)
        lower.push_back(Expr::constant(0.0));
      else
        lower.push_back(i < block ? factor : Expr::constant(1.0));
    }
  return lower;
}

Fixture gaussian(int n, double lambda, std::string name) {
  if (n < 2) throw std::invalid_argument("gaussian soliton needs n >= 2");
  if (lambda == 0.0) throw std::invalid_argument("gaussian soliton needs lambda != 0");

  ChartSpec chart(n, std::vector<std::pair<double, double>>(
                         static_cast<std::size_t>(n), {-2.0, 2.0}));
  MetricField metric(n, diagonal_conformal(n, 0, Expr::constant(1.0)));
  Expr f = (lambda / 2.0) * radius2(n);
  SamplePlan plan = SamplePlan::grid(
      std::vector<int>(static_cast<std::size_t>(n), default_axis_count(n)));

  Fixture fx{std::move(name),
             SolitonSpec(std::move(chart), std::move(metric), std::move(f), lambda,
                         std::move(plan)),
             Expr::constant(0.0),
             0.0,
             false,
             Expr::constant(0.0),
             Expr::constant(n * lambda * lambda),
             "Flat metric, f = (lambda/2)|x|^2: Ric = 0, Hess f = lambda*delta, S = 0; "
             "S + |grad f|^2 = lambda^2 |x|^2 = 2*lambda*f, so c = 0."};
  return fx;
}

}  // namespace

Fixture gaussian_shrinker(int n, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("shrinker needs lambda > 0");
  return gaussian(n, lambda, "gaussian-shrinker-" + std::to_string(n) + "d");
}

Fixture gaussian_expander(int n, double lambda) {
  if (lambda >= 0.0) throw std::invalid_argument("expander needs lambda < 0");
  return gaussian(n, lambda, "gaussian-expander-" + std::to_string(n) + "d");
}

Fixture einstein_trivial(EinsteinKind kind, int n, double r) {
  if (n < 2) throw std::invalid_argument("Einstein fixture needs n >= 2");
  if (r <= 0.0) throw std::invalid_argument("Einstein fixture needs r > 0");

  const double r2 = r * r;
  const bool sphere = kind == EinsteinKind::Sphere;
  const double lambda = (sphere ? 1.0 : -1.0) * (n - 1) / r2;
  const double s = n * lambda;

  Expr rho2 = radius2(n);
  Expr denom = sphere ? Expr::constant(r2) + rho2 : Expr::constant(r2) - rho2;
  Expr factor = Expr::constant(4.0 * r2 * r2) / pow(std::move(denom), 2.0);

  // Box well inside the chart; the Poincaré ball additionally carries the
  // validity predicate r^2 − |x|^2 > 0 guarding the conformal blow-up.
  const double half = sphere ? 0.6 * r : 0.4 * r;
  std::optional<Expr> validity;
  if (!sphere) validity = Expr::constant(r2) - rho2;

  ChartSpec chart(n,
                  std::vector<std::pair<double, double>>(static_cast<std::size_t>(n),
                                                         {-half, half}),
                  {}, std::move(validity));
  MetricField metric(n, diagonal_conformal(n, n, factor));
  SamplePlan plan = SamplePlan::grid(
      std::vector<int>(static_cast<std::size_t>(n), default_axis_count(n)));

  Fixture fx{sphere ? "sphere-trivial-n" + std::to_string(n)
                    : "hyperbolic-trivial-n" + std::to_string(n),
             SolitonSpec(std::move(chart), std::move(metric), Expr::constant(0.5 * n), lambda,
                         std::move(plan)),
             Expr::constant(s),
             0.0,
             true,
             Expr::constant(n * lambda * lambda),
             Expr::constant(0.0),
             sphere ? "Round n-sphere of radius r in the stereographic chart "
                      "g = (4r^4/(r^2+|x|^2)^2) delta: Einstein with Ric = ((n-1)/r^2) g, "
                      "S = n(n-1)/r^2; constant f = n/2 gives 2*lambda*f = S, so c = 0."
                    : "Hyperbolic n-space of curvature -1/r^2 in the Poincare-ball chart "
                      "g = (4r^4/(r^2-|x|^2)^2) delta: Einstein with Ric = -((n-1)/r^2) g, "
                      "S = -n(n-1)/r^2; constant f = n/2 gives 2*lambda*f = S, so c = 0."};
  return fx;
}

Fixture cylinder_shrinker(int n, double r) {
  if (n < 3) throw std::invalid_argument("cylinder fixture needs n >= 3");
  if (r <= 0.0) throw std::invalid_argument("cylinder fixture needs r > 0");

  const int m = n - 1;  // sphere factor dimension
  const double r2 = r * r;
  const double lambda = (n - 2) / r2;

  Expr rho2 = radius2(m);
  Expr factor = Expr::constant(4.0 * r2 * r2) / pow(Expr::constant(r2) + std::move(rho2), 2.0);

  std::vector<std::pair<double, double>> domain(static_cast<std::size_t>(m),
                                                {-0.5 * r, 0.5 * r});
  domain.emplace_back(-2.0, 2.0);
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("u" + std::to_string(i + 1));
  names.push_back("t");

  ChartSpec chart(n, std::move(domain), std::move(names));
  MetricField metric(n, diagonal_conformal(n, m, factor));

  Expr t = Expr::variable(m);
  Expr f = (lambda / 2.0) * (t * t) + Expr::constant(0.5 * (n - 1));
  SamplePlan plan = SamplePlan::grid(
      std::vector<int>(static_cast<std::size_t>(n), default_axis_count(n)));

  Fixture fx{"cylinder-n" + std::to_string(n),
             SolitonSpec(std::move(chart), std::move(metric), std::move(f), lambda,
                         std::move(plan)),
             Expr::constant((n - 1) * lambda),
             0.0,
             false,
             Expr::constant((n - 1) * lambda * lambda),
             Expr::constant(lambda * lambda),
             "Product of the round (n-1)-sphere of radius r with a line: the sphere factor "
             "is Einstein with Ric = ((n-2)/r^2) g and the line is flat, so with "
             "lambda = (n-2)/r^2 and f = lambda t^2/2 + (n-1)/2 the soliton equation holds; "
             "S = (n-1) lambda and S + |grad f|^2 = (n-1) lambda + lambda^2 t^2 = 2 lambda f."};
  return fx;
}

const std::vector<Fixture>& builtin_fixtures() {
  static const std::vector<Fixture> fixtures = [] {
    std::vector<Fixture> v;
    v.push_back(gaussian_shrinker(2, 1.0));
    v.push_back(gaussian_expander(2, -1.0));
    v.push_back(einstein_trivial(EinsteinKind::Sphere, 2, 1.0));
    v.push_back(einstein_trivial(EinsteinKind::Hyperbolic, 3, 1.0));
    v.push_back(cylinder_shrinker(3, 1.0));
    return v;
  }();
  return fixtures;
}

const Fixture* find_fixture(std::string_view name) {
  for (const auto& f : builtin_fixtures())
    if (f.name == name) return &f;
  return nullptr;
}

}  // namespace riccisol
