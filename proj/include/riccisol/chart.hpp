#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "riccisol/expr.hpp"
#include "riccisol/types.hpp"

namespace riccisol {

/// One coordinate chart: dimension, coordinate names, a closed sampling box,
/// and an optional validity predicate (points where it evaluates > 0 are
/// usable; everything else is excluded, e.g. near a coordinate singularity).
///
/// n = 1 is rejected outright: the Ricci tensor of a curve vanishes
/// identically and none of the curvature machinery is meaningful there.
class ChartSpec {
 public:
  ChartSpec(int dim, std::vector<std::pair<double, double>> domain,
            std::vector<std::string> coord_names = {},
            std::optional<Expr> validity = std::nullopt);

  int dim() const { return dim_; }
  const std::vector<std::string>& coord_names() const { return coord_names_; }
  const std::vector<std::pair<double, double>>& domain() const { return domain_; }
  const std::optional<Expr>& validity() const { return validity_; }

  bool is_valid_point(const Vector& p) const;

 private:
  int dim_;
  std::vector<std::pair<double, double>> domain_;
  std::vector<std::string> coord_names_;
  std::optional<Expr> validity_;
};

/// Either a per-axis grid resolution or an explicit list of points.
struct SamplePlan {
  std::vector<int> per_axis;    // used when points is empty
  std::vector<Vector> points;   // explicit points win when non-empty

  static SamplePlan grid(std::vector<int> counts) { return {std::move(counts), {}}; }
  static SamplePlan list(std::vector<Vector> pts) { return {{}, std::move(pts)}; }
};

/// Default per-axis count giving at least `min_total` grid points in dim n.
int default_axis_count(int dim, int min_total = 101);

/// Materialize the plan on the chart, dropping invalid points. Explicit
/// points outside the validity region are an error; grid points are filtered.
std::vector<Vector> sample_points(const ChartSpec& chart, const SamplePlan& plan);

/// A scalar coordinate function together with its memoized derivative table.
/// Immutable after construction; safe to share across threads.
class ScalarField {
 public:
  ScalarField(Expr e, int dim, int max_order)
      : expr_(std::move(e)), table_(expr_, dim, max_order) {}

  const Expr& expr() const { return expr_; }
  const DerivativeTable& table() const { return table_; }
  int dim() const { return table_.dim(); }

  double value(const Vector& p) const;

 private:
  Expr expr_;
  DerivativeTable table_;
};

}  // namespace riccisol
