#include "riccisol/chart.hpp"

#include <cmath>
#include <stdexcept>

namespace riccisol {

ChartSpec::ChartSpec(int dim, std::vector<std::pair<double, double>> domain,
                     std::vector<std::string> coord_names, std::optional<Expr> validity)
    : dim_(dim),
      domain_(std::move(domain)),
      coord_names_(std::move(coord_names)),
      validity_(std::move(validity)) {
  if (dim_ < 2)
    throw std::invalid_argument("chart dimension must be at least 2 (got " +
                                std::to_string(dim_) + ")");
  if (domain_.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("chart needs one sampling interval per coordinate");
  for (const auto& [lo, hi] : domain_) {
    if (!(lo < hi)) throw std::invalid_argument("sampling interval must have lower < upper");
  }
  if (coord_names_.empty()) {
    for (int i = 0; i < dim_; ++i) coord_names_.push_back("x" + std::to_string(i + 1));
  }
  if (coord_names_.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("chart needs one coordinate name per dimension");
  if (validity_ && validity_->max_variable() >= dim_)
    throw std::invalid_argument("validity predicate references a coordinate beyond the chart");
}

bool ChartSpec::is_valid_point(const Vector& p) const {
  if (!validity_) return true;
  return evaluate(*validity_, std::span<const double>(p.data(), static_cast<std::size_t>(p.size()))) > 0.0;
}

int default_axis_count(int dim, int min_total) {
  int k = 2;
  while (std::pow(static_cast<double>(k), dim) < static_cast<double>(min_total)) ++k;
  return std::max(k, 3);
}

std::vector<Vector> sample_points(const ChartSpec& chart, const SamplePlan& plan) {
  const int n = chart.dim();
  if (!plan.points.empty()) {
    for (const auto& p : plan.points) {
      if (p.size() != n) throw std::invalid_argument("sample point has wrong dimension");
      if (!chart.is_valid_point(p))
        throw std::invalid_argument("explicit sample point violates the chart validity predicate");
    }
    return plan.points;
  }

  std::vector<int> counts = plan.per_axis;
  if (counts.empty()) counts.assign(static_cast<std::size_t>(n), default_axis_count(n));
  if (counts.size() == 1 && n > 1) counts.assign(static_cast<std::size_t>(n), counts[0]);
  if (counts.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("sample plan needs one count per axis");
  for (int c : counts) {
    if (c < 1) throw std::invalid_argument("per-axis sample count must be positive");
  }

  std::vector<Vector> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vector p(n);
    for (int a = 0; a < n; ++a) {
      const auto [lo, hi] = chart.domain()[static_cast<std::size_t>(a)];
      const int c = counts[static_cast<std::size_t>(a)];
      p[a] = c == 1 ? 0.5 * (lo + hi)
                    : lo + (hi - lo) * static_cast<double>(idx[static_cast<std::size_t>(a)]) /
                          static_cast<double>(c - 1);
    }
    if (chart.is_valid_point(p)) out.push_back(std::move(p));

    int a = n - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == counts[static_cast<std::size_t>(a)]) {
      idx[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

double ScalarField::value(const Vector& p) const {
  return evaluate(expr_, std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

}  // namespace riccisol
