#include "riccisol/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riccisol {

namespace {

// Compensated summation keeps sample means independent of evaluation order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct PointEval {
  CurvatureState cs;
  PotentialState ps;
};

PointEval eval_point(const SolitonSpec& spec, const Vector& p) {
  return {curvature_state(spec.metric(), p), potential_state(spec.metric(), spec.potential(), p)};
}

// Tracks the worst (max) residual and where it happened.
struct WorstTracker {
  double max_abs = 0.0;
  double max_rel = 0.0;
  Vector worst;

  void update(double abs, double scale, const Vector& p) {
    const double rel = abs / scale;
    if (abs >= max_abs) {
      max_abs = abs;
      worst = p;
    }
    max_rel = std::max(max_rel, rel);
  }

  IdentityEntry entry(IdentityId id, const Tolerance& tol) const {
    IdentityEntry e;
    e.id = id;
    e.max_abs = max_abs;
    e.max_rel = max_rel;
    e.worst_point = worst;
    e.tol = tol;
    e.pass = max_abs <= tol.abs && max_rel <= tol.rel;
    return e;
  }
};

}  // namespace

const char* to_string(SolitonKind kind) {
  switch (kind) {
    case SolitonKind::Shrinking: return "shrinking";
    case SolitonKind::Steady: return "steady";
    case SolitonKind::Expanding: return "expanding";
  }
  return "?";
}

const char* to_string(Triviality t) {
  switch (t) {
    case Triviality::Trivial: return "trivial";
    case Triviality::NonTrivial: return "non-trivial";
    case Triviality::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* identity_name(IdentityId id) {
  switch (id) {
    case IdentityId::Eq3: return "eq3";
    case IdentityId::Eq5: return "eq5";
    case IdentityId::Eq6: return "eq6";
    case IdentityId::Eq7Norm: return "eq7norm";
    case IdentityId::Eq8: return "eq8";
    case IdentityId::Eq9: return "eq9";
    case IdentityId::Eq10: return "eq10";
    case IdentityId::Eq11: return "eq11";
    case IdentityId::Eq12: return "eq12";
    case IdentityId::Eq16: return "eq16";
    case IdentityId::Thm2: return "thm2";
    case IdentityId::Thm34: return "thm34";
  }
  return "?";
}

// ---------------------------------------------------------------------------

SolitonSpec::SolitonSpec(ChartSpec chart, MetricField metric, Expr potential, double lambda,
                         SamplePlan plan)
    : SolitonSpec(std::move(chart), std::make_shared<const MetricField>(std::move(metric)),
                  std::move(potential), lambda, std::move(plan)) {}

SolitonSpec::SolitonSpec(ChartSpec chart, std::shared_ptr<const MetricField> metric,
                         Expr potential, double lambda, SamplePlan plan)
    : chart_(std::move(chart)), metric_(std::move(metric)), lambda_(lambda),
      plan_(std::move(plan)) {
  if (!metric_) throw std::invalid_argument("soliton spec needs a metric");
  if (metric_->dim() != chart_.dim())
    throw std::invalid_argument("metric dimension does not match the chart");
  if (potential.max_variable() >= chart_.dim())
    throw std::invalid_argument("potential references a coordinate beyond the chart");
  if (!std::isfinite(lambda_)) throw std::invalid_argument("soliton constant must be finite");
  potential_ = std::make_shared<const ScalarField>(std::move(potential), chart_.dim(), 3);
}

std::vector<Vector> SolitonSpec::samples() const {
  auto pts = sample_points(chart_, plan_);
  if (pts.empty())
    throw std::invalid_argument("sample plan produced no valid points on the chart");
  return pts;
}

SolitonSpec SolitonSpec::with_potential(Expr f) const {
  return SolitonSpec(chart_, metric_, std::move(f), lambda_, plan_);
}

SolitonSpec SolitonSpec::with_plan(SamplePlan plan) const {
  SolitonSpec copy = *this;
  copy.plan_ = std::move(plan);
  return copy;
}

// ---------------------------------------------------------------------------

Matrix soliton_residual(const SolitonSpec& spec, const Vector& p) {
  const auto pe = eval_point(spec, p);
  return pe.cs.ricci + pe.ps.hessian - spec.lambda() * pe.cs.metric;
}

double trace_identity_residual(const SolitonSpec& spec, const Vector& p) {
  const auto pe = eval_point(spec, p);
  return pe.cs.scalar + pe.ps.lap - spec.dim() * spec.lambda();
}

// ---------------------------------------------------------------------------

NormalizationResult hamilton_constant(const SolitonSpec& spec, const Tolerance& tol) {
  if (spec.kind() == SolitonKind::Steady)
    throw std::invalid_argument("normalization needs a non-steady soliton (lambda != 0)");

  const auto pts = spec.samples();
  KahanSum sum;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (const auto& p : pts) {
    const auto pe = eval_point(spec, p);
    const double h =
        pe.cs.scalar + pe.ps.grad_norm2 - 2.0 * spec.lambda() * pe.ps.value;
    sum.add(h);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
    scale = std::max(scale, 1.0 + std::abs(pe.cs.scalar) + pe.ps.grad_norm2 +
                                2.0 * std::abs(spec.lambda() * pe.ps.value));
  }
  const double c = sum.value() / static_cast<double>(pts.size());
  const double spread = hi - lo;
  const bool constant = spread <= tol.abs + tol.rel * scale;
  // Below this threshold the input already satisfies the zero-constant form;
  // shifting would only perturb the potential by roundoff, so the potential
  // is returned untouched (normalization is idempotent).
  if (std::abs(c) <= 1e-9 * (1.0 + std::abs(spec.lambda())))
    return {c, spread, constant, spec};
  // With c = S + |∇f|^2 − 2λf, the shifted potential f + c/(2λ) zeroes the
  // constant: the gradient is unchanged and 2λ(f + c/(2λ)) = 2λf + c.
  SolitonSpec shifted = spec.with_potential(
      normalize(spec.potential_expr() + Expr::constant(c / (2.0 * spec.lambda()))));
  return {c, spread, constant, std::move(shifted)};
}

namespace {

// Normalize unless already normalized (or steady); report whether a material
// shift was applied.
struct Normalized {
  SolitonSpec spec;
  double c = 0.0;
  double spread = 0.0;
  bool shifted = false;
};

Normalized ensure_normalized(const SolitonSpec& spec, const Tolerance& tol) {
  if (spec.kind() == SolitonKind::Steady) return {spec, 0.0, 0.0, false};
  auto res = hamilton_constant(spec, tol);
  const double threshold = 1e-9 * (1.0 + std::abs(spec.lambda()));
  if (std::abs(res.c) <= threshold) return {spec, res.c, res.spread, false};
  return {std::move(res.normalized), res.c, res.spread, true};
}

}  // namespace

// ---------------------------------------------------------------------------

const IdentityEntry* IdentityReport::find(IdentityId id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

IdentityReport identity_suite(const SolitonSpec& input, const Tolerance& tol) {
  const auto norm = ensure_normalized(input, tol);
  const SolitonSpec& spec = norm.spec;
  const double lambda = spec.lambda();
  const int n = spec.dim();
  const auto pts = spec.samples();

  WorstTracker eq3, eq5, eq6, eq7, eq8, eq9, eq10;
  KahanSum hamilton_sum;
  double h_lo = std::numeric_limits<double>::infinity();
  double h_hi = -std::numeric_limits<double>::infinity();
  double max_s2 = 0.0;
  struct HamiltonSample {
    double h;
    double scale;
    Vector point;
  };
  std::vector<HamiltonSample> hamilton;
  hamilton.reserve(pts.size());

  for (const auto& p : pts) {
    const auto pe = eval_point(spec, p);
    const auto& cs = pe.cs;
    const auto& ps = pe.ps;

    {  // Ric + Hess f = λg
      const Matrix r = cs.ricci + ps.hessian - lambda * cs.metric;
      const double scale = 1.0 + cs.ricci.cwiseAbs().maxCoeff() +
                           ps.hessian.cwiseAbs().maxCoeff() +
                           std::abs(lambda) * cs.metric.cwiseAbs().maxCoeff();
      eq3.update(r.cwiseAbs().maxCoeff(), scale, p);
    }
    {  // S + Δf = nλ
      const double r = cs.scalar + ps.lap - n * lambda;
      eq5.update(std::abs(r), 1.0 + std::abs(cs.scalar) + std::abs(ps.lap) +
                                  n * std::abs(lambda), p);
    }
    {  // ∇S = 2 div Ric (holds for every metric)
      const double r = (cs.scalar_grad - 2.0 * cs.ricci_div).cwiseAbs().maxCoeff();
      eq6.update(r, 1.0 + cs.scalar_grad.cwiseAbs().maxCoeff() +
                        2.0 * cs.ricci_div.cwiseAbs().maxCoeff(), p);
    }
    {  // S + |∇f|^2 = 2λf after normalization
      const double h = cs.scalar + ps.grad_norm2 - 2.0 * lambda * ps.value;
      hamilton_sum.add(h);
      h_lo = std::min(h_lo, h);
      h_hi = std::max(h_hi, h);
      hamilton.push_back({h,
                          1.0 + std::abs(cs.scalar) + ps.grad_norm2 +
                              2.0 * std::abs(lambda * ps.value),
                          p});
    }
    {  // |Ric|^2 >= S^2/n: one-sided violation, scaled by 1 + S^2
      const double s2 = cs.scalar * cs.scalar;
      max_s2 = std::max(max_s2, s2);
      const double viol = std::max(0.0, s2 / n - cs.ricci_norm2);
      eq8.update(viol, 1.0 + s2, p);
    }
    {  // ΔS − g(∇S,∇f) + 2|Ric|^2 = 2λS
      const double r = cs.scalar_lap - ps.grad_s_dot_grad_f + 2.0 * cs.ricci_norm2 -
                       2.0 * lambda * cs.scalar;
      eq9.update(std::abs(r), 1.0 + std::abs(cs.scalar_lap) +
                                  std::abs(ps.grad_s_dot_grad_f) + 2.0 * cs.ricci_norm2 +
                                  2.0 * std::abs(lambda * cs.scalar), p);
    }
    {  // ½Δ|∇f|^2 − |Hess f|^2 + Ric(∇f,∇f) = 0
      const double r = 0.5 * ps.lap_grad_norm2 - ps.hess_norm2 + ps.ricci_grad_grad;
      eq10.update(std::abs(r), 1.0 + 0.5 * std::abs(ps.lap_grad_norm2) + ps.hess_norm2 +
                                   std::abs(ps.ricci_grad_grad), p);
    }
  }

  const double c_fit = hamilton_sum.value() / static_cast<double>(pts.size());
  // Non-steady input has been normalized, so the identity is tested against
  // zero; a steady soliton admits no normalization and is tested against the
  // fitted constant instead.
  const bool steady = spec.kind() == SolitonKind::Steady;
  const double center = steady ? c_fit : 0.0;
  for (const auto& hs : hamilton) eq7.update(std::abs(hs.h - center), hs.scale, hs.point);

  IdentityReport report;
  report.sample_count = static_cast<int>(pts.size());
  report.normalization_c = steady ? c_fit : norm.c;
  report.normalization_spread = h_hi - h_lo;
  report.auto_normalized = norm.shifted;

  const Tolerance ineq_tol{1e-10 * (1.0 + max_s2), 1e-10};
  report.entries.push_back(eq3.entry(IdentityId::Eq3, tol));
  report.entries.push_back(eq5.entry(IdentityId::Eq5, tol));
  report.entries.push_back(eq6.entry(IdentityId::Eq6, tol));
  report.entries.push_back(eq7.entry(IdentityId::Eq7Norm, tol));
  report.entries.push_back(eq8.entry(IdentityId::Eq8, ineq_tol));
  report.entries.push_back(eq9.entry(IdentityId::Eq9, tol));
  report.entries.push_back(eq10.entry(IdentityId::Eq10, tol));
  report.pass = std::all_of(report.entries.begin(), report.entries.end(),
                            [](const IdentityEntry& e) { return e.pass; });
  return report;
}

// ---------------------------------------------------------------------------

Theorem1Report theorem1_pipeline(const SolitonSpec& input, const Tolerance& tol) {
  if (input.kind() == SolitonKind::Steady)
    throw std::invalid_argument("theorem-1 pipeline needs a non-steady soliton");
  const auto norm = ensure_normalized(input, tol);
  const SolitonSpec& spec = norm.spec;
  const double lambda = spec.lambda();
  const int n = spec.dim();
  const auto pts = spec.samples();

  // Hypothesis: S − λf constant over the samples.
  std::vector<PointEval> evals;
  evals.reserve(pts.size());
  KahanSum sum;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (const auto& p : pts) {
    evals.push_back(eval_point(spec, p));
    const auto& pe = evals.back();
    const double u = pe.cs.scalar - lambda * pe.ps.value;
    sum.add(u);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    scale = std::max(scale, 1.0 + std::abs(pe.cs.scalar) + std::abs(lambda * pe.ps.value));
  }

  Theorem1Report report;
  report.sample_count = static_cast<int>(pts.size());
  report.auto_normalized = norm.shifted;
  report.c_prime = sum.value() / static_cast<double>(pts.size());
  report.spread = hi - lo;
  report.hypothesis_tolerance = tol.abs + tol.rel * scale;
  report.hypothesis_holds = report.spread <= report.hypothesis_tolerance;
  if (!report.hypothesis_holds) return report;

  const double c = report.c_prime;
  WorstTracker eq11, eq12, eq16;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& pe = evals[i];
    const double f = pe.ps.value;
    {
      const double rhs = lambda * lambda * (2.0 * f - 0.5 * n) + lambda * c;
      eq11.update(std::abs(pe.cs.ricci_norm2 - rhs),
                  1.0 + pe.cs.ricci_norm2 + std::abs(rhs), pts[i]);
    }
    {
      const double rhs = lambda * (0.5 * n * lambda - c);
      eq12.update(std::abs(pe.ps.hess_norm2 - rhs), 1.0 + pe.ps.hess_norm2 + std::abs(rhs),
                  pts[i]);
    }
    {
      const double rhs = 2.0 * lambda * lambda * f;
      eq16.update(std::abs(pe.cs.ricci_norm2 + pe.ps.hess_norm2 - rhs),
                  1.0 + pe.cs.ricci_norm2 + pe.ps.hess_norm2 + std::abs(rhs), pts[i]);
    }
  }
  report.entries.push_back(eq11.entry(IdentityId::Eq11, tol));
  report.entries.push_back(eq12.entry(IdentityId::Eq12, tol));
  report.entries.push_back(eq16.entry(IdentityId::Eq16, tol));
  report.pass = std::all_of(report.entries.begin(), report.entries.end(),
                            [](const IdentityEntry& e) { return e.pass; });
  return report;
}

// ---------------------------------------------------------------------------

TrivialityVerdict classify_triviality(const SolitonSpec& input, double tol) {
  if (input.kind() == SolitonKind::Steady)
    throw std::invalid_argument("triviality classification needs a non-steady soliton");
  const auto norm = ensure_normalized(input, Tolerance{});
  const SolitonSpec& spec = norm.spec;
  const double lambda = spec.lambda();
  const int n = spec.dim();
  const auto pts = spec.samples();

  double crit = 0.0;
  double f_lo = std::numeric_limits<double>::infinity();
  double f_hi = -std::numeric_limits<double>::infinity();
  double s_lo = std::numeric_limits<double>::infinity();
  double s_hi = -std::numeric_limits<double>::infinity();
  double max_abs_f = 0.0;
  for (const auto& p : pts) {
    const auto pe = eval_point(spec, p);
    const double f = pe.ps.value;
    const double s = pe.cs.scalar;
    crit = std::max(crit, std::abs(s - lambda * (f + 0.5 * n)));
    f_lo = std::min(f_lo, f);
    f_hi = std::max(f_hi, f);
    s_lo = std::min(s_lo, s);
    s_hi = std::max(s_hi, s);
    max_abs_f = std::max(max_abs_f, std::abs(f));
  }

  TrivialityVerdict v;
  v.sample_count = static_cast<int>(pts.size());
  v.auto_normalized = norm.shifted;
  v.criterion_residual = crit;
  v.potential_spread = f_hi - f_lo;
  v.scalar_spread = s_hi - s_lo;
  v.scale = 1.0 + std::abs(lambda) * (1.0 + max_abs_f);
  v.tolerance = tol;

  const double threshold = tol * v.scale;
  const bool criterion_ok = crit <= threshold;
  const bool constant_f = v.potential_spread <= threshold;
  if (criterion_ok && constant_f)
    v.verdict = Triviality::Trivial;
  else if (!criterion_ok && !constant_f)
    v.verdict = Triviality::NonTrivial;
  else
    v.verdict = Triviality::Inconclusive;
  // The two predicates are the two sides of the criterion: a split decision
  // on a genuine soliton would contradict it.
  v.consistency_flag = criterion_ok != constant_f;
  return v;
}

// ---------------------------------------------------------------------------

PoissonReport poisson_check(const SolitonSpec& input, const Tolerance& tol) {
  if (input.kind() == SolitonKind::Steady)
    throw std::invalid_argument("Poisson checks need a non-steady soliton");
  const auto norm = ensure_normalized(input, tol);
  const SolitonSpec& spec = norm.spec;
  const double lambda = spec.lambda();
  const int n = spec.dim();
  const auto pts = spec.samples();

  PoissonReport rep;
  rep.sample_count = static_cast<int>(pts.size());
  rep.auto_normalized = norm.shifted;

  KahanSum sum;
  double u_lo = std::numeric_limits<double>::infinity();
  double u_hi = -std::numeric_limits<double>::infinity();
  double r1_scale = 1.0;
  double u_scale = 1.0;
  for (const auto& p : pts) {
    const auto pe = eval_point(spec, p);
    const double s = pe.cs.scalar;
    const double lap_s = pe.cs.scalar_lap;
    const double r1 = lap_s - lambda * (n * lambda - s);
    const double eq5 = s + pe.ps.lap - n * lambda;
    const double r2 = lap_s - lambda * pe.ps.lap;  // Δ(S − λf)
    rep.max_r1 = std::max(rep.max_r1, std::abs(r1));
    rep.max_eq5_residual = std::max(rep.max_eq5_residual, std::abs(eq5));
    rep.max_r2_minus_r1 = std::max(rep.max_r2_minus_r1, std::abs(r2 - r1));
    if (std::abs(eq5) <= 1e-10 && std::abs(r2 - r1) > 1e-10) rep.algebra_ok = false;

    const double u = s - lambda * pe.ps.value;
    sum.add(u);
    u_lo = std::min(u_lo, u);
    u_hi = std::max(u_hi, u);
    r1_scale = std::max(r1_scale, 1.0 + std::abs(lap_s) + std::abs(lambda) *
                                          (n * std::abs(lambda) + std::abs(s)));
    u_scale = std::max(u_scale, 1.0 + std::abs(s) + std::abs(lambda * pe.ps.value));
  }

  rep.c_fit = sum.value() / static_cast<double>(pts.size());
  rep.spread_s_minus_lambda_f = u_hi - u_lo;
  rep.hypothesis_holds = rep.max_r1 <= tol.abs + tol.rel * r1_scale;

  const auto verdict = classify_triviality(spec);
  rep.conclusion_applies = rep.hypothesis_holds && verdict.verdict == Triviality::NonTrivial;
  if (rep.conclusion_applies) {
    const double thr = tol.abs + tol.rel * u_scale;
    const bool constant = rep.spread_s_minus_lambda_f <= thr;
    const bool c_differs = std::abs(rep.c_fit - 0.5 * n * lambda) > thr;
    rep.conclusion_holds = constant && c_differs;
  }
  return rep;
}

}  // namespace riccisol
