#pragma once

#include <memory>
#include <string>
#include <vector>

#include "riccisol/chart.hpp"
#include "riccisol/geometry.hpp"
#include "riccisol/types.hpp"

namespace riccisol {

enum class SolitonKind { Shrinking, Steady, Expanding };

inline SolitonKind kind_of(double lambda) {
  return lambda > 0.0 ? SolitonKind::Shrinking
         : lambda < 0.0 ? SolitonKind::Expanding
                        : SolitonKind::Steady;
}
const char* to_string(SolitonKind kind);

/// Caveat carried by theorem-level reports: sampled charts cannot certify the
/// global hypotheses the statements assume.
inline constexpr const char* kCompactnessCaveat =
    "assumptions not machine-checkable: compactness";
inline constexpr const char* kSamplingCaveat =
    "sampling a chart cannot see global topology; completeness and compactness are unverified";

/// The full problem statement: metric components and potential on one chart,
/// the soliton constant, and where to sample. Immutable; copies are cheap and
/// share the derivative tables.
class SolitonSpec {
 public:
  SolitonSpec(ChartSpec chart, MetricField metric, Expr potential, double lambda,
              SamplePlan plan);
  SolitonSpec(ChartSpec chart, std::shared_ptr<const MetricField> metric, Expr potential,
              double lambda, SamplePlan plan);

  const ChartSpec& chart() const { return chart_; }
  const MetricField& metric() const { return *metric_; }
  const ScalarField& potential() const { return *potential_; }
  const Expr& potential_expr() const { return potential_->expr(); }
  double lambda() const { return lambda_; }
  SolitonKind kind() const { return kind_of(lambda_); }
  int dim() const { return chart_.dim(); }
  const SamplePlan& plan() const { return plan_; }

  /// Materialized sample points (validity-filtered). Throws if empty.
  std::vector<Vector> samples() const;

  /// Same spec with the potential replaced (used by normalization).
  SolitonSpec with_potential(Expr f) const;

  /// Same spec with a different sample plan.
  SolitonSpec with_plan(SamplePlan plan) const;

 private:
  ChartSpec chart_;
  std::shared_ptr<const MetricField> metric_;
  std::shared_ptr<const ScalarField> potential_;
  double lambda_;
  SamplePlan plan_;
};

// ---------------------------------------------------------------------------
// Pointwise residual operations

/// Soliton equation residual Ric + Hess f − λ g at p (zero matrix on a
/// genuine gradient soliton).
Matrix soliton_residual(const SolitonSpec& spec, const Vector& p);

/// Trace identity residual S + Δf − nλ at p; equals
/// tr(g^{-1} · soliton_residual) identically.
double trace_identity_residual(const SolitonSpec& spec, const Vector& p);

// ---------------------------------------------------------------------------
// Normalization

/// Result of fitting the Hamilton identity S + |∇f|^2 = 2λf + c over the
/// sample set. `normalized` carries the shifted potential f − c/(2λ).
struct NormalizationResult {
  double c = 0.0;        // compensated mean of S + |∇f|^2 − 2λf
  double spread = 0.0;   // max − min of the same quantity
  bool constant = true;  // spread within tolerance (false: not a gradient soliton,
                         // or the sample plan strays into an invalid region)
  SolitonSpec normalized;
};

/// Throws std::invalid_argument for steady input (the c/2λ shift needs λ ≠ 0).
NormalizationResult hamilton_constant(const SolitonSpec& spec, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Identity suite

enum class IdentityId { Eq3, Eq5, Eq6, Eq7Norm, Eq8, Eq9, Eq10, Eq11, Eq12, Eq16, Thm2, Thm34 };

/// Stable external id ("eq3", "eq7norm", "thm34", ...) used in reports and JSON.
const char* identity_name(IdentityId id);

struct IdentityEntry {
  IdentityId id{};
  double max_abs = 0.0;
  double max_rel = 0.0;
  Vector worst_point;
  Tolerance tol;
  bool pass = true;
};

struct IdentityReport {
  std::vector<IdentityEntry> entries;  // eq3, eq5, eq6, eq7norm, eq8, eq9, eq10
  int sample_count = 0;
  double normalization_c = 0.0;
  double normalization_spread = 0.0;
  bool auto_normalized = false;  // input arrived with c materially nonzero
  bool pass = true;

  const IdentityEntry* find(IdentityId id) const;
};

/// Residuals of the soliton equation, the trace identity, contracted Bianchi,
/// the normalized Hamilton identity, the Ricci-norm inequality |Ric|^2 >= S^2/n,
/// the scalar-curvature identity ΔS − g(∇S,∇f) + 2|Ric|^2 = 2λS, and the
/// Bochner identity ½Δ|∇f|^2 = |Hess f|^2 − Ric(∇f,∇f), over the sample plan.
/// Non-normalized non-steady input is normalized on the fly (flagged).
IdentityReport identity_suite(const SolitonSpec& spec, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Theorem pipelines

/// Checks whether S − λf is constant over the samples; when it is (constant
/// c'), evaluates the three derived identities
///   eq11: |Ric|^2 = λ^2 (2f − n/2) + λ c'
///   eq12: |Hess f|^2 = λ (nλ/2 − c')
///   eq16: |Ric|^2 + |Hess f|^2 = 2 λ^2 f.
/// Hypothesis failure is a reported outcome, not an error.
struct Theorem1Report {
  double c_prime = 0.0;
  double spread = 0.0;
  double hypothesis_tolerance = 0.0;
  bool hypothesis_holds = false;
  std::vector<IdentityEntry> entries;  // eq11, eq12, eq16 (empty when hypothesis fails)
  int sample_count = 0;
  bool auto_normalized = false;
  bool pass = true;  // entries all pass (vacuously true when hypothesis fails)
};

Theorem1Report theorem1_pipeline(const SolitonSpec& spec, const Tolerance& tol = {});

enum class Triviality { Trivial, NonTrivial, Inconclusive };
const char* to_string(Triviality t);

/// Verdict of the triviality criterion S = λ(f + n/2) cross-checked against
/// direct f-constancy. Trivial needs both residuals below tolerance;
/// NonTrivial needs both above; a split decision is Inconclusive and raises
/// `consistency_flag` — which must never fire on a genuine gradient soliton.
struct TrivialityVerdict {
  Triviality verdict = Triviality::Inconclusive;
  double criterion_residual = 0.0;  // max |S − λ(f + n/2)|
  double potential_spread = 0.0;    // max f − min f
  double scalar_spread = 0.0;       // max S − min S
  double scale = 1.0;               // 1 + |λ| (1 + max |f|)
  double tolerance = 0.0;
  bool consistency_flag = false;
  bool auto_normalized = false;
  int sample_count = 0;
};

TrivialityVerdict classify_triviality(const SolitonSpec& spec, double tol = 1e-6);

/// Poisson-equation and divergence checks behind the eigenvalue dichotomy:
///   r1 = ΔS − λ(nλ − S)            (Poisson hypothesis residual)
///   r2 = Δ(S − λf)                 (must agree with r1 whenever the trace
///                                   identity holds; algebraic consequence)
/// plus the constancy of S − λf and, when the hypothesis holds on a
/// non-trivial soliton, the conclusion that its constant differs from nλ/2.
struct PoissonReport {
  double max_r1 = 0.0;
  double max_r2_minus_r1 = 0.0;
  double max_eq5_residual = 0.0;
  bool algebra_ok = true;  // |r2 − r1| <= 1e-10 wherever |eq5 residual| <= 1e-10
  double c_fit = 0.0;      // mean of S − λf
  double spread_s_minus_lambda_f = 0.0;
  bool hypothesis_holds = false;
  bool conclusion_applies = false;  // hypothesis holds and soliton non-trivial
  bool conclusion_holds = false;    // S − λf constant with constant != nλ/2
  int sample_count = 0;
  bool auto_normalized = false;
  std::string caveat{kCompactnessCaveat};
};

PoissonReport poisson_check(const SolitonSpec& spec, const Tolerance& tol = {});

}  // namespace riccisol
