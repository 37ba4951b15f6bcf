#pragma once

#include <stdexcept>
#include <vector>

#include "riccisol/chart.hpp"
#include "riccisol/expr.hpp"
#include "riccisol/types.hpp"

namespace riccisol {

class MetricNotSpdError : public std::runtime_error {
 public:
  MetricNotSpdError(std::string message, Vector point)
      : std::runtime_error(std::move(message)), point_(std::move(point)) {}
  const Vector& point() const { return point_; }

 private:
  Vector point_;
};

/// Metric component expressions g_ij on a chart, stored lower-triangular so
/// the symmetry g_ij = g_ji holds structurally. Derivative tables up to order
/// four are built once at construction and shared by every sample point.
class MetricField {
 public:
  /// `lower` is the lower triangle in row-major order:
  /// g_11, g_21, g_22, g_31, g_32, g_33, ...
  MetricField(int dim, std::vector<Expr> lower, int table_order = 4);

  int dim() const { return n_; }
  int table_order() const { return order_; }
  const Expr& component(int i, int j) const { return tables_[tri(i, j)].root(); }
  const DerivativeTable& table(int i, int j) const { return tables_[tri(i, j)]; }

  /// g evaluated at p, symmetrized.
  Matrix value(const Vector& p) const;

  /// g and g^{-1} at p; throws MetricNotSpdError when the evaluated matrix is
  /// not symmetric positive definite (checked through a pivoted LDL^T
  /// factorization).
  void value_and_inverse(const Vector& p, Matrix& g, Matrix& g_inv) const;

 private:
  std::size_t tri(int i, int j) const;
  int n_;
  int order_;
  std::vector<DerivativeTable> tables_;
};

/// Every curvature quantity at one point. Index conventions:
///   christoffel(k,i,j)  = Γ^k_ij, symmetric in (i,j)
///   riemann(l,k,i,j)    = component of R(e_i,e_j)e_k along e_l,
///                         antisymmetric in the last two indices (i,j)
///   ricci(k,j)          = Σ_l riemann(l,k,l,j)
///   scalar_grad[i]      = ∂_i S (components of dS)
///   ricci_div[j]        = (div Ric)_j = g^{ik} ∇_i Ric_kj
struct CurvatureState {
  Vector point;
  Matrix metric;
  Matrix metric_inv;
  Tensor3d christoffel;
  Tensor4d riemann;
  Matrix ricci;
  double scalar = 0.0;        // S
  Vector scalar_grad;         // ∂_i S
  double scalar_lap = 0.0;    // ΔS
  double ricci_norm2 = 0.0;   // |Ric|^2 = tr((g^{-1} Ric)^2)
  Vector ricci_div;           // (div Ric)_i
};

/// Every potential-derived quantity at one point.
struct PotentialState {
  Vector point;
  double value = 0.0;            // f
  Vector grad;                   // ∂_i f
  double grad_norm2 = 0.0;       // |∇f|^2 = g^{ij} ∂_i f ∂_j f
  Matrix hessian;                // (Hess f)_ij = ∂_i∂_j f − Γ^k_ij ∂_k f
  double lap = 0.0;              // Δf = g^{ij} (Hess f)_ij
  double hess_norm2 = 0.0;       // |Hess f|^2 = tr((g^{-1} Hess f)^2)
  double lap_grad_norm2 = 0.0;   // Δ(|∇f|^2)
  double ricci_grad_grad = 0.0;  // Ric(∇f, ∇f)
  double grad_s_dot_grad_f = 0.0;  // g(∇S, ∇f)
};

/// Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij).
Tensor3d christoffel(const MetricField& m, const Vector& p);

/// Full curvature state at p. Needs the metric tables to order 4 (ΔS).
CurvatureState curvature_state(const MetricField& m, const Vector& p);

/// Full potential state at p; f needs derivative tables to order 3.
PotentialState potential_state(const MetricField& m, const ScalarField& f, const Vector& p);

/// Contracted Bianchi identity ∇S = 2 div(Ric): returns
/// max_i |∂_i S − 2 (div Ric)_i|. Identically ~0 for every smooth metric;
/// anything larger than roundoff indicates a defect in the curvature pipeline.
double check_contracted_bianchi(const MetricField& m, const Vector& p);

}  // namespace riccisol
