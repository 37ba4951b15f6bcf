#include "riccisol/geometry.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace riccisol {

namespace {

std::span<const double> as_span(const Vector& p) {
  return {p.data(), static_cast<std::size_t>(p.size())};
}

/// Value and symmetric partial-derivative arrays of one scalar field at a point.
struct ScalarJet {
  double v = 0.0;
  Vector d1;
  Matrix d2;
  Tensor3d d3;
  Tensor4d d4;
};

ScalarJet evaluate_jet(const DerivativeTable& t, const Vector& p, int order) {
  const int n = t.dim();
  const auto sp = as_span(p);
  ScalarJet jet;
  jet.v = evaluate(t.root(), sp);
  if (order >= 1) {
    jet.d1 = Vector::Zero(n);
    for (int i = 0; i < n; ++i) jet.d1[i] = evaluate(t.partial({i}), sp);
  }
  if (order >= 2) {
    jet.d2 = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = evaluate(t.partial({i, j}), sp);
        jet.d2(i, j) = jet.d2(j, i) = v;
      }
  }
  if (order >= 3) {
    jet.d3 = Tensor3d(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const double v = evaluate(t.partial({i, j, k}), sp);
          jet.d3(i, j, k) = jet.d3(i, k, j) = jet.d3(j, i, k) = v;
          jet.d3(j, k, i) = jet.d3(k, i, j) = jet.d3(k, j, i) = v;
        }
  }
  if (order >= 4) {
    jet.d4 = Tensor4d(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k)
          for (int l = k; l < n; ++l) {
            const double v = evaluate(t.partial({i, j, k, l}), sp);
            std::array<int, 4> idx{i, j, k, l};
            std::sort(idx.begin(), idx.end());
            do {
              jet.d4(idx[0], idx[1], idx[2], idx[3]) = v;
            } while (std::next_permutation(idx.begin(), idx.end()));
          }
  }
  return jet;
}

/// All metric-derived pointwise data: derivatives of g, g^{-1}, and Γ up to
/// the requested order. `order` is the highest metric derivative used:
/// 1 → Γ only, 2 → +∂Γ, 3 → +∂²Γ, 4 → +∂³Γ.
struct MetricJet {
  int n = 0;
  int order = 0;
  Matrix g, ginv;
  std::vector<Matrix> dg;                             // dg[i](a,b) = ∂_i g_ab
  std::vector<std::vector<Matrix>> d2g;               // d2g[i][j]
  std::vector<std::vector<std::vector<Matrix>>> d3g;  // d3g[i][j][k]
  std::vector<std::vector<std::vector<std::vector<Matrix>>>> d4g;
  std::vector<Matrix> dginv;
  std::vector<std::vector<Matrix>> d2ginv;
  std::vector<std::vector<std::vector<Matrix>>> d3ginv;
  Tensor3d gamma;                                     // Γ^k_ij = gamma(k,i,j)
  std::vector<Tensor3d> dgamma;                       // dgamma[m](k,i,j) = ∂_m Γ^k_ij
  std::vector<std::vector<Tensor3d>> d2gamma;         // d2gamma[m][n]
  std::vector<std::vector<std::vector<Tensor3d>>> d3gamma;
};

MetricJet build_metric_jet(const MetricField& m, const Vector& p, int order) {
  const int n = m.dim();
  if (order > m.table_order())
    throw std::invalid_argument("metric derivative tables were built to a lower order");

  MetricJet jet;
  jet.n = n;
  jet.order = order;

  // Component jets of the lower triangle, symmetrized into matrices per index.
  std::vector<std::vector<ScalarJet>> comp(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    comp[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(i) + 1);
    for (int j = 0; j <= i; ++j)
      comp[static_cast<std::size_t>(i)].push_back(evaluate_jet(m.table(i, j), p, order));
  }
  auto cj = [&](int a, int b) -> const ScalarJet& {
    return a >= b ? comp[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                  : comp[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
  };

  jet.g = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) jet.g(a, b) = cj(a, b).v;

  Eigen::LDLT<Matrix> ldlt(jet.g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "metric is not positive definite at point (";
    for (int i = 0; i < n; ++i) msg << (i ? ", " : "") << p[i];
    msg << ")";
    throw MetricNotSpdError(msg.str(), p);
  }
  jet.ginv = ldlt.solve(Matrix::Identity(n, n));

  jet.dg.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) jet.dg[static_cast<std::size_t>(i)](a, b) = cj(a, b).d1[i];

  if (order >= 2) {
    jet.d2g.assign(static_cast<std::size_t>(n),
                   std::vector<Matrix>(static_cast<std::size_t>(n), Matrix::Zero(n, n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            jet.d2g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](a, b) =
                cj(a, b).d2(i, j);
  }
  if (order >= 3) {
    jet.d3g.assign(
        static_cast<std::size_t>(n),
        std::vector<std::vector<Matrix>>(
            static_cast<std::size_t>(n),
            std::vector<Matrix>(static_cast<std::size_t>(n), Matrix::Zero(n, n))));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              jet.d3g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                     [static_cast<std::size_t>(k)](a, b) = cj(a, b).d3(i, j, k);
  }
  if (order >= 4) {
    jet.d4g.assign(
        static_cast<std::size_t>(n),
        std::vector<std::vector<std::vector<Matrix>>>(
            static_cast<std::size_t>(n),
            std::vector<std::vector<Matrix>>(
                static_cast<std::size_t>(n),
                std::vector<Matrix>(static_cast<std::size_t>(n), Matrix::Zero(n, n)))));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                jet.d4g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                       [static_cast<std::size_t>(k)][static_cast<std::size_t>(l)](a, b) =
                    cj(a, b).d4(i, j, k, l);
  }

  // ∂ g^{-1} = −g^{-1} (∂g) g^{-1}, and its derivatives by the product rule.
  const Matrix& G = jet.ginv;
  jet.dginv.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    jet.dginv[static_cast<std::size_t>(i)] = -G * jet.dg[static_cast<std::size_t>(i)] * G;

  if (order >= 3) {
    jet.d2ginv.assign(static_cast<std::size_t>(n),
                      std::vector<Matrix>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto I = static_cast<std::size_t>(i);
        const auto J = static_cast<std::size_t>(j);
        jet.d2ginv[I][J] = -(jet.dginv[J] * jet.dg[I] * G + G * jet.d2g[I][J] * G +
                             G * jet.dg[I] * jet.dginv[J]);
      }
  }
  if (order >= 4) {
    jet.d3ginv.assign(
        static_cast<std::size_t>(n),
        std::vector<std::vector<Matrix>>(static_cast<std::size_t>(n),
                                         std::vector<Matrix>(static_cast<std::size_t>(n))));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const auto I = static_cast<std::size_t>(i);
          const auto J = static_cast<std::size_t>(j);
          const auto K = static_cast<std::size_t>(k);
          jet.d3ginv[I][J][K] =
              -(jet.d2ginv[J][K] * jet.dg[I] * G + jet.dginv[J] * jet.d2g[I][K] * G +
                jet.dginv[J] * jet.dg[I] * jet.dginv[K] + jet.dginv[K] * jet.d2g[I][J] * G +
                G * jet.d3g[I][J][K] * G + G * jet.d2g[I][J] * jet.dginv[K] +
                jet.dginv[K] * jet.dg[I] * jet.dginv[J] + G * jet.d2g[I][K] * jet.dginv[J] +
                G * jet.dg[I] * jet.d2ginv[J][K]);
        }
  }

  // T_cij = ∂_i g_jc + ∂_j g_ic − ∂_c g_ij and its coordinate derivatives.
  auto T = [&](int c, int i, int j) {
    return jet.dg[static_cast<std::size_t>(i)](j, c) + jet.dg[static_cast<std::size_t>(j)](i, c) -
           jet.dg[static_cast<std::size_t>(c)](i, j);
  };
  auto dT = [&](int c, int i, int j, int m) {
    const auto M = static_cast<std::size_t>(m);
    return jet.d2g[static_cast<std::size_t>(i)][M](j, c) +
           jet.d2g[static_cast<std::size_t>(j)][M](i, c) -
           jet.d2g[static_cast<std::size_t>(c)][M](i, j);
  };
  auto d2T = [&](int c, int i, int j, int m, int q) {
    const auto M = static_cast<std::size_t>(m);
    const auto Q = static_cast<std::size_t>(q);
    return jet.d3g[static_cast<std::size_t>(i)][M][Q](j, c) +
           jet.d3g[static_cast<std::size_t>(j)][M][Q](i, c) -
           jet.d3g[static_cast<std::size_t>(c)][M][Q](i, j);
  };
  auto d3T = [&](int c, int i, int j, int m, int q, int s) {
    const auto M = static_cast<std::size_t>(m);
    const auto Q = static_cast<std::size_t>(q);
    const auto S = static_cast<std::size_t>(s);
    return jet.d4g[static_cast<std::size_t>(i)][M][Q][S](j, c) +
           jet.d4g[static_cast<std::size_t>(j)][M][Q][S](i, c) -
           jet.d4g[static_cast<std::size_t>(c)][M][Q][S](i, j);
  };

  // Γ^k_ij = ½ g^{kc} T_cij
  jet.gamma = Tensor3d(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double sum = 0.0;
        for (int c = 0; c < n; ++c) sum += G(k, c) * T(c, i, j);
        jet.gamma(k, i, j) = jet.gamma(k, j, i) = 0.5 * sum;
      }

  if (order >= 2) {
    jet.dgamma.assign(static_cast<std::size_t>(n), Tensor3d(n));
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            double sum = 0.0;
            for (int c = 0; c < n; ++c)
              sum += jet.dginv[static_cast<std::size_t>(m)](k, c) * T(c, i, j) +
                     G(k, c) * dT(c, i, j, m);
            auto& t = jet.dgamma[static_cast<std::size_t>(m)];
            t(k, i, j) = t(k, j, i) = 0.5 * sum;
          }
  }
  if (order >= 3) {
    jet.d2gamma.assign(static_cast<std::size_t>(n),
                       std::vector<Tensor3d>(static_cast<std::size_t>(n), Tensor3d(n)));
    for (int m = 0; m < n; ++m)
      for (int q = 0; q < n; ++q)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
              const auto M = static_cast<std::size_t>(m);
              const auto Q = static_cast<std::size_t>(q);
              double sum = 0.0;
              for (int c = 0; c < n; ++c)
                sum += jet.d2ginv[M][Q](k, c) * T(c, i, j) +
                       jet.dginv[M](k, c) * dT(c, i, j, q) +
                       jet.dginv[Q](k, c) * dT(c, i, j, m) + G(k, c) * d2T(c, i, j, m, q);
              auto& t = jet.d2gamma[M][Q];
              t(k, i, j) = t(k, j, i) = 0.5 * sum;
            }
  }
  if (order >= 4) {
    jet.d3gamma.assign(
        static_cast<std::size_t>(n),
        std::vector<std::vector<Tensor3d>>(
            static_cast<std::size_t>(n),
            std::vector<Tensor3d>(static_cast<std::size_t>(n), Tensor3d(n))));
    for (int m = 0; m < n; ++m)
      for (int q = 0; q < n; ++q)
        for (int s = 0; s < n; ++s)
          for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
              for (int j = i; j < n; ++j) {
                const auto M = static_cast<std::size_t>(m);
                const auto Q = static_cast<std::size_t>(q);
                const auto Sx = static_cast<std::size_t>(s);
                double sum = 0.0;
                for (int c = 0; c < n; ++c) {
                  sum += jet.d3ginv[M][Q][Sx](k, c) * T(c, i, j);
                  sum += jet.d2ginv[M][Q](k, c) * dT(c, i, j, s) +
                         jet.d2ginv[M][Sx](k, c) * dT(c, i, j, q) +
                         jet.d2ginv[Q][Sx](k, c) * dT(c, i, j, m);
                  sum += jet.dginv[M](k, c) * d2T(c, i, j, q, s) +
                         jet.dginv[Q](k, c) * d2T(c, i, j, m, s) +
                         jet.dginv[Sx](k, c) * d2T(c, i, j, m, q);
                  sum += G(k, c) * d3T(c, i, j, m, q, s);
                }
                auto& t = jet.d3gamma[M][Q][Sx];
                t(k, i, j) = t(k, j, i) = 0.5 * sum;
              }
  }

  return jet;
}

/// Ricci tensor and its coordinate derivatives from the Christoffel jets.
/// Ric_kj = Σ_i [ ∂_i Γ^i_jk − ∂_j Γ^i_ik + Γ^i_im Γ^m_jk − Γ^i_jm Γ^m_ik ].
struct RicciJet {
  Matrix ric;
  Tensor3d dric;   // dric(k,j,q) = ∂_q Ric_kj
  Tensor4d d2ric;  // d2ric(k,j,q,s)
};

RicciJet build_ricci_jet(const MetricJet& mj, int order) {
  const int n = mj.n;
  RicciJet rj;
  rj.ric = Matrix::Zero(n, n);
  const auto& ga = mj.gamma;

  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += mj.dgamma[static_cast<std::size_t>(i)](i, j, k) -
               mj.dgamma[static_cast<std::size_t>(j)](i, i, k);
        for (int m = 0; m < n; ++m)
          sum += ga(i, i, m) * ga(m, j, k) - ga(i, j, m) * ga(m, i, k);
      }
      rj.ric(k, j) = sum;
    }

  if (order >= 3) {
    rj.dric = Tensor3d(n);
    for (int q = 0; q < n; ++q) {
      const auto Q = static_cast<std::size_t>(q);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
          double sum = 0.0;
          for (int i = 0; i < n; ++i) {
            const auto I = static_cast<std::size_t>(i);
            const auto J = static_cast<std::size_t>(j);
            sum += mj.d2gamma[I][Q](i, j, k) - mj.d2gamma[J][Q](i, i, k);
            for (int m = 0; m < n; ++m) {
              sum += mj.dgamma[Q](i, i, m) * ga(m, j, k) + ga(i, i, m) * mj.dgamma[Q](m, j, k);
              sum -= mj.dgamma[Q](i, j, m) * ga(m, i, k) + ga(i, j, m) * mj.dgamma[Q](m, i, k);
            }
          }
          rj.dric(k, j, q) = sum;
        }
    }
  }

  if (order >= 4) {
    rj.d2ric = Tensor4d(n);
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s) {
        const auto Q = static_cast<std::size_t>(q);
        const auto Sx = static_cast<std::size_t>(s);
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
              const auto I = static_cast<std::size_t>(i);
              const auto J = static_cast<std::size_t>(j);
              sum += mj.d3gamma[I][Q][Sx](i, j, k) - mj.d3gamma[J][Q][Sx](i, i, k);
              for (int m = 0; m < n; ++m) {
                sum += mj.d2gamma[Q][Sx](i, i, m) * ga(m, j, k) +
                       mj.dgamma[Q](i, i, m) * mj.dgamma[Sx](m, j, k) +
                       mj.dgamma[Sx](i, i, m) * mj.dgamma[Q](m, j, k) +
                       ga(i, i, m) * mj.d2gamma[Q][Sx](m, j, k);
                sum -= mj.d2gamma[Q][Sx](i, j, m) * ga(m, i, k) +
                       mj.dgamma[Q](i, j, m) * mj.dgamma[Sx](m, i, k) +
                       mj.dgamma[Sx](i, j, m) * mj.dgamma[Q](m, i, k) +
                       ga(i, j, m) * mj.d2gamma[Q][Sx](m, i, k);
              }
            }
            rj.d2ric(k, j, q, s) = sum;
          }
      }
  }

  return rj;
}

/// Scalar curvature S = g^{ab} Ric_ab and as many derivatives as `order` supports.
struct ScalarCurvatureJet {
  double s = 0.0;
  Vector ds;   // ∂_q S
  Matrix d2s;  // ∂_q ∂_s S
};

ScalarCurvatureJet build_scalar_jet(const MetricJet& mj, const RicciJet& rj, int order) {
  const int n = mj.n;
  ScalarCurvatureJet sj;
  sj.s = (mj.ginv * rj.ric).trace();

  if (order >= 3) {
    sj.ds = Vector::Zero(n);
    for (int q = 0; q < n; ++q) {
      double sum = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          sum += mj.dginv[static_cast<std::size_t>(q)](a, b) * rj.ric(a, b) +
                 mj.ginv(a, b) * rj.dric(a, b, q);
      sj.ds[q] = sum;
    }
  }

  if (order >= 4) {
    sj.d2s = Matrix::Zero(n, n);
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s) {
        const auto Q = static_cast<std::size_t>(q);
        const auto Sx = static_cast<std::size_t>(s);
        double sum = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            sum += mj.d2ginv[Q][Sx](a, b) * rj.ric(a, b) + mj.dginv[Q](a, b) * rj.dric(a, b, s) +
                   mj.dginv[Sx](a, b) * rj.dric(a, b, q) + mj.ginv(a, b) * rj.d2ric(a, b, q, s);
        sj.d2s(q, s) = sum;
      }
  }

  return sj;
}

/// Laplace–Beltrami of a scalar from its coordinate jet:
/// Δu = g^{ij} (∂_i ∂_j u − Γ^k_ij ∂_k u).
double laplacian_from_jet(const MetricJet& mj, const Vector& du, const Matrix& d2u) {
  const int n = mj.n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double corr = 0.0;
      for (int k = 0; k < n; ++k) corr += mj.gamma(k, i, j) * du[k];
      sum += mj.ginv(i, j) * (d2u(i, j) - corr);
    }
  return sum;
}

Vector ricci_divergence(const MetricJet& mj, const RicciJet& rj) {
  const int n = mj.n;
  Vector div = Vector::Zero(n);
  for (int b = 0; b < n; ++b) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double cov = rj.dric(k, b, i);
        for (int m = 0; m < n; ++m)
          cov -= mj.gamma(m, i, k) * rj.ric(m, b) + mj.gamma(m, i, b) * rj.ric(k, m);
        sum += mj.ginv(i, k) * cov;
      }
    div[b] = sum;
  }
  return div;
}

}  // namespace

// ---------------------------------------------------------------------------

MetricField::MetricField(int dim, std::vector<Expr> lower, int table_order)
    : n_(dim), order_(table_order) {
  if (dim < 2) throw std::invalid_argument("metric dimension must be at least 2");
  const std::size_t expect = static_cast<std::size_t>(dim) * (dim + 1) / 2;
  if (lower.size() != expect)
    throw std::invalid_argument("metric needs " + std::to_string(expect) +
                                " lower-triangular components, got " +
                                std::to_string(lower.size()));
  tables_.reserve(expect);
  for (auto& e : lower) {
    if (e.max_variable() >= dim)
      throw std::invalid_argument("metric component references a coordinate beyond the chart");
    tables_.emplace_back(std::move(e), dim, table_order);
  }
}

std::size_t MetricField::tri(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("metric index out of range");
  if (i < j) std::swap(i, j);
  return static_cast<std::size_t>(i) * (static_cast<std::size_t>(i) + 1) / 2 +
         static_cast<std::size_t>(j);
}

Matrix MetricField::value(const Vector& p) const {
  Matrix g(n_, n_);
  const auto sp = as_span(p);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = evaluate(component(i, j), sp);
  return g;
}

void MetricField::value_and_inverse(const Vector& p, Matrix& g, Matrix& g_inv) const {
  g = value(p);
  Eigen::LDLT<Matrix> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "metric is not positive definite at point (";
    for (int i = 0; i < n_; ++i) msg << (i ? ", " : "") << p[i];
    msg << ")";
    throw MetricNotSpdError(msg.str(), p);
  }
  g_inv = ldlt.solve(Matrix::Identity(n_, n_));
}

Tensor3d christoffel(const MetricField& m, const Vector& p) {
  return build_metric_jet(m, p, 1).gamma;
}

CurvatureState curvature_state(const MetricField& m, const Vector& p) {
  const int n = m.dim();
  const MetricJet mj = build_metric_jet(m, p, 4);
  const RicciJet rj = build_ricci_jet(mj, 4);
  const ScalarCurvatureJet sj = build_scalar_jet(mj, rj, 4);

  CurvatureState st;
  st.point = p;
  st.metric = mj.g;
  st.metric_inv = mj.ginv;
  st.christoffel = mj.gamma;

  st.riemann = Tensor4d(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = mj.dgamma[static_cast<std::size_t>(i)](l, j, k) -
                     mj.dgamma[static_cast<std::size_t>(j)](l, i, k);
          for (int c = 0; c < n; ++c)
            v += mj.gamma(l, i, c) * mj.gamma(c, j, k) - mj.gamma(l, j, c) * mj.gamma(c, i, k);
          st.riemann(l, k, i, j) = v;
        }

  st.ricci = rj.ric;
  st.scalar = sj.s;
  st.scalar_grad = sj.ds;
  st.scalar_lap = laplacian_from_jet(mj, sj.ds, sj.d2s);
  const Matrix op = mj.ginv * rj.ric;
  st.ricci_norm2 = (op * op).trace();
  st.ricci_div = ricci_divergence(mj, rj);
  return st;
}

PotentialState potential_state(const MetricField& m, const ScalarField& f, const Vector& p) {
  const int n = m.dim();
  if (f.dim() != n) throw std::invalid_argument("potential dimension does not match the metric");
  if (f.table().max_order() < 3)
    throw std::invalid_argument("potential derivative table needs order 3");

  const MetricJet mj = build_metric_jet(m, p, 3);
  const RicciJet rj = build_ricci_jet(mj, 3);
  const ScalarCurvatureJet sj = build_scalar_jet(mj, rj, 3);
  const ScalarJet fj = evaluate_jet(f.table(), p, 3);

  PotentialState st;
  st.point = p;
  st.value = fj.v;
  st.grad = fj.d1;

  st.grad_norm2 = fj.d1.dot(mj.ginv * fj.d1);

  st.hessian = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double corr = 0.0;
      for (int k = 0; k < n; ++k) corr += mj.gamma(k, i, j) * fj.d1[k];
      st.hessian(i, j) = fj.d2(i, j) - corr;
    }
  st.lap = (mj.ginv * st.hessian).trace();
  const Matrix hop = mj.ginv * st.hessian;
  st.hess_norm2 = (hop * hop).trace();

  const Vector grad_up = mj.ginv * fj.d1;
  st.ricci_grad_grad = grad_up.dot(rj.ric * grad_up);
  st.grad_s_dot_grad_f = sj.ds.dot(mj.ginv * fj.d1);

  // u = |∇f|^2 = g^{ab} ∂_a f ∂_b f, expanded covariantly so that only
  // order-3 tables of f and g enter (no symbolic metric inversion).
  Vector du = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const auto I = static_cast<std::size_t>(i);
    double sum = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        sum += mj.dginv[I](a, b) * fj.d1[a] * fj.d1[b] +
               2.0 * mj.ginv(a, b) * fj.d2(a, i) * fj.d1[b];
    du[i] = sum;
  }
  Matrix d2u = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto I = static_cast<std::size_t>(i);
      const auto J = static_cast<std::size_t>(j);
      double sum = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          sum += mj.d2ginv[I][J](a, b) * fj.d1[a] * fj.d1[b];
          sum += mj.dginv[I](a, b) * (fj.d2(a, j) * fj.d1[b] + fj.d1[a] * fj.d2(b, j));
          sum += 2.0 * mj.dginv[J](a, b) * fj.d2(a, i) * fj.d1[b];
          sum += 2.0 * mj.ginv(a, b) * (fj.d3(a, i, j) * fj.d1[b] + fj.d2(a, i) * fj.d2(b, j));
        }
      d2u(i, j) = sum;
    }
  st.lap_grad_norm2 = laplacian_from_jet(mj, du, d2u);

  return st;
}

double check_contracted_bianchi(const MetricField& m, const Vector& p) {
  const MetricJet mj = build_metric_jet(m, p, 3);
  const RicciJet rj = build_ricci_jet(mj, 3);
  const ScalarCurvatureJet sj = build_scalar_jet(mj, rj, 3);
  const Vector div = ricci_divergence(mj, rj);
  return (sj.ds - 2.0 * div).cwiseAbs().maxCoeff();
}

}  // namespace riccisol
