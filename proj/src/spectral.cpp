#include "riccisol/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace riccisol {

const char* to_string(ManifoldTag tag) {
  return tag == ManifoldTag::Torus ? "torus" : "sphere";
}

namespace {

using Triplet = Eigen::Triplet<double>;

void add_edge(std::vector<Triplet>& trip, Index a, Index b, double w) {
  trip.emplace_back(a, a, w);
  trip.emplace_back(b, b, w);
  trip.emplace_back(a, b, -w);
  trip.emplace_back(b, a, -w);
}

DiscreteLaplacian build_torus(int res, double side) {
  const Index n = res;
  const Index count = n * n;
  const double h = side / static_cast<double>(res);

  // Energy form Σ (Δu)^2 over grid edges; cell measure h^2. The generalized
  // eigenvalue of the wavenumber-k mode is 4 sin^2(π k / N) / h^2.
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(8 * count));
  auto id = [n](Index i, Index j) { return i * n + j; };
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      add_edge(trip, id(i, j), id((i + 1) % n, j), 1.0);
      add_edge(trip, id(i, j), id(i, (j + 1) % n), 1.0);
    }

  DiscreteLaplacian op;
  op.tag = ManifoldTag::Torus;
  op.resolution = res;
  op.size = side;
  op.low_resolution = res < 16;
  op.stiffness.resize(count, count);
  op.stiffness.setFromTriplets(trip.begin(), trip.end());
  op.mass = Vector::Constant(count, h * h);
  return op;
}

DiscreteLaplacian build_sphere(int res, double radius) {
  const Index nth = res;       // colatitude cells
  const Index nph = 2 * res;   // longitude cells
  const Index count = nth * nph;
  const double dth = std::numbers::pi / static_cast<double>(nth);
  const double dph = 2.0 * std::numbers::pi / static_cast<double>(nph);

  // Latitudes sit half a cell off the poles: θ_i = (i + ½)Δθ. The θ-flux
  // weight through the pole-side face of the first ring is sin(0) = 0, so the
  // poles need no special rows.
  auto theta = [dth](Index i) { return (static_cast<double>(i) + 0.5) * dth; };
  auto id = [nph](Index i, Index j) { return i * nph + j; };

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(8 * count));
  for (Index i = 0; i < nth; ++i) {
    const double sin_i = std::sin(theta(i));
    for (Index j = 0; j < nph; ++j) {
      if (i + 1 < nth) {
        const double w = std::sin((static_cast<double>(i) + 1.0) * dth) * dph / dth;
        add_edge(trip, id(i, j), id(i + 1, j), w);
      }
      const double w = dth / (sin_i * dph);
      add_edge(trip, id(i, j), id(i, (j + 1) % nph), w);
    }
  }

  DiscreteLaplacian op;
  op.tag = ManifoldTag::Sphere;
  op.resolution = res;
  op.size = radius;
  op.pole_offset = 0.5 * dth;
  op.low_resolution = res < 16;
  op.stiffness.resize(count, count);
  op.stiffness.setFromTriplets(trip.begin(), trip.end());
  op.mass = Vector::Zero(count);
  const double r2 = radius * radius;
  for (Index i = 0; i < nth; ++i) {
    const double m = r2 * std::sin(theta(i)) * dth * dph;
    for (Index j = 0; j < nph; ++j) op.mass[id(i, j)] = m;
  }
  return op;
}

}  // namespace

DiscreteLaplacian build_laplacian(ManifoldTag tag, int resolution, double size) {
  if (resolution < 8)
    throw std::invalid_argument("resolution must be at least 8 cells per axis");
  if (size <= 0.0) throw std::invalid_argument("manifold size must be positive");
  return tag == ManifoldTag::Torus ? build_torus(resolution, size)
                                   : build_sphere(resolution, size);
}

double reference_lambda1(ManifoldTag tag, double size) {
  if (tag == ManifoldTag::Torus) {
    const double k = 2.0 * std::numbers::pi / size;
    return k * k;
  }
  return 2.0 / (size * size);
}

EigenEstimate first_eigenvalue(const DiscreteLaplacian& op, double tol, std::uint64_t seed,
                               int max_iterations) {
  const Index count = op.vertex_count();
  const Vector& mass = op.mass;
  const double mass_total = mass.sum();

  // The low end of the spectrum is clustered (the continuum eigenvalue has
  // multiplicity, which the grid splits only at O(h^2)), so a single vector
  // converges at the intra-cluster rate. A small block spans the cluster and
  // its smallest Ritz value converges at the block rate instead.
  constexpr Index block = 6;

  const double sigma = 1e-3 * op.stiffness.diagonal().sum() / mass_total;
  Eigen::SparseMatrix<double> shifted = op.stiffness;
  for (Index i = 0; i < count; ++i) shifted.coeffRef(i, i) += sigma * mass[i];
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("failed to factorize the shifted operator");

  auto deflate = [&](Matrix& v) {
    // Remove the constant mode in the M-inner product, column by column.
    for (Index j = 0; j < v.cols(); ++j)
      v.col(j).array() -= v.col(j).dot(mass) / mass_total;
  };
  auto orthonormalize = [&](Matrix& v) {
    for (Index j = 0; j < v.cols(); ++j) {
      for (Index k = 0; k < j; ++k)
        v.col(j) -= v.col(k).dot(mass.cwiseProduct(v.col(j))) * v.col(k);
      const double norm = std::sqrt(v.col(j).dot(mass.cwiseProduct(v.col(j))));
      if (!(norm > 0.0)) throw std::runtime_error("eigen iteration collapsed to zero");
      v.col(j) /= norm;
    }
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Matrix x(count, block);
  for (Index j = 0; j < block; ++j)
    for (Index i = 0; i < count; ++i) x(i, j) = uni(rng);
  deflate(x);
  orthonormalize(x);

  EigenEstimate est;
  Vector first = x.col(0);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iterations; ++it) {
    Matrix y = llt.solve(mass.asDiagonal() * x);
    deflate(y);
    orthonormalize(y);
    // Rayleigh–Ritz on the block: columns are M-orthonormal, so the reduced
    // mass matrix is the identity.
    const Matrix reduced = y.transpose() * (op.stiffness * y);
    Eigen::SelfAdjointEigenSolver<Matrix> small(0.5 * (reduced + reduced.transpose()));
    if (small.info() != Eigen::Success)
      throw std::runtime_error("Rayleigh-Ritz reduction failed");
    x = y * small.eigenvectors();
    const double rayleigh = small.eigenvalues()[0];
    est.history.push_back(rayleigh);
    est.iterations = it;
    if (std::abs(rayleigh - prev) <= tol * std::max(std::abs(rayleigh), 1e-300)) {
      est.lambda1 = rayleigh;
      est.converged = true;
      first = x.col(0);
      break;
    }
    prev = rayleigh;
  }
  if (!est.converged)
    throw std::runtime_error("eigenvalue iteration did not converge within " +
                             std::to_string(max_iterations) + " iterations");

  est.constant_orthogonality =
      std::abs(first.dot(mass)) / std::sqrt(mass_total * first.dot(mass.cwiseProduct(first)));
  return est;
}

DichotomyReport dichotomy_report(bool trivial, double premise_residual, double lambda,
                                 double lambda1, double residual_tol) {
  DichotomyReport rep;
  rep.lambda = lambda;
  rep.lambda1 = lambda1;
  rep.hypothesis_satisfied = premise_residual <= residual_tol;
  if (!rep.hypothesis_satisfied) {
    rep.note = "Poisson/soliton hypothesis not satisfied (premise residual " +
               std::to_string(premise_residual) + "); the dichotomy is silent";
    return rep;
  }
  rep.trivial_branch = trivial;
  if (trivial) {
    rep.dichotomy_satisfied = true;
    rep.note = "trivial branch holds; lambda = " + std::to_string(lambda) +
               " sits below lambda1 = " + std::to_string(lambda1) +
               ", consistent because triviality carries the dichotomy";
  } else {
    rep.dichotomy_satisfied = lambda >= lambda1 * 0.98;
    rep.note = rep.dichotomy_satisfied
                   ? "non-trivial branch: lambda >= lambda1 as required"
                   : "non-trivial branch violated: lambda < lambda1";
  }
  return rep;
}

}  // namespace riccisol
