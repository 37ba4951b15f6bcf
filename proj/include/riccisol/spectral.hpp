#pragma once

#include <Eigen/SparseCore>

#include <cstdint>
#include <string>
#include <vector>

#include "riccisol/types.hpp"

namespace riccisol {

enum class ManifoldTag { Torus, Sphere };
const char* to_string(ManifoldTag tag);

/// Finite-volume surrogate of the Laplace–Beltrami operator on a closed
/// surface with known spectrum. Assembled as a generalized pair (A, M):
/// stiffness A (symmetric positive semidefinite, row sums zero so constants
/// span the kernel) and lumped vertex measures M (positive, summing to the
/// surface area up to quadrature error).
struct DiscreteLaplacian {
  ManifoldTag tag{};
  int resolution = 0;   // cells per axis (the sphere uses resolution x 2*resolution)
  double size = 0.0;    // torus side L or sphere radius r
  double pole_offset = 0.0;  // sphere only: latitude half-cell offset in radians
  bool low_resolution = false;
  Eigen::SparseMatrix<double> stiffness;
  Vector mass;

  Index vertex_count() const { return mass.size(); }
  double total_measure() const { return mass.sum(); }
};

/// Flat torus: periodic five-point stencil on an N×N grid, exact total
/// measure L^2. Sphere: latitude–longitude finite volumes on an
/// N×2N grid with latitudes offset half a cell from the poles, so no row
/// touches a coordinate singularity. resolution >= 8 required; < 16 is
/// flagged low_resolution.
DiscreteLaplacian build_laplacian(ManifoldTag tag, int resolution, double size);

struct EigenEstimate {
  double lambda1 = 0.0;
  int iterations = 0;
  bool converged = false;
  double constant_orthogonality = 0.0;  // |<v, 1>_M| after deflation
  std::vector<double> history;          // Rayleigh quotient per iteration
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eed501;

/// Smallest nonzero generalized eigenvalue of A v = λ M v by shifted inverse
/// iteration with the constant vector deflated in the M-inner product every
/// step. Deterministic for a fixed seed. Throws std::runtime_error when the
/// iteration cap is hit before the Rayleigh quotient settles.
EigenEstimate first_eigenvalue(const DiscreteLaplacian& op, double tol = 1e-10,
                               std::uint64_t seed = kDefaultSeed, int max_iterations = 10000);

/// Closed-form first nonzero eigenvalue: torus (2π/L)^2, sphere 2/r^2.
double reference_lambda1(ManifoldTag tag, double size);

/// Where the soliton constant λ sits against λ₁ for a compact fixture that
/// satisfies the Poisson hypothesis: either the trivial branch holds, or λ
/// must be an eigenvalue (hence ≥ λ₁). A fixture that fails the hypothesis
/// leaves the statement silent.
struct DichotomyReport {
  bool hypothesis_satisfied = false;
  bool trivial_branch = false;
  double lambda = 0.0;
  double lambda1 = 0.0;
  bool dichotomy_satisfied = false;
  std::string note;
};

/// `premise_residual` is the machine-checkable part of the statement's
/// premise: the larger of the fixture's soliton-equation residual and its
/// Poisson residual max |ΔS − λ(nλ − S)|. `trivial` is the triviality
/// verdict of the same fixture. Compactness itself cannot be checked from a
/// chart sample and is carried as a caveat by the callers.
DichotomyReport dichotomy_report(bool trivial, double premise_residual, double lambda,
                                 double lambda1, double residual_tol = 1e-7);

}  // namespace riccisol
