#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace riccisol {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

/// Dense rank-3 container with all extents equal to n, stored row-major.
template <typename Scalar>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n), Scalar(0)) {}

  Scalar& operator()(Index i, Index j, Index k) { return data_[idx(i, j, k)]; }
  Scalar operator()(Index i, Index j, Index k) const { return data_[idx(i, j, k)]; }

  Index extent() const { return n_; }
  void setZero() { std::fill(data_.begin(), data_.end(), Scalar(0)); }

 private:
  std::size_t idx(Index i, Index j, Index k) const {
    return static_cast<std::size_t>((i * n_ + j) * n_ + k);
  }
  Index n_ = 0;
  std::vector<Scalar> data_;
};

/// Dense rank-4 container with all extents equal to n.
template <typename Scalar>
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), Scalar(0)) {}

  Scalar& operator()(Index i, Index j, Index k, Index l) { return data_[idx(i, j, k, l)]; }
  Scalar operator()(Index i, Index j, Index k, Index l) const { return data_[idx(i, j, k, l)]; }

  Index extent() const { return n_; }
  void setZero() { std::fill(data_.begin(), data_.end(), Scalar(0)); }

 private:
  std::size_t idx(Index i, Index j, Index k, Index l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }
  Index n_ = 0;
  std::vector<Scalar> data_;
};

using Tensor3d = Tensor3<double>;
using Tensor4d = Tensor4<double>;

/// Absolute + relative tolerance pair used by all residual checks.
struct Tolerance {
  double abs = 1e-8;
  double rel = 1e-8;
};

}  // namespace riccisol
