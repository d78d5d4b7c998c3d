#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "streamcov/error.hpp"

namespace streamcov {

using Index = Eigen::Index;

template <typename Scalar = double>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// n x p data matrix, one observation per row, each row contiguous.
template <typename Scalar = double>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar = double>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr Index kDefaultBlock = 64;

/// Symmetric p x p matrix held as its packed upper triangle. The triangle is
/// stored row after row: (0,0) (0,1) ... (0,p-1) (1,1) ... (p-1,p-1), so
/// (k,l) and (l,k) address the same slot and symmetry cannot be broken.
///
/// A default-constructed SymMatrix has dimension 0 and is only meaningful as
/// the payload of an empty summary.
template <typename Scalar = double>
class SymMatrix {
 public:
  using scalar_type = Scalar;

  SymMatrix() = default;

  explicit SymMatrix(Index p) : p_(p) {
    if (p < 1) throw Error(ErrorCode::dim, "symmetric matrix needs p >= 1");
    data_.assign(static_cast<std::size_t>(packed_size(p)), Scalar(0));
  }

  static constexpr Index packed_size(Index p) { return p * (p + 1) / 2; }

  static SymMatrix identity(Index p) {
    SymMatrix s(p);
    for (Index k = 0; k < p; ++k) s(k, k) = Scalar(1);
    return s;
  }

  /// Packs the upper triangle of a square dense matrix; the lower triangle is ignored.
  template <typename Derived>
  static SymMatrix from_dense(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::dim, "from_dense needs a square matrix");
    SymMatrix s(a.rows());
    Scalar* out = s.data_.data();
    for (Index k = 0; k < a.rows(); ++k)
      for (Index l = k; l < a.cols(); ++l) *out++ = a(k, l);
    return s;
  }

  Index dim() const noexcept { return p_; }
  Index size() const noexcept { return static_cast<Index>(data_.size()); }

  /// Offset of the diagonal entry (k,k) in the packed array.
  Index row_offset(Index k) const noexcept { return k * (2 * p_ - k + 1) / 2; }

  Scalar operator()(Index k, Index l) const noexcept {
    if (k > l) std::swap(k, l);
    return data_[static_cast<std::size_t>(row_offset(k) + (l - k))];
  }
  Scalar& operator()(Index k, Index l) noexcept {
    if (k > l) std::swap(k, l);
    return data_[static_cast<std::size_t>(row_offset(k) + (l - k))];
  }

  std::span<Scalar> packed() noexcept { return data_; }
  std::span<const Scalar> packed() const noexcept { return data_; }

  DenseMatrix<Scalar> to_dense() const {
    DenseMatrix<Scalar> a(p_, p_);
    for (Index k = 0; k < p_; ++k)
      for (Index l = k; l < p_; ++l) a(k, l) = a(l, k) = (*this)(k, l);
    return a;
  }

  Scalar trace() const noexcept {
    Scalar t(0);
    for (Index k = 0; k < p_; ++k) t += (*this)(k, k);
    return t;
  }

  void set_zero() noexcept { std::fill(data_.begin(), data_.end(), Scalar(0)); }

  SymMatrix& operator+=(const SymMatrix& other) {
    require_same_dim(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& other) {
    require_same_dim(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }
  SymMatrix& operator*=(Scalar a) noexcept {
    for (auto& v : data_) v *= a;
    return *this;
  }
  SymMatrix& operator/=(Scalar a) noexcept {
    for (auto& v : data_) v /= a;
    return *this;
  }

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(Scalar s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator*(SymMatrix a, Scalar s) { return a *= s; }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  void require_same_dim(const SymMatrix& other) const {
    if (other.p_ != p_) throw Error(ErrorCode::dim, "symmetric matrix dimension mismatch");
  }

  Index p_ = 0;
  std::vector<Scalar> data_;
};

namespace detail {

inline void require_dim(Index a, Index b, const char* what) {
  if (a != b)
    throw Error(ErrorCode::dim,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

// Adds alpha * x x^T into a packed triangle of dimension p.
template <typename Scalar>
inline void packed_rank1(Scalar* packed, const Scalar* x, Index p, Scalar alpha) {
  for (Index k = 0; k < p; ++k) {
    const Scalar axk = alpha * x[k];
    for (Index l = k; l < p; ++l) *packed++ += axk * x[l];
  }
}

// Same as packed_rank1 with alpha == 1; kept separate so no multiply by one is issued.
template <typename Scalar>
inline void packed_outer(Scalar* packed, const Scalar* x, Index p) {
  for (Index k = 0; k < p; ++k) {
    const Scalar xk = x[k];
    for (Index l = k; l < p; ++l) *packed++ += xk * x[l];
  }
}

}  // namespace detail

/// S += alpha * x x^T on the stored triangle only.
template <typename Scalar, typename Derived>
void sym_rank1_update(SymMatrix<Scalar>& s, const Eigen::MatrixBase<Derived>& x, Scalar alpha) {
  detail::require_dim(s.dim(), x.size(), "sym_rank1_update");
  const Eigen::Ref<const Vector<Scalar>> xv(x.derived());
  detail::packed_rank1(s.packed().data(), xv.data(), s.dim(), alpha);
}

/// X^T X accumulated block by block. Each block of at most `block` rows is
/// reduced into a block-local triangle (the rank-k update) which is then added
/// to the result. Summation inside a block is plain and sequential.
template <typename Derived>
SymMatrix<typename Derived::Scalar> blocked_gram(const Eigen::MatrixBase<Derived>& x,
                                                 Index block = kDefaultBlock) {
  using Scalar = typename Derived::Scalar;
  if (block < 1) throw Error(ErrorCode::bad_spec, "blocked_gram needs block >= 1");
  const Eigen::Ref<const Matrix<Scalar>> xr(x.derived());
  const Index n = xr.rows();
  const Index p = xr.cols();
  SymMatrix<Scalar> g(p);
  std::vector<Scalar> acc(static_cast<std::size_t>(SymMatrix<Scalar>::packed_size(p)));
  auto out = g.packed();
  for (Index start = 0; start < n; start += block) {
    const Index stop = std::min(n, start + block);
    std::fill(acc.begin(), acc.end(), Scalar(0));
    for (Index i = start; i < stop; ++i)
      detail::packed_outer(acc.data(), xr.data() + i * xr.outerStride(), p);
    for (std::size_t j = 0; j < acc.size(); ++j) out[j] += acc[j];
  }
  return g;
}

/// max_kl |A_kl - B_kl|.
template <typename Scalar>
Scalar max_abs_diff(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b) {
  detail::require_dim(a.dim(), b.dim(), "max_abs_diff");
  Scalar m(0);
  auto pa = a.packed();
  auto pb = b.packed();
  for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::abs(pa[i] - pb[i]));
  return m;
}

template <typename Scalar>
Scalar max_abs(const SymMatrix<Scalar>& a) {
  Scalar m(0);
  for (Scalar v : a.packed()) m = std::max(m, std::abs(v));
  return m;
}

/// Frobenius norm of the full symmetric matrix (off-diagonal entries count twice).
template <typename Scalar>
Scalar frobenius_norm(const SymMatrix<Scalar>& a) {
  Scalar sum(0);
  for (Index k = 0; k < a.dim(); ++k) {
    sum += a(k, k) * a(k, k);
    for (Index l = k + 1; l < a.dim(); ++l) sum += Scalar(2) * a(k, l) * a(k, l);
  }
  return std::sqrt(sum);
}

/// ||A - B||_F / ||B||_F.
template <typename Scalar>
Scalar rel_frobenius_diff(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b) {
  detail::require_dim(a.dim(), b.dim(), "rel_frobenius_diff");
  const Scalar ref = frobenius_norm(b);
  if (ref == Scalar(0)) throw Error(ErrorCode::zero_reference, "reference has zero Frobenius norm");
  return frobenius_norm(a - b) / ref;
}

/// ||A - B||_max / ||B||_max.
template <typename Scalar>
Scalar rel_max_diff(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b) {
  const Scalar diff = max_abs_diff(a, b);
  const Scalar ref = max_abs(b);
  if (ref == Scalar(0)) throw Error(ErrorCode::zero_reference, "reference has zero max-norm");
  return diff / ref;
}

}  // namespace streamcov
