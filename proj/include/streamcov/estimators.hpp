#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "streamcov/linalg.hpp"

namespace streamcov {

/// Running column sums and cross-product matrix of the Gram algorithm.
template <typename Scalar = double>
struct GramSummary {
  std::int64_t t = 0;
  Vector<Scalar> s;
  SymMatrix<Scalar> G;

  GramSummary() = default;
  explicit GramSummary(Index p) : s(Vector<Scalar>::Zero(p)), G(p) {}

  Index dim() const noexcept { return G.dim(); }
};

/// (n, mean, M) where M is the sum of outer products of deviations from the
/// mean. This is the unit that Welford updates and CGL merges.
///
/// A default-constructed summary has p == 0 and acts as the identity of
/// cgl_merge regardless of the other operand's dimension.
template <typename Scalar = double>
struct MomentSummary {
  std::int64_t n = 0;
  Vector<Scalar> mean;
  SymMatrix<Scalar> M;

  MomentSummary() = default;
  explicit MomentSummary(Index p) : mean(Vector<Scalar>::Zero(p)), M(p) {}

  Index dim() const noexcept { return M.dim(); }
  bool empty() const noexcept { return n == 0; }
};

/// Unbiased covariance estimate with its degrees of freedom (count - 1).
template <typename Scalar = double>
struct CovEstimate {
  SymMatrix<Scalar> sigma;
  std::int64_t dof = 0;

  Index dim() const noexcept { return sigma.dim(); }
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& x) {
  if (!x.allFinite()) throw Error(ErrorCode::nonfinite_input, "observation has NaN or Inf entries");
}

inline void require_count(std::int64_t count, const char* what) {
  if (count < 2)
    throw Error(ErrorCode::insufficient_observations,
                std::string(what) + " needs at least 2 observations, have " + std::to_string(count));
}

// (t G - s s^T) / (t (t - 1)), entry by entry in the same operation order as
// the scalar bariance formula.
template <typename Scalar>
SymMatrix<Scalar> gram_formula(std::int64_t t, const Vector<Scalar>& s, const SymMatrix<Scalar>& g) {
  const Index p = g.dim();
  const Scalar tt = Scalar(t);
  const Scalar denom = tt * Scalar(t - 1);
  SymMatrix<Scalar> out(p);
  auto src = g.packed();
  auto dst = out.packed();
  std::size_t i = 0;
  for (Index k = 0; k < p; ++k)
    for (Index l = k; l < p; ++l, ++i) dst[i] = (tt * src[i] - s[k] * s[l]) / denom;
  return out;
}

template <typename Scalar>
Vector<Scalar> column_sums(const Eigen::Ref<const Matrix<Scalar>>& x) {
  Vector<Scalar> s = Vector<Scalar>::Zero(x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const Scalar* row = x.data() + i * x.outerStride();
    for (Index k = 0; k < x.cols(); ++k) s[k] += row[k];
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gram

template <typename Scalar, typename Derived>
void gram_update(GramSummary<Scalar>& state, const Eigen::MatrixBase<Derived>& x) {
  detail::require_dim(state.dim(), x.size(), "gram_update");
  detail::require_finite(x);
  const Eigen::Ref<const Vector<Scalar>> xv(x.derived());
  ++state.t;
  state.s += xv;
  detail::packed_outer(state.G.packed().data(), xv.data(), state.dim());
}

/// Non-destructive; the summary keeps accepting updates afterwards.
template <typename Scalar>
CovEstimate<Scalar> gram_finalize(const GramSummary<Scalar>& state) {
  detail::require_count(state.t, "gram_finalize");
  return {detail::gram_formula(state.t, state.s, state.G), state.t - 1};
}

/// Gram summaries over disjoint data combine by plain addition.
template <typename Scalar>
GramSummary<Scalar> gram_merge(const GramSummary<Scalar>& a, const GramSummary<Scalar>& b) {
  if (a.t == 0) return b;
  if (b.t == 0) return a;
  detail::require_dim(a.dim(), b.dim(), "gram_merge");
  GramSummary<Scalar> out = a;
  out.t += b.t;
  out.s += b.s;
  out.G += b.G;
  return out;
}

/// Algorithm 1 applied row by row.
template <typename Derived>
GramSummary<typename Derived::Scalar> gram_stream(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Ref<const Matrix<Scalar>> xr(x.derived());
  GramSummary<Scalar> state(xr.cols());
  for (Index i = 0; i < xr.rows(); ++i) gram_update(state, xr.row(i));
  return state;
}

/// One-pass batch form: column sums plus a blocked X^T X, no centred copy.
template <typename Derived>
CovEstimate<typename Derived::Scalar> gram_batch(const Eigen::MatrixBase<Derived>& x,
                                                 Index block = kDefaultBlock) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Ref<const Matrix<Scalar>> xr(x.derived());
  detail::require_count(xr.rows(), "gram_batch");
  const Vector<Scalar> s = detail::column_sums<Scalar>(xr);
  const SymMatrix<Scalar> g = blocked_gram(xr, block);
  return {detail::gram_formula(std::int64_t{xr.rows()}, s, g), xr.rows() - 1};
}

// ---------------------------------------------------------------------------
// Welford / CGL

/// One Welford step. M gets ((n-1)/n) * delta delta^T, which equals
/// delta (x - mean_new)^T exactly in real arithmetic and keeps M symmetric.
template <typename Scalar, typename Derived>
void welford_update(MomentSummary<Scalar>& state, const Eigen::MatrixBase<Derived>& x) {
  detail::require_dim(state.dim(), x.size(), "welford_update");
  detail::require_finite(x);
  const Eigen::Ref<const Vector<Scalar>> xv(x.derived());
  const Vector<Scalar> delta = xv - state.mean;
  ++state.n;
  const Scalar n = Scalar(state.n);
  state.mean += delta / n;
  detail::packed_rank1(state.M.packed().data(), delta.data(), state.dim(), Scalar(state.n - 1) / n);
}

template <typename Scalar>
CovEstimate<Scalar> moment_finalize(const MomentSummary<Scalar>& state) {
  detail::require_count(state.n, "moment_finalize");
  CovEstimate<Scalar> est{state.M, state.n - 1};
  est.sigma /= Scalar(state.n - 1);
  return est;
}

template <typename Derived>
MomentSummary<typename Derived::Scalar> welford_stream(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Ref<const Matrix<Scalar>> xr(x.derived());
  MomentSummary<Scalar> state(xr.cols());
  for (Index i = 0; i < xr.rows(); ++i) welford_update(state, xr.row(i));
  return state;
}

/// Exact combination of summaries over disjoint data. An empty operand is the
/// identity. Counts are multiplied in floating point so large streams cannot
/// overflow the integer product.
template <typename Scalar>
MomentSummary<Scalar> cgl_merge(const MomentSummary<Scalar>& a, const MomentSummary<Scalar>& b) {
  if (b.empty()) return a;
  if (a.empty()) return b;
  detail::require_dim(a.dim(), b.dim(), "cgl_merge");
  const Scalar na = Scalar(a.n);
  const Scalar nb = Scalar(b.n);
  const Scalar nab = na + nb;
  const Vector<Scalar> delta = b.mean - a.mean;

  MomentSummary<Scalar> out;
  out.n = a.n + b.n;
  out.mean = (na * a.mean + nb * b.mean) / nab;
  out.M = a.M;
  out.M += b.M;
  detail::packed_rank1(out.M.packed().data(), delta.data(), out.dim(), na * nb / nab);
  return out;
}

/// Two-pass summary of one block: block mean, centred block, then a blocked
/// rank-k accumulation of the centred rows.
template <typename Derived>
MomentSummary<typename Derived::Scalar> block_summary(const Eigen::MatrixBase<Derived>& x,
                                                      Index block = kDefaultBlock) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Ref<const Matrix<Scalar>> xr(x.derived());
  MomentSummary<Scalar> out(xr.cols());
  if (xr.rows() == 0) return out;
  out.n = xr.rows();
  out.mean = detail::column_sums<Scalar>(xr) / Scalar(out.n);
  const Matrix<Scalar> centred = xr.rowwise() - out.mean.transpose();
  out.M = blocked_gram(centred, block);
  return out;
}

/// Balanced pairwise reduction: merge neighbours (0,1), (2,3), ... and carry
/// an odd tail to the next level. The tree depends only on the count.
template <typename Scalar>
MomentSummary<Scalar> tree_merge(std::vector<MomentSummary<Scalar>> level) {
  if (level.empty()) return {};
  while (level.size() > 1) {
    std::vector<MomentSummary<Scalar>> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(cgl_merge(level[i], level[i + 1]));
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return std::move(level.front());
}

/// Left-to-right chain ((s0 + s1) + s2) + ...
template <typename Scalar>
MomentSummary<Scalar> fold_merge(std::span<const MomentSummary<Scalar>> parts) {
  MomentSummary<Scalar> acc;
  for (const auto& part : parts) acc = cgl_merge(acc, part);
  return acc;
}

template <typename Scalar>
MomentSummary<Scalar> cgl_tree_reduce(std::span<const Matrix<Scalar>> blocks) {
  std::vector<MomentSummary<Scalar>> leaves;
  leaves.reserve(blocks.size());
  for (const auto& b : blocks) {
    if (!leaves.empty()) detail::require_dim(leaves.front().dim(), b.cols(), "cgl_tree_reduce");
    leaves.push_back(block_summary(b));
  }
  return tree_merge(std::move(leaves));
}

/// CGL over consecutive row blocks of X (views, no copies).
template <typename Derived>
MomentSummary<typename Derived::Scalar> cgl_blocked(const Eigen::MatrixBase<Derived>& x,
                                                    Index block = kDefaultBlock) {
  using Scalar = typename Derived::Scalar;
  if (block < 1) throw Error(ErrorCode::bad_spec, "cgl block size must be >= 1");
  const Eigen::Ref<const Matrix<Scalar>> xr(x.derived());
  if (xr.rows() == 0) return MomentSummary<Scalar>(xr.cols());
  std::vector<MomentSummary<Scalar>> leaves;
  leaves.reserve(static_cast<std::size_t>((xr.rows() + block - 1) / block));
  for (Index start = 0; start < xr.rows(); start += block)
    leaves.push_back(block_summary(xr.middleRows(start, std::min(block, xr.rows() - start))));
  return tree_merge(std::move(leaves));
}

// ---------------------------------------------------------------------------
// Reference paths

/// Two-pass oracle: mean, then the centred cross products divided by n - 1.
template <typename Derived>
CovEstimate<typename Derived::Scalar> batch_reference(const Eigen::MatrixBase<Derived>& x,
                                                      Index block = kDefaultBlock) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Ref<const Matrix<Scalar>> xr(x.derived());
  detail::require_count(xr.rows(), "batch_reference");
  const Vector<Scalar> mean = detail::column_sums<Scalar>(xr) / Scalar(xr.rows());
  const Matrix<Scalar> centred = xr.rowwise() - mean.transpose();
  CovEstimate<Scalar> est{blocked_gram(centred, block), xr.rows() - 1};
  est.sigma /= Scalar(xr.rows() - 1);
  return est;
}

/// (n S_xx - S_x^2) / (n (n - 1)), the scalar Gram identity.
template <typename Scalar>
Scalar bariance(std::span<const Scalar> xs) {
  const auto n = static_cast<std::int64_t>(xs.size());
  detail::require_count(n, "bariance");
  Scalar sx(0), sxx(0);
  for (Scalar v : xs) {
    sx += v;
    sxx += v * v;
  }
  const Scalar nn = Scalar(n);
  return (nn * sxx - sx * sx) / (nn * Scalar(n - 1));
}

}  // namespace streamcov
