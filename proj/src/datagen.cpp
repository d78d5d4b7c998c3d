#include "streamcov/datagen.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace streamcov {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void require_shape(Index n, Index p) {
  if (n < 2) throw Error(ErrorCode::bad_spec, "need n >= 2, got " + std::to_string(n));
  if (p < 1) throw Error(ErrorCode::bad_spec, "need p >= 1, got " + std::to_string(p));
}

DenseMatrix<double> standard_normal(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix<double> z(rows, cols);
  // Row by row so that the same seed fills rows in observation order.
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) z(i, k) = normal(rng);
  return z;
}

// First `cols` columns of the orthonormal factor of a Gaussian rows x cols matrix.
DenseMatrix<double> random_orthonormal(Index rows, Index cols, Rng& rng) {
  const DenseMatrix<double> g = standard_normal(rows, cols, rng);
  Eigen::HouseholderQR<DenseMatrix<double>> qr(g);
  return qr.householderQ() * DenseMatrix<double>::Identity(rows, cols);
}

Matrix<double> with_spectrum(Index n, Index p, double smallest, Rng& rng) {
  const Index r = std::min(n, p);
  Vector<double> sigma(r);
  for (Index i = 0; i < r; ++i)
    sigma[i] = r == 1 ? 1.0 : std::pow(smallest, static_cast<double>(i) / static_cast<double>(r - 1));
  const DenseMatrix<double> u = random_orthonormal(n, r, rng);
  const DenseMatrix<double> v = random_orthonormal(p, r, rng);
  return u * sigma.asDiagonal() * v.transpose();
}

Matrix<double> generate_impl(const GaussianSpec& g, std::uint64_t seed) {
  require_shape(g.n, g.p);
  if (g.mean.size() != 0 && g.mean.size() != g.p) throw Error(ErrorCode::bad_spec, "mean has wrong length");
  if (g.cov.dim() != 0 && g.cov.dim() != g.p) throw Error(ErrorCode::bad_spec, "covariance has wrong dimension");
  Rng rng(seed);
  Matrix<double> x = standard_normal(g.n, g.p, rng);
  if (g.cov.dim() != 0) {
    DenseMatrix<double> l;
    try {
      l = cholesky_lower(g.cov);
    } catch (const Error& e) {
      throw Error(ErrorCode::bad_spec, e.what());
    }
    x = x * l.transpose();
  }
  if (g.mean.size() != 0) x.rowwise() += g.mean.transpose();
  return x;
}

Matrix<double> generate_impl(const StudentTSpec& t, std::uint64_t seed) {
  require_shape(t.n, t.p);
  if (!(t.dof > 2.0)) throw Error(ErrorCode::bad_spec, "Student-t needs dof > 2 for finite covariance");
  Rng rng(seed);
  std::student_t_distribution<double> dist(t.dof);
  const double scale = std::sqrt((t.dof - 2.0) / t.dof);
  Matrix<double> x(t.n, t.p);
  for (Index i = 0; i < t.n; ++i)
    for (Index k = 0; k < t.p; ++k) x(i, k) = scale * dist(rng);
  return x;
}

Matrix<double> generate_impl(const ConditionedSpec& c, std::uint64_t seed) {
  require_shape(c.n, c.p);
  if (!(c.kappa >= 1.0) || !std::isfinite(c.kappa)) throw Error(ErrorCode::bad_spec, "kappa must be >= 1");
  Rng rng(seed);
  return with_spectrum(c.n, c.p, 1.0 / c.kappa, rng);
}

Matrix<double> generate_impl(const NearSingularSpec& s, std::uint64_t seed) {
  require_shape(s.n, s.p);
  if (!(s.sigma_min > 0.0 && s.sigma_min <= 1.0))
    throw Error(ErrorCode::bad_spec, "sigma_min must lie in (0, 1]");
  Rng rng(seed);
  return with_spectrum(s.n, s.p, s.sigma_min, rng);
}

Matrix<double> generate_impl(const ShiftedSpec& s, std::uint64_t seed) {
  if (!s.base) throw Error(ErrorCode::bad_spec, "shifted spec without a base");
  if (!std::isfinite(s.c)) throw Error(ErrorCode::bad_spec, "shift must be finite");
  Matrix<double> x = generate(DataSpec{s.base->variant, seed});
  if (s.c != 0.0) {
    const double per_coord = s.c / std::sqrt(static_cast<double>(x.cols()));
    x.array() += per_coord;
  }
  return x;
}

}  // namespace

std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

DataSpec gaussian_spec(Index n, Index p, std::uint64_t seed) {
  return DataSpec{GaussianSpec{n, p, {}, {}}, seed};
}

DataSpec gaussian_spec(Index n, const SymMatrix<double>& cov, std::uint64_t seed) {
  return DataSpec{GaussianSpec{n, cov.dim(), {}, cov}, seed};
}

DataSpec shifted_spec(DataSpec base, double c) {
  const std::uint64_t seed = base.seed;
  return DataSpec{ShiftedSpec{std::make_shared<const DataSpec>(std::move(base)), c}, seed};
}

Matrix<double> generate(const DataSpec& spec) {
  return std::visit([&](const auto& v) { return generate_impl(v, spec.seed); }, spec.variant);
}

SymMatrix<double> toeplitz_cov(const ToeplitzSpec& spec) {
  if (!(std::abs(spec.rho) < 1.0)) throw Error(ErrorCode::bad_spec, "Toeplitz needs |rho| < 1");
  SymMatrix<double> s(spec.p);
  for (Index k = 0; k < spec.p; ++k)
    for (Index l = k; l < spec.p; ++l) s(k, l) = std::pow(spec.rho, static_cast<double>(l - k));
  return s;
}

DenseMatrix<double> cholesky_lower(const SymMatrix<double>& s) {
  Eigen::LLT<DenseMatrix<double>> llt(s.to_dense());
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::not_positive_definite, "Cholesky pivot is not positive");
  return llt.matrixL();
}

}  // namespace streamcov
