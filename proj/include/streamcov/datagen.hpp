#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <variant>

#include "streamcov/linalg.hpp"

namespace streamcov {

using Rng = std::mt19937_64;

/// Independent substream seed for (seed, index); used to give every
/// trajectory, grid cell or bootstrap its own generator.
std::uint64_t substream(std::uint64_t seed, std::uint64_t index);

struct GaussianSpec {
  Index n = 0;
  Index p = 0;
  Vector<double> mean;    // empty means zero
  SymMatrix<double> cov;  // dimension 0 means identity
};

/// Standard t per coordinate, rescaled to unit variance.
struct StudentTSpec {
  Index n = 0;
  Index p = 0;
  double dof = 3.0;
};

/// X = U diag(sigma) V^T with geometric singular values from 1 down to 1/kappa.
struct ConditionedSpec {
  Index n = 0;
  Index p = 0;
  double kappa = 1.0;
};

/// Same construction, singular values from 1 down to sigma_min.
struct NearSingularSpec {
  Index n = 0;
  Index p = 0;
  double sigma_min = 1.0;
};

struct DataSpec;

/// Base data plus c * 1_p / sqrt(p) on every row, so the shift has 2-norm c.
/// The base is generated with the enclosing spec's seed.
struct ShiftedSpec {
  std::shared_ptr<const DataSpec> base;
  double c = 0.0;
};

struct DataSpec {
  std::variant<GaussianSpec, StudentTSpec, ConditionedSpec, NearSingularSpec, ShiftedSpec> variant;
  std::uint64_t seed = 42;
};

DataSpec gaussian_spec(Index n, Index p, std::uint64_t seed);
DataSpec gaussian_spec(Index n, const SymMatrix<double>& cov, std::uint64_t seed);
DataSpec shifted_spec(DataSpec base, double c);

Matrix<double> generate(const DataSpec& spec);

struct ToeplitzSpec {
  Index p = 0;
  double rho = 0.5;
};

/// Sigma_ij = rho^|i-j|.
SymMatrix<double> toeplitz_cov(const ToeplitzSpec& spec);

/// Lower-triangular L with L L^T = S.
DenseMatrix<double> cholesky_lower(const SymMatrix<double>& s);

}  // namespace streamcov
