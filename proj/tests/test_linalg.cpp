#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "streamcov/linalg.hpp"

using namespace streamcov;

namespace {

SymMatrix<double> sym2(double a, double b, double d) {
  SymMatrix<double> s(2);
  s(0, 0) = a;
  s(0, 1) = b;
  s(1, 1) = d;
  return s;
}

Matrix<double> rows2(std::initializer_list<std::initializer_list<double>> r) {
  Matrix<double> x(static_cast<Index>(r.size()), 2);
  Index i = 0;
  for (auto row : r) {
    Index k = 0;
    for (double v : row) x(i, k++) = v;
    ++i;
  }
  return x;
}

}  // namespace

TEST_CASE("packed storage layout") {
  SymMatrix<double> s(4);
  CHECK(s.size() == 10);
  CHECK(SymMatrix<double>::packed_size(4) == 10);
  CHECK(s.row_offset(0) == 0);
  CHECK(s.row_offset(1) == 4);
  CHECK(s.row_offset(3) == 9);
  s(2, 1) = 7.0;
  CHECK(s(1, 2) == 7.0);
  CHECK(s.packed()[s.row_offset(1) + 1] == 7.0);
  CHECK_THROWS_AS(SymMatrix<double>(0), Error);
}

TEST_CASE("dense round trip and identity") {
  DenseMatrix<double> a(3, 3);
  a << 1, 2, 3, 2, 5, 6, 3, 6, 9;
  const auto s = SymMatrix<double>::from_dense(a);
  CHECK(s.to_dense() == a);
  CHECK(s.trace() == 15.0);
  CHECK(SymMatrix<double>::identity(3).to_dense() == DenseMatrix<double>::Identity(3, 3));
}

TEST_CASE("sym_rank1_update examples") {
  SymMatrix<double> s(2);
  sym_rank1_update(s, Vector<double>{{1.0, 2.0}}, 1.0);
  CHECK(s == sym2(1, 2, 4));

  auto id = SymMatrix<double>::identity(2);
  sym_rank1_update(id, Vector<double>::Zero(2), 5.0);
  CHECK(id == SymMatrix<double>::identity(2));

  SymMatrix<double> t(2);
  sym_rank1_update(t, Vector<double>{{3.0, -1.0}}, 2.0);
  CHECK(t == sym2(18, -6, 2));

  CHECK_THROWS_AS(sym_rank1_update(t, Vector<double>::Zero(3), 1.0), Error);
}

TEST_CASE("blocked_gram examples") {
  CHECK(blocked_gram(rows2({{1, 0}, {0, 1}})) == SymMatrix<double>::identity(2));
  CHECK(blocked_gram(rows2({{1, 2}, {3, 4}})) == sym2(10, 14, 20));
  CHECK_THROWS_AS(blocked_gram(rows2({{1, 2}}), 0), Error);
}

TEST_CASE("accessor symmetry is exact") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Index p = 1 + static_cast<Index>(rng() % 12);
    SymMatrix<double> s(p);
    const auto x = oracle::random_matrix(1, p, rng);
    sym_rank1_update(s, x.row(0), 0.37 * (trial + 1));
    for (Index k = 0; k < p; ++k)
      for (Index l = 0; l < p; ++l) REQUIRE(s(k, l) == s(l, k));
  }
}

TEST_CASE("blocked_gram matches brute-force dot products for any block size") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 500);
    const Index p = 1 + static_cast<Index>(rng() % 20);
    const Index block = 1 + static_cast<Index>(rng() % 100);
    const auto x = oracle::random_matrix(n, p, rng, trial % 3 == 0 ? 5.0 : 0.0);
    const auto ref = oracle::gram(x);
    CAPTURE(n);
    CAPTURE(p);
    CAPTURE(block);
    CHECK(oracle::rel_max(blocked_gram(x, block), ref) < 1e-13);
    CHECK(rel_max_diff(blocked_gram(x, 1), blocked_gram(x, 64)) < 1e-13);
  }
}

TEST_CASE("row-by-row rank-1 updates equal one blocked_gram") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 300);
    const Index p = 1 + static_cast<Index>(rng() % 15);
    const auto x = oracle::random_matrix(n, p, rng);
    SymMatrix<double> s(p);
    for (Index i = 0; i < n; ++i) sym_rank1_update(s, x.row(i), 1.0);
    CHECK(rel_max_diff(s, blocked_gram(x, n)) < 1e-13);
  }
}

TEST_CASE("norm helpers") {
  const auto id = SymMatrix<double>::identity(2);
  CHECK(max_abs_diff(id, id) == 0.0);
  CHECK(max_abs_diff(id, sym2(1, 0, 3)) == 2.0);
  CHECK(max_abs_diff(sym2(2, 2, 2), SymMatrix<double>(2)) == 2.0);

  CHECK(rel_frobenius_diff(id, id) == 0.0);
  CHECK(rel_frobenius_diff(id * 2.0, id) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(rel_frobenius_diff(id, SymMatrix<double>(2)), Error);
  CHECK_THROWS_AS(rel_max_diff(id, SymMatrix<double>(2)), Error);

  // off-diagonal entries count twice
  CHECK(frobenius_norm(sym2(0, 1, 0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(max_abs_diff(id, SymMatrix<double>(3)), Error);
}

TEST_CASE("works for float") {
  SymMatrix<float> s(2);
  sym_rank1_update(s, Vector<float>{{1.0f, 2.0f}}, 1.0f);
  CHECK(s(0, 1) == 2.0f);
}
