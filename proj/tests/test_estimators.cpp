#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "streamcov/estimators.hpp"

using namespace streamcov;

namespace {

SymMatrix<double> sym2(double a, double b, double d) {
  SymMatrix<double> s(2);
  s(0, 0) = a;
  s(0, 1) = b;
  s(1, 1) = d;
  return s;
}

Matrix<double> two_rows() {
  Matrix<double> x(2, 2);
  x << 1, 2, 3, 4;
  return x;
}

Vector<double> vec(std::initializer_list<double> v) {
  Vector<double> out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) out[i++] = e;
  return out;
}

// Random cut points splitting n rows into contiguous blocks.
std::vector<Matrix<double>> random_partition(const Matrix<double>& x, std::mt19937_64& rng) {
  std::vector<Matrix<double>> blocks;
  Index start = 0;
  while (start < x.rows()) {
    const Index len = std::min<Index>(x.rows() - start, 1 + static_cast<Index>(rng() % 97));
    blocks.emplace_back(x.middleRows(start, len));
    start += len;
  }
  return blocks;
}

}  // namespace

TEST_CASE("gram_update examples") {
  GramSummary<double> g(2);
  gram_update(g, vec({1, 2}));
  CHECK(g.t == 1);
  CHECK(g.s == vec({1, 2}));
  CHECK(g.G == sym2(1, 2, 4));
  gram_update(g, vec({3, 4}));
  CHECK(g.t == 2);
  CHECK(g.s == vec({4, 6}));
  CHECK(g.G == sym2(10, 14, 20));
  const auto before = g;
  gram_update(g, vec({0, 0}));
  CHECK(g.t == 3);
  CHECK(g.s == before.s);
  CHECK(g.G == before.G);

  CHECK_THROWS_AS(gram_update(g, vec({1, 2, 3})), Error);
  CHECK_THROWS_AS(gram_update(g, vec({1, std::nan("")})), Error);
}

TEST_CASE("gram_finalize examples") {
  GramSummary<double> g(2);
  g.t = 2;
  g.s = vec({4, 6});
  g.G = sym2(10, 14, 20);
  const auto est = gram_finalize(g);
  CHECK(est.sigma == sym2(2, 2, 2));
  CHECK(est.dof == 1);

  GramSummary<double> same(2);
  gram_update(same, vec({1.5, -2}));
  gram_update(same, vec({1.5, -2}));
  CHECK(gram_finalize(same).sigma == SymMatrix<double>(2));

  GramSummary<double> one(2);
  gram_update(one, vec({1, 1}));
  CHECK_THROWS_AS(gram_finalize(one), Error);
}

TEST_CASE("welford_update examples") {
  MomentSummary<double> m(2);
  welford_update(m, vec({1, 2}));
  CHECK(m.n == 1);
  CHECK(m.mean == vec({1, 2}));
  CHECK(m.M == SymMatrix<double>(2));
  welford_update(m, vec({3, 4}));
  CHECK(m.n == 2);
  CHECK(m.mean == vec({2, 3}));
  CHECK(m.M == sym2(2, 2, 2));

  MomentSummary<double> c(2);
  for (int i = 0; i < 3; ++i) welford_update(c, vec({5, 5}));
  CHECK(c.M == SymMatrix<double>(2));
  CHECK(c.mean == vec({5, 5}));
}

TEST_CASE("moment_finalize examples") {
  MomentSummary<double> m(2);
  m.n = 2;
  m.M = sym2(2, 2, 2);
  CHECK(moment_finalize(m).sigma == sym2(2, 2, 2));
  m.n = 3;
  m.M = SymMatrix<double>(2);
  CHECK(moment_finalize(m).sigma == SymMatrix<double>(2));
  m.n = 1;
  CHECK_THROWS_AS(moment_finalize(m), Error);
}

TEST_CASE("cgl_merge examples") {
  MomentSummary<double> a(1), b(1);
  a.n = 1;
  b.n = 1;
  b.mean[0] = 2.0;
  const auto ab = cgl_merge(a, b);
  CHECK(ab.n == 2);
  CHECK(ab.mean[0] == 1.0);
  CHECK(ab.M(0, 0) == 2.0);

  const auto same = cgl_merge(a, MomentSummary<double>{});
  CHECK(same.n == a.n);
  CHECK(same.M == a.M);
  CHECK(cgl_merge(MomentSummary<double>{}, a).mean == a.mean);

  MomentSummary<double> c(2);
  c.n = 2;
  c.M = SymMatrix<double>::identity(2);
  const auto cc = cgl_merge(c, c);
  CHECK(cc.n == 4);
  CHECK(cc.mean == vec({0, 0}));
  CHECK(cc.M == SymMatrix<double>::identity(2) * 2.0);

  CHECK_THROWS_AS(cgl_merge(a, c), Error);
}

TEST_CASE("block_summary examples") {
  const auto s = block_summary(two_rows());
  CHECK(s.n == 2);
  CHECK(s.mean == vec({2, 3}));
  CHECK(s.M == sym2(2, 2, 2));

  Matrix<double> one(1, 3);
  one << 1, 2, 3;
  CHECK(block_summary(one).M == SymMatrix<double>(3));
  CHECK(block_summary(Matrix<double>(0, 3)).empty());
}

TEST_CASE("cgl_tree_reduce examples") {
  std::vector<Matrix<double>> single{two_rows()};
  CHECK(cgl_tree_reduce<double>(single).M == block_summary(two_rows()).M);

  std::vector<Matrix<double>> blocks;
  for (double v : {0.0, 2.0, 4.0, 6.0}) blocks.push_back(Matrix<double>::Constant(1, 1, v));
  const auto s = cgl_tree_reduce<double>(blocks);
  CHECK(s.n == 4);
  CHECK(s.mean[0] == 3.0);
  CHECK(s.M(0, 0) == 20.0);
  CHECK(moment_finalize(s).sigma(0, 0) == doctest::Approx(20.0 / 3.0).epsilon(1e-15));
  CHECK(static_cast<double>(oracle::variance({0, 2, 4, 6})) == doctest::Approx(20.0 / 3.0));
}

TEST_CASE("batch_reference and gram_batch examples") {
  CHECK(batch_reference(two_rows()).sigma == sym2(2, 2, 2));
  CHECK(gram_batch(two_rows()).sigma == sym2(2, 2, 2));

  Matrix<double> constant = Matrix<double>::Constant(5, 3, 4.25);
  CHECK(batch_reference(constant).sigma == SymMatrix<double>(3));

  Matrix<double> id(2, 2);
  id << 1, 0, 0, 1;
  CHECK(gram_batch(id).sigma == sym2(0.5, -0.5, 0.5));
  CHECK(oracle::rel_max(batch_reference(id).sigma, oracle::covariance(id)) < 1e-15);

  CHECK_THROWS_AS(batch_reference(Matrix<double>(1, 2)), Error);
  CHECK_THROWS_AS(gram_batch(Matrix<double>(1, 2)), Error);
}

TEST_CASE("bariance examples") {
  const std::vector<double> a{1, 2, 3}, b{7, 7, 7, 7}, c{0, 2};
  CHECK(bariance<double>(a) == 1.0);
  CHECK(bariance<double>(b) == 0.0);
  CHECK(bariance<double>(c) == 2.0);
  const std::vector<double> one{1};
  CHECK_THROWS_AS(bariance<double>(one), Error);
}

TEST_CASE("all estimation paths agree with the two-pass oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 1999);
    const Index p = 1 + static_cast<Index>(rng() % 20);
    const auto x = oracle::random_matrix(n, p, rng);
    const auto ref = oracle::covariance(x);
    const auto parts = random_partition(x, rng);
    CAPTURE(n);
    CAPTURE(p);
    const SymMatrix<double> paths[] = {
        gram_finalize(gram_stream(x)).sigma,
        moment_finalize(welford_stream(x)).sigma,
        moment_finalize(cgl_tree_reduce<double>(parts)).sigma,
        moment_finalize(cgl_blocked(x, 1 + static_cast<Index>(rng() % 80))).sigma,
        batch_reference(x).sigma,
        gram_batch(x).sigma,
    };
    for (const auto& s : paths) CHECK(oracle::rel_max(s, ref) < 1e-12);
    for (const auto& a : paths)
      for (const auto& b : paths) CHECK(rel_max_diff(a, b) < 1e-12);
  }
}

TEST_CASE("streaming single-row blocks through cgl_merge is Welford") {
  std::mt19937_64 rng(5);
  const auto x = oracle::random_matrix(1000, 6, rng, 3.0);
  MomentSummary<double> acc;
  for (Index i = 0; i < x.rows(); ++i) acc = cgl_merge(acc, block_summary(x.middleRows(i, 1)));
  const auto w = welford_stream(x);
  CHECK(acc.n == w.n);
  CHECK(rel_max_diff(acc.M, w.M) < 1e-13);
}

TEST_CASE("cgl_merge is commutative and associative up to rounding") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = block_summary(oracle::random_matrix(1 + rng() % 50, 4, rng, 1.0));
    const auto b = block_summary(oracle::random_matrix(1 + rng() % 50, 4, rng, -2.0));
    const auto c = block_summary(oracle::random_matrix(1 + rng() % 50, 4, rng));
    CHECK(rel_max_diff(cgl_merge(a, b).M, cgl_merge(b, a).M) < 1e-13);
    CHECK(rel_max_diff(cgl_merge(cgl_merge(a, b), c).M, cgl_merge(a, cgl_merge(b, c)).M) < 1e-13);
  }

  const auto x = oracle::random_matrix(256 * 8, 6, rng);
  std::vector<MomentSummary<double>> leaves;
  for (Index i = 0; i < 256; ++i) leaves.push_back(block_summary(x.middleRows(8 * i, 8)));
  const auto chain = fold_merge<double>(leaves);
  const auto tree = tree_merge(leaves);
  CHECK(chain.n == tree.n);
  CHECK(rel_max_diff(chain.M, tree.M) < 1e-10);
  CHECK(rel_max_diff(tree.M, block_summary(x).M) < 1e-12);
}

TEST_CASE("tree_merge handles odd counts and empty input") {
  std::mt19937_64 rng(8);
  const auto x = oracle::random_matrix(7, 3, rng);
  std::vector<MomentSummary<double>> leaves;
  for (Index i = 0; i < 7; ++i) leaves.push_back(block_summary(x.middleRows(i, 1)));
  const auto t = tree_merge(leaves);
  CHECK(t.n == 7);
  CHECK(oracle::rel_max(moment_finalize(t).sigma, oracle::covariance(x)) < 1e-13);
  CHECK(tree_merge(std::vector<MomentSummary<double>>{}).empty());
}

TEST_CASE("gram_merge of disjoint shards equals the full summary") {
  std::mt19937_64 rng(9);
  const auto x = oracle::random_matrix(300, 5, rng);
  const auto merged = gram_merge(gram_stream(x.topRows(120)), gram_stream(x.bottomRows(180)));
  CHECK(merged.t == 300);
  CHECK(rel_max_diff(gram_finalize(merged).sigma, gram_finalize(gram_stream(x)).sigma) < 1e-13);
}

TEST_CASE("bariance equals two-pass variance on random sequences") {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> len(2, 50);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> xs(static_cast<std::size_t>(len(rng)));
    for (auto& v : xs) v = z(rng);
    const auto ref = static_cast<double>(oracle::variance(xs));
    REQUIRE(std::fabs(bariance<double>(xs) - ref) <= 1e-12 * ref);
  }
}

TEST_CASE("p = 1 streaming Gram is bitwise bariance") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = oracle::random_matrix(2 + static_cast<Index>(rng() % 100), 1, rng, trial % 2 ? 10.0 : 0.0);
    const std::vector<double> xs(x.data(), x.data() + x.rows());
    REQUIRE(gram_finalize(gram_stream(x)).sigma(0, 0) == bariance<double>(xs));
  }
}

TEST_CASE("Gram cancellation under a large shift, Welford unaffected") {
  std::mt19937_64 rng(14);
  auto x = oracle::random_matrix(2000, 3, rng);
  const auto ref = oracle::covariance(x);
  x.array() += 1e8;
  CHECK(oracle::rel_max(moment_finalize(welford_stream(x)).sigma, ref) < 1e-6);
  CHECK(oracle::rel_max(gram_finalize(gram_stream(x)).sigma, ref) > 1e-3);
}
