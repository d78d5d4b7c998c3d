#include <doctest.h>

#include <bit>
#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "streamcov/serialize.hpp"

using namespace streamcov;

namespace {

std::uint64_t le64(const std::string& bytes, std::size_t at) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  return v;
}

}  // namespace

TEST_CASE("moment summary byte layout") {
  MomentSummary<double> m(2);
  welford_update(m, Vector<double>{{1.0, 2.0}});
  welford_update(m, Vector<double>{{3.0, 4.0}});
  std::ostringstream out;
  write_summary(out, m, RecordKind::welford);
  const std::string b = out.str();

  REQUIRE(b.size() == 16 + 8 + 8 * (2 + 3));
  CHECK(b.substr(0, 4) == "SCOV");
  CHECK(b[4] == 1);
  CHECK(b[5] == 0);
  CHECK(b[6] == 2);  // welford
  CHECK(b[7] == 0);
  CHECK(le64(b, 8) == 2);   // n
  CHECK(le64(b, 16) == 2);  // p
  CHECK(std::bit_cast<double>(le64(b, 24)) == 2.0);
  CHECK(std::bit_cast<double>(le64(b, 32)) == 3.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::bit_cast<double>(le64(b, 40 + 8 * i)) == 2.0);
}

TEST_CASE("summaries round-trip bit-exactly") {
  std::mt19937_64 rng(1);
  const auto x = oracle::random_matrix(57, 5, rng, 2.5);

  std::stringstream io;
  write_summary(io, gram_stream(x));
  write_summary(io, cgl_blocked(x, 8), RecordKind::cgl);
  write_summary(io, welford_stream(x), RecordKind::welford);

  const auto g = read_summary(io);
  CHECK(g.kind == RecordKind::gram);
  const auto& gs = std::get<GramSummary<double>>(g.summary);
  CHECK(gs.t == 57);
  CHECK(gs.s == gram_stream(x).s);
  CHECK(gs.G == gram_stream(x).G);

  const auto c = read_summary(io);
  CHECK(c.kind == RecordKind::cgl);
  CHECK(std::get<MomentSummary<double>>(c.summary).M == cgl_blocked(x, 8).M);

  const auto w = read_summary(io);
  const auto& ws = std::get<MomentSummary<double>>(w.summary);
  CHECK(ws.n == 57);
  CHECK(ws.mean == welford_stream(x).mean);
  CHECK(ws.M == welford_stream(x).M);
}

TEST_CASE("matrix round trip through a file") {
  std::mt19937_64 rng(2);
  const auto x = oracle::random_matrix(13, 4, rng);
  const auto path = std::filesystem::temp_directory_path() / "streamcov_test_matrix.scov";
  save_matrix(path, x);
  CHECK(load_matrix(path) == x);
  CHECK_THROWS_AS(load_summary(path), Error);
  std::filesystem::remove(path);
}

TEST_CASE("malformed input is rejected") {
  std::istringstream bad_magic("SCOX\x01\x00\x01\x00");
  CHECK_THROWS_AS(read_summary(bad_magic), Error);

  MomentSummary<double> m(3);
  welford_update(m, Vector<double>::Ones(3));
  std::ostringstream out;
  write_summary(out, m, RecordKind::welford);
  std::string b = out.str();

  std::istringstream truncated(b.substr(0, b.size() - 3));
  CHECK_THROWS_AS(read_summary(truncated), Error);

  std::string wrong_version = b;
  wrong_version[4] = 9;
  std::istringstream v(wrong_version);
  CHECK_THROWS_AS(read_summary(v), Error);

  CHECK_THROWS_AS(load_summary("/nonexistent/streamcov.scov"), Error);
}

TEST_CASE("merge_stored on disjoint shards equals the full-data estimate") {
  std::mt19937_64 rng(3);
  const auto x = oracle::random_matrix(400, 6, rng, 1.0);
  const auto full = batch_reference(x).sigma;

  const StoredSummary a{RecordKind::welford, welford_stream(x.topRows(150))};
  const StoredSummary b{RecordKind::cgl, cgl_blocked(x.bottomRows(250), 64)};
  CHECK(max_abs_diff(finalize_stored(merge_stored(a, b)).sigma, full) < 1e-12);

  const StoredSummary ga{RecordKind::gram, gram_stream(x.topRows(150))};
  const StoredSummary gb{RecordKind::gram, gram_stream(x.bottomRows(250))};
  const auto merged = merge_stored(ga, gb);
  CHECK(merged.kind == RecordKind::gram);
  CHECK(max_abs_diff(finalize_stored(merged).sigma, full) < 1e-12);

  CHECK_THROWS_AS(merge_stored(a, gb), Error);
}
