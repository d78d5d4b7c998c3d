#include "streamcov/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace streamcov {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'C', 'O', 'V'};

template <typename UInt>
void put_le(std::ostream& out, UInt v) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename UInt>
UInt get_le(std::istream& in) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw Error(ErrorCode::bad_format, "truncated record");
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(bytes[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

void put_header(std::ostream& out, RecordKind kind, std::uint64_t n, std::uint64_t p) {
  out.write(kMagic.data(), kMagic.size());
  put_le(out, kFormatVersion);
  put_le(out, static_cast<std::uint16_t>(kind));
  put_le(out, n);
  put_le(out, p);
}

struct Header {
  RecordKind kind;
  std::uint64_t n;
  std::uint64_t p;
};

Header get_header(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error(ErrorCode::bad_format, "missing SCOV magic");
  const auto version = get_le<std::uint16_t>(in);
  if (version != kFormatVersion)
    throw Error(ErrorCode::bad_format, "unsupported version " + std::to_string(version));
  const auto kind = get_le<std::uint16_t>(in);
  if (kind > static_cast<std::uint16_t>(RecordKind::cgl))
    throw Error(ErrorCode::bad_format, "unknown record kind " + std::to_string(kind));
  const auto n = get_le<std::uint64_t>(in);
  const auto p = get_le<std::uint64_t>(in);
  if (p < 1 || p > (1u << 20)) throw Error(ErrorCode::bad_format, "implausible dimension");
  return {static_cast<RecordKind>(kind), n, p};
}

void put_packed(std::ostream& out, const SymMatrix<double>& s) {
  for (double v : s.packed()) put_f64(out, v);
}

void get_packed(std::istream& in, SymMatrix<double>& s) {
  for (double& v : s.packed()) v = get_f64(in);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::bad_format, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::bad_format, "cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::matrix: return "matrix";
    case RecordKind::gram: return "gram";
    case RecordKind::welford: return "welford";
    case RecordKind::cgl: return "cgl";
  }
  return "unknown";
}

void write_summary(std::ostream& out, const GramSummary<double>& g) {
  const auto p = static_cast<std::uint64_t>(g.dim());
  put_header(out, RecordKind::gram, static_cast<std::uint64_t>(g.t), p);
  for (Index k = 0; k < g.dim(); ++k) put_f64(out, g.t > 0 ? g.s[k] / static_cast<double>(g.t) : 0.0);
  put_packed(out, g.G);
  for (Index k = 0; k < g.dim(); ++k) put_f64(out, g.s[k]);
}

void write_summary(std::ostream& out, const MomentSummary<double>& m, RecordKind kind) {
  if (kind != RecordKind::welford && kind != RecordKind::cgl)
    throw Error(ErrorCode::bad_format, "moment summaries are tagged welford or cgl");
  if (m.dim() < 1) throw Error(ErrorCode::dim, "cannot serialise a dimensionless summary");
  put_header(out, kind, static_cast<std::uint64_t>(m.n), static_cast<std::uint64_t>(m.dim()));
  for (Index k = 0; k < m.dim(); ++k) put_f64(out, m.mean[k]);
  put_packed(out, m.M);
}

StoredSummary read_summary(std::istream& in) {
  const Header h = get_header(in);
  const auto p = static_cast<Index>(h.p);
  if (h.kind == RecordKind::matrix) throw Error(ErrorCode::bad_format, "record holds a matrix, not a summary");
  Vector<double> mean(p);
  for (Index k = 0; k < p; ++k) mean[k] = get_f64(in);
  if (h.kind == RecordKind::gram) {
    GramSummary<double> g(p);
    g.t = static_cast<std::int64_t>(h.n);
    get_packed(in, g.G);
    for (Index k = 0; k < p; ++k) g.s[k] = get_f64(in);
    return {h.kind, std::move(g)};
  }
  MomentSummary<double> m(p);
  m.n = static_cast<std::int64_t>(h.n);
  m.mean = std::move(mean);
  get_packed(in, m.M);
  return {h.kind, std::move(m)};
}

void write_matrix(std::ostream& out, const Matrix<double>& x) {
  put_header(out, RecordKind::matrix, static_cast<std::uint64_t>(x.rows()),
             static_cast<std::uint64_t>(x.cols()));
  for (Index i = 0; i < x.rows(); ++i)
    for (Index k = 0; k < x.cols(); ++k) put_f64(out, x(i, k));
}

Matrix<double> read_matrix(std::istream& in) {
  const Header h = get_header(in);
  if (h.kind != RecordKind::matrix) throw Error(ErrorCode::bad_format, "record holds a summary, not a matrix");
  Matrix<double> x(static_cast<Index>(h.n), static_cast<Index>(h.p));
  for (Index i = 0; i < x.rows(); ++i)
    for (Index k = 0; k < x.cols(); ++k) x(i, k) = get_f64(in);
  return x;
}

void save_summary(const std::filesystem::path& path, const StoredSummary& s) {
  auto out = open_out(path);
  if (const auto* g = std::get_if<GramSummary<double>>(&s.summary))
    write_summary(out, *g);
  else
    write_summary(out, std::get<MomentSummary<double>>(s.summary), s.kind);
  if (!out) throw Error(ErrorCode::bad_format, "write failed for " + path.string());
}

StoredSummary load_summary(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_summary(in);
}

void save_matrix(const std::filesystem::path& path, const Matrix<double>& x) {
  auto out = open_out(path);
  write_matrix(out, x);
  if (!out) throw Error(ErrorCode::bad_format, "write failed for " + path.string());
}

Matrix<double> load_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

StoredSummary merge_stored(const StoredSummary& a, const StoredSummary& b) {
  const auto* ga = std::get_if<GramSummary<double>>(&a.summary);
  const auto* gb = std::get_if<GramSummary<double>>(&b.summary);
  if ((ga == nullptr) != (gb == nullptr))
    throw Error(ErrorCode::bad_format, "cannot merge a Gram summary with a moment summary");
  if (ga != nullptr) return {RecordKind::gram, gram_merge(*ga, *gb)};
  return {RecordKind::cgl,
          cgl_merge(std::get<MomentSummary<double>>(a.summary), std::get<MomentSummary<double>>(b.summary))};
}

CovEstimate<double> finalize_stored(const StoredSummary& s) {
  if (const auto* g = std::get_if<GramSummary<double>>(&s.summary)) return gram_finalize(*g);
  return moment_finalize(std::get<MomentSummary<double>>(s.summary));
}

}  // namespace streamcov
