#pragma once

// Binary checkpoint format shared by summaries and raw data matrices.
//
//   header (16 bytes): "SCOV" | version u16 | kind u16 | n u64
//   p u64
//   summaries: mean[p] f64 | packed triangle (M or G) [p(p+1)/2] f64 | s[p] f64 (Gram only)
//   matrices:  n*p f64, row-major
//
// All integers and floats are little-endian. For Gram records `mean` holds
// s / n and is informational; s and G are authoritative.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <variant>

#include "streamcov/estimators.hpp"

namespace streamcov {

inline constexpr std::uint16_t kFormatVersion = 1;

enum class RecordKind : std::uint16_t { matrix = 0, gram = 1, welford = 2, cgl = 3 };

std::string_view to_string(RecordKind kind);

struct StoredSummary {
  RecordKind kind = RecordKind::welford;
  std::variant<GramSummary<double>, MomentSummary<double>> summary;
};

void write_summary(std::ostream& out, const GramSummary<double>& g);
/// kind must be welford or cgl; it records provenance only.
void write_summary(std::ostream& out, const MomentSummary<double>& m, RecordKind kind);
StoredSummary read_summary(std::istream& in);

void write_matrix(std::ostream& out, const Matrix<double>& x);
Matrix<double> read_matrix(std::istream& in);

void save_summary(const std::filesystem::path& path, const StoredSummary& s);
StoredSummary load_summary(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const Matrix<double>& x);
Matrix<double> load_matrix(const std::filesystem::path& path);

/// Combines two stored summaries: Gram by addition, moment summaries by
/// cgl_merge. Mixing a Gram record with a moment record is a format error.
StoredSummary merge_stored(const StoredSummary& a, const StoredSummary& b);

/// The unbiased covariance implied by a stored summary.
CovEstimate<double> finalize_stored(const StoredSummary& s);

}  // namespace streamcov
