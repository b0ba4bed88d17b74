#pragma once

#include <array>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "irspec/rational.hpp"
#include "irspec/rational_matrix.hpp"

namespace irs {

// f(x) = tr(A P(x)) = sum_j A[x(j)][j]. A is m x m.

struct MomentVector {
  Rational M1, M2, M3, M4, Mr, Mc, Mq;
};

MomentVector moments(const RationalMatrix& A);
bool has_equal_margins(const RationalMatrix& A);

// (E f, E f^2). E f^2 = (M2 + (m-2) M1^2 / m^2) / (m-1).
// Throws InputError when the row and column sums are not all equal.
std::pair<Rational, Rational> mean_and_norm2(const RationalMatrix& A);

// E_x f(x)^k by enumerating S_m. m <= 8.
Rational exhaustive_moment(const RationalMatrix& A, int k);

// A = alpha J / m + D, D integer entries in [-9, 9] with row and column
// means subtracted (double centering), so every margin equals alpha.
RationalMatrix random_equal_margin(int m, std::mt19937_64& rng, const Rational& alpha);

// T_t acts on A as A' = sigma A + (1 - sigma) M1/m^2 J.
RationalMatrix apply_Tt(const RationalMatrix& A, const Rational& sigma);

// Closed-form moments of A' from those of A. `printed_m2` reproduces the
// second-moment line exactly as it is usually quoted (tau^2 M1^2, without
// the factor m^2); it exists only so the audit can show the mismatch.
MomentVector moments_after_Tt(const MomentVector& mv, const Rational& sigma, int m, bool printed_m2 = false);

// ---- the 15 set partitions of four tensor positions ----

struct Pattern {
  std::array<int, 4> block;  // block id per position, first occurrence order
  int blocks = 0;
  int group = 0;             // 1..5
  std::string label;         // e.g. "01|23"
};

const std::array<Pattern, 15>& patterns();
int join_block_count(const Pattern& a, const Pattern& b);

struct AppendixTables {
  int m = 0;
  RationalMatrix C15;     // C15(p, q) = m^{#blocks(p v q)}
  RationalMatrix C15inv;
  Rational det;
};

// Throws InputError for m <= 3, where the Gram matrix is singular.
AppendixTables build_appendix(int m);
Rational det_formula(int m);  // m^15 (m-1)^14 (m-2)^7 (m-3)

// The Gram matrix copied entry by entry from the published table.
RationalMatrix gram_transcribed(int m);

// ---- E (A^{x4}) E^T blocks ----

enum class Mono : std::uint8_t { M1_4, M1M3, M1_2M2, M2_2, M4, Mr, Mc, Mq };
std::string mono_name(Mono k);

struct BlockEntry {
  Mono mono = Mono::M1_4;
  int m_power = 0;
  bool operator==(const BlockEntry&) const = default;
};
std::string to_string(const BlockEntry& e);

using BlockTable = std::array<std::array<BlockEntry, 15>, 15>;

BlockTable blocks_transcribed();  // as printed, transposes filled in
BlockTable blocks_derived();      // contraction of the pattern multigraph
RationalMatrix evaluate_blocks(const BlockTable& t, const MomentVector& mv, int m);
// Direct sums over index tuples; independent of the margin assumption.
RationalMatrix blocks_bruteforce(const RationalMatrix& A);

struct BlockDiff {
  int row = 0, col = 0;
  std::string block;  // "E1E3"
  BlockEntry printed, derived;
};

struct AppendixAudit {
  int m = 0;
  int samples = 0;
  std::vector<BlockDiff> diffs;
  bool derived_matches_bruteforce = true;
  bool printed_matches_bruteforce = true;
  bool gram_matches_transcription = true;
  bool det_matches_formula = true;
  bool norm4_derived_matches_exhaustive = true;
  bool norm4_printed_matches_exhaustive = true;
  bool m2_transfer_printed_matches = true;
  bool m2_transfer_corrected_matches = true;
};

AppendixAudit audit_appendix(int m, int samples, std::uint64_t seed);

// tr(X C15^{-1}) with X from the derived blocks.
Rational norm4_exact(const RationalMatrix& A, const AppendixTables& tables);
Rational norm4_with(const BlockTable& t, const RationalMatrix& A, const AppendixTables& tables);

// ---- hypercontractivity ----

struct HyperSample {
  Rational kurtosis;  // E f^4 / (E f^2)^2 for the centered f
  Rational ratio;     // sigma^4 * kurtosis = ||T_t f||_4^4 at ||f||_2 = 1
};

struct HyperReport {
  int m = 0;
  Rational sigma4;
  int samples = 0;
  Rational max_ratio;
  Rational max_kurtosis;
  int violations = 0;      // ratio > 1
  int bound_failures = 0;  // M1^2 <= m^2 Ef^2, M2 <= (m-1) Ef^2, Mq <= M2^2
  int degree2_pairs = 0;
  int degree2_violations = 0;  // sigma^8 k1 k2 > 1
};

// sigma4 unset means sigma = m^{-1/2}, i.e. sigma^4 = 1/m^2.
HyperReport hypercontractivity_check(int m, std::optional<Rational> sigma4, int samples, std::uint64_t seed);

struct HyperSweep {
  std::vector<HyperReport> rows;
  std::optional<int> empirical_m0;  // least m with no violations from there on
};

HyperSweep hyper_sweep(int m_lo, int m_hi, int samples, std::uint64_t seed);

nlohmann::ordered_json to_json(const MomentVector& mv);
nlohmann::ordered_json to_json(const AppendixAudit& a);
nlohmann::ordered_json to_json(const HyperReport& r);

}  // namespace irs
