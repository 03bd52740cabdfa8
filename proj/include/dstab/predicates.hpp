#pragma once

// Membership tests for the matrix classes used by the stability criteria:
// P, P0, P0+, Q, strict row/column/double diagonal dominance, and
// diagonal sector dominance.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dstab/linalg.hpp"

namespace dstab {

/// A verdict plus, for False, the offending index set (0-based) or row.
struct ClassVerdict {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<std::size_t> witness;

  bool is_true() const { return verdict == Verdict::True; }
};

/// P-matrix: every principal minor strictly positive. Subsets are visited
/// in increasing bitmask order; the first failing subset is the witness.
/// Throws DimensionTooLarge for n > 20.
ClassVerdict is_P_matrix(const RealMatrix& a);

/// P0: every principal minor >= -eps * scale.
ClassVerdict is_P0_matrix(const RealMatrix& a);

/// P0+: P0 and every sum of principal minors of fixed order positive.
ClassVerdict is_P0_plus(const RealMatrix& a);

/// Q-matrix, read as: every E_k strictly positive. Witness is {k-1} for the
/// first failing order k.
ClassVerdict is_Q_matrix(const RealMatrix& a);

/// s_i = sum_{j != i} |a_ij| / |a_ii|. Throws ZeroDiagonal(i) when
/// |a_ii| <= 1e-300.
std::vector<double> dominance_ratios(const RealMatrix& a);

ClassVerdict is_strict_row_dd(const RealMatrix& a);
ClassVerdict is_strict_col_dd(const RealMatrix& a);
ClassVerdict is_doubly_dd(const RealMatrix& a);

/// sin(theta) |a_ii| > sum_{j != i} |a_ij| and a_ii < 0 for every row.
/// The half-plane variant uses sin = 1.
ClassVerdict is_sector_dd(const RealMatrix& a, SectorAngle theta);

struct ClassReport {
  std::string matrix_hash;
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, std::vector<std::size_t>> witnesses;
  std::optional<std::vector<double>> ratios;
  std::vector<std::string> notes;
};

/// Runs every predicate. sector_dd is included only when `theta` is given.
/// Classes whose test is out of range for this n are Indeterminate with a note.
ClassReport classify(const RealMatrix& a, std::optional<SectorAngle> theta = std::nullopt);

}  // namespace dstab
