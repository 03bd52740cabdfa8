#include "dstab/predicates.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace dstab {

namespace {

constexpr std::size_t kMaxEnumeration = 20;

void require_enumerable(const RealMatrix& a) {
  if (a.n() > kMaxEnumeration) {
    throw Error(ErrorCode::DimensionTooLarge,
                "principal minor enumeration is limited to n <= 20; got n = " +
                    std::to_string(a.n()));
  }
}

std::vector<std::size_t> mask_indices(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

// Hadamard bound on |minor|: product of the restricted row norms.
double minor_scale(const RealMatrix& a, std::uint32_t mask) {
  const auto idx = mask_indices(mask);
  double prod = 1.0;
  for (std::size_t r : idx) {
    double sq = 0.0;
    for (std::size_t c : idx) sq += a(r, c) * a(r, c);
    prod *= std::sqrt(sq);
  }
  return prod;
}

double off_diagonal_row_sum(const RealMatrix& a, std::size_t i) {
  double r = 0.0;
  for (std::size_t j = 0; j < a.n(); ++j)
    if (j != i) r += std::abs(a(i, j));
  return r;
}

ClassVerdict minor_sums_positive(const RealMatrix& a) {
  const auto sums = principal_minor_sums_scaled(a);
  ClassVerdict out{Verdict::True, {}};
  for (std::size_t k = 0; k < sums.sums.size(); ++k) {
    const Verdict v = positive_verdict(sums.sums[k], sums.scale[k]);
    if (v == Verdict::False) return {Verdict::False, {k}};
    if (v == Verdict::Indeterminate) out.verdict = Verdict::Indeterminate;
  }
  return out;
}

}  // namespace

ClassVerdict is_P_matrix(const RealMatrix& a) {
  require_enumerable(a);
  const std::uint32_t end = 1u << a.n();
  bool indeterminate = false;
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    const Verdict v = positive_verdict(principal_minor(a, mask), minor_scale(a, mask));
    if (v == Verdict::False) return {Verdict::False, mask_indices(mask)};
    if (v == Verdict::Indeterminate) indeterminate = true;
  }
  return {indeterminate ? Verdict::Indeterminate : Verdict::True, {}};
}

ClassVerdict is_P0_matrix(const RealMatrix& a) {
  require_enumerable(a);
  const std::uint32_t end = 1u << a.n();
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    const double m = principal_minor(a, mask);
    if (m < -strict_eps() * minor_scale(a, mask)) return {Verdict::False, mask_indices(mask)};
  }
  return {Verdict::True, {}};
}

ClassVerdict is_P0_plus(const RealMatrix& a) {
  auto p0 = is_P0_matrix(a);
  if (p0.verdict != Verdict::True) return p0;
  return minor_sums_positive(a);
}

ClassVerdict is_Q_matrix(const RealMatrix& a) { return minor_sums_positive(a); }

std::vector<double> dominance_ratios(const RealMatrix& a) {
  std::vector<double> s(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    const double d = std::abs(a(i, i));
    if (d <= 1e-300) {
      throw Error(ErrorCode::ZeroDiagonal, "zero diagonal entry at index " + std::to_string(i), i);
    }
    s[i] = off_diagonal_row_sum(a, i) / d;
  }
  return s;
}

ClassVerdict is_strict_row_dd(const RealMatrix& a) {
  for (std::size_t i = 0; i < a.n(); ++i) {
    const double d = std::abs(a(i, i));
    if (!(d - off_diagonal_row_sum(a, i) > strict_eps() * d)) return {Verdict::False, {i}};
  }
  return {Verdict::True, {}};
}

ClassVerdict is_strict_col_dd(const RealMatrix& a) { return is_strict_row_dd(a.transpose()); }

ClassVerdict is_doubly_dd(const RealMatrix& a) {
  auto row = is_strict_row_dd(a);
  if (!row.is_true()) return row;
  return is_strict_col_dd(a);
}

ClassVerdict is_sector_dd(const RealMatrix& a, SectorAngle theta) {
  const double s = theta.is_half_plane() ? 1.0 : std::sin(theta.value());
  for (std::size_t i = 0; i < a.n(); ++i) {
    const double aii = a(i, i);
    const double d = std::abs(aii);
    if (!(aii < 0.0) || !(s * d - off_diagonal_row_sum(a, i) > strict_eps() * d)) {
      return {Verdict::False, {i}};
    }
  }
  return {Verdict::True, {}};
}

ClassReport classify(const RealMatrix& a, std::optional<SectorAngle> theta) {
  ClassReport report;
  report.matrix_hash = content_digest(a);
  report.notes.push_back("Q-matrix is tested as: every sum E_k of order-k principal minors is strictly positive");

  auto record = [&report](const std::string& name, const ClassVerdict& v) {
    report.verdicts[name] = v.verdict;
    if (v.verdict == Verdict::False) report.witnesses[name] = v.witness;
  };

  if (a.n() <= kMaxEnumeration) {
    record("P", is_P_matrix(a));
    record("P0", is_P0_matrix(a));
    record("P0_plus", is_P0_plus(a));
  } else {
    for (const char* name : {"P", "P0", "P0_plus"}) report.verdicts[name] = Verdict::Indeterminate;
    report.notes.push_back("principal minor enumeration skipped for n > 20");
  }
  record("Q", is_Q_matrix(a));
  record("row_dd", is_strict_row_dd(a));
  record("col_dd", is_strict_col_dd(a));
  record("doubly_dd", is_doubly_dd(a));
  if (theta) record("sector_dd", is_sector_dd(a, *theta));

  try {
    report.ratios = dominance_ratios(a);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroDiagonal) throw;
    report.notes.push_back(e.what());
  }
  return report;
}

}  // namespace dstab
