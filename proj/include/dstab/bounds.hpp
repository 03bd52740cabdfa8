#pragma once

// Determinant upper bounds: classical Hadamard, the sector-weighted
// variants (multiplicative and additive), and the bounds they yield for
// diagonally stable, normal positive definite, diagonally dominant and
// Q^2-scaled matrices.

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dstab/certificates.hpp"
#include "dstab/linalg.hpp"

namespace dstab {

struct AmGmResult {
  double geometric_mean = 0.0;  // |z_1 ... z_n|^(1/n)
  double bound = 0.0;           // |z_1 + ... + z_n| / (n cos theta)
  bool holds = false;           // bound - geometric_mean >= -1e-10 * scale
};

/// Complex AM-GM: for |arg z_i| <= theta < pi/2,
/// |z_1 ... z_n|^(1/n) <= |z_1 + ... + z_n| / (n cos theta).
/// Equality needs n even and the z_i split into r e^{i theta} and its
/// conjugate in equal numbers.
/// Throws ArgOutOfSector(i) when |arg z_i| > theta + 1e-12.
AmGmResult complex_amgm(std::span<const std::complex<double>> z, SectorAngle theta);
bool complex_amgm_check(std::span<const std::complex<double>> z, SectorAngle theta);

/// prod a_ii for symmetric positive definite A. Throws NotPositiveDefinite.
double hadamard_classic(const RealMatrix& a);

/// prod a_ii / cos^n(theta). Throws NonpositiveDiagonal(i), ThetaAtHalfPlane.
double sector_hadamard(const RealMatrix& a, SectorAngle theta);

/// (max_i a_ii / cos theta)^n. Throws ThetaAtHalfPlane, NonpositiveMaxDiagonal.
double additive_sector_hadamard(const RealMatrix& a, SectorAngle theta);

/// (t^2 + 1)^(n/2) prod a_ii, the sector bound written with t = tan(theta).
double tan_form_bound(const RealMatrix& a, double tan_theta);

struct DiagStableBound {
  double value = 0.0;
  DiagonalScaling scaling;
  SectorAngle theta;  // achieved estimate theta(D) for -A
};

/// Bound for A with -A diagonally stable, using (D, theta) from
/// optimize_theta(-A). Throws NotDiagonallyStable, NonpositiveDiagonal.
DiagStableBound diag_stable_bound_detail(const RealMatrix& a, SearchOptions opts = {});
double diag_stable_bound(const RealMatrix& a, SearchOptions opts = {});

struct NormalPdBound {
  double value = 0.0;       // from the spectrum
  double general = 0.0;     // from ||Skew A|| ||Sym(A)^{-1}||
};

/// Throws NotNormal, NotPositiveDefinite.
NormalPdBound normal_pd_bound(const RealMatrix& a);

/// prod a_ii / (1 - (max s_i)^2)^(n/2). Throws NotDominant, NonpositiveDiagonal.
double dd_bound(const RealMatrix& a);

/// ((||Skew A|| ||Sym(A)^{-1}||)^2 + 1)^(n/2) prod a_ii for doubly dominant
/// A with positive diagonal. Throws NotDominant, NonpositiveDiagonal.
double doubly_dd_bound(const RealMatrix& a);

struct Q2Bound {
  double value = 0.0;
  Q2Hypothesis hypothesis;
};

/// prod a_ii / sin^n(pi/(2n)) for a P-matrix whose diagonal scalings have
/// Q-matrix squares. Throws NotPMatrix, HypothesisFailed.
Q2Bound q2_bound(const RealMatrix& a, std::size_t samples = 1000, std::uint64_t seed = 0x5eedULL);

struct BoundEntry {
  std::optional<double> value;
  std::optional<SectorAngle> theta_used;
  bool applicable = false;
  std::optional<SectorCertificate> certificate;
  std::string note;
};

inline constexpr const char* kBoundNames[] = {"hadamard", "sector",  "additive_sector", "diag_stable",
                                              "normal_pd", "row_dd", "doubly_dd",       "q2"};

struct BoundReport {
  double det_exact = 0.0;
  std::map<std::string, BoundEntry> bounds;
  /// det_exact / value for applicable bounds; nullopt when undefined.
  std::map<std::string, std::optional<double>> tightness;
  /// Applicable bounds that det_exact exceeds beyond 1e-9 relative.
  std::vector<std::string> violations;

  bool consistent() const { return violations.empty(); }
};

/// Evaluates every bound whose gate is Certified or Exact; the others are
/// reported as not applicable with the reason.
BoundReport best_bound(const RealMatrix& a, SearchOptions opts = {});

}  // namespace dstab
