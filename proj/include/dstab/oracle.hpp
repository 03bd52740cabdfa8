#pragma once

// Ground-truth machinery: seeded sampling of sigma(DA) and sigma(A - D)
// against a sector, the subset expansion of det(A + D), P0
// superadditivity, closure checks for additive sector stability, and the
// exact 2 x 2 equivalence for Q^2 scalings.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dstab/linalg.hpp"

namespace dstab {

struct SamplingReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Minimum over trials and eigenvalues of sector_slack (radians).
  double worst_margin = 0.0;
  std::uint64_t seed = 0;
  ScalingMode mode = ScalingMode::Multiplicative;
  SectorAngle theta = SectorAngle::half_plane();

  friend bool operator==(const SamplingReport&, const SamplingReport&) = default;
};

struct SamplingOptions {
  /// Worker threads; results do not depend on this value.
  unsigned threads = 1;
};

/// The scaling drawn for trial `index`: d_i = exp(u_i), u_i uniform on
/// [-6, 6]; in additive mode d_i = exp(u_i) - e^-6, and each coordinate is
/// exactly zero with probability 0.2.
DiagonalScaling draw_scaling(std::size_t n, ScalingMode mode, std::uint64_t seed, std::size_t index);

/// Tests sigma(DA) (multiplicative) or sigma(A - D) (additive) against the
/// sector for `trials` seeded scalings. Deterministic for a fixed seed at
/// any thread count.
SamplingReport sample_scalings(const RealMatrix& a, SectorAngle theta, ScalingMode mode, std::size_t trials,
                               std::uint64_t seed, SamplingOptions opts = {});

/// Same draws as sample_scalings, one CSV row per trial per eigenvalue:
/// trial,d,re,im,slack (d is ';'-separated).
void write_spectrum_csv(std::ostream& out, const RealMatrix& a, SectorAngle theta, ScalingMode mode,
                        std::size_t trials, std::uint64_t seed);

/// sum over subsets S of prod_{i in S} d_i * det A[complement of S]; the
/// empty complement contributes prod d_i. Requires n <= 12 and an additive D.
double expansion_det_sum(const RealMatrix& a, const DiagonalScaling& d);

/// Sum of the absolute values of the expansion terms (the natural scale for
/// comparing expansion_det_sum with det(A + D)).
double expansion_abs_sum(const RealMatrix& a, const DiagonalScaling& d);

struct SuperadditivityReport {
  std::size_t trials = 0;
  std::size_t violations = 0;           // det A + det D > det(A + D) beyond tolerance
  std::size_t expansion_mismatches = 0;  // expansion vs det(A + D) beyond 1e-9
  double worst_slack = 0.0;             // min of det(A+D) - det A - det D, relative
};

/// Requires a P0-matrix (NotP0Matrix) with n <= 12 (DimensionTooLarge).
SuperadditivityReport verify_superadditivity(const RealMatrix& a, std::size_t trials, std::uint64_t seed);

struct ClosureReport {
  SamplingReport premise;
  std::vector<std::pair<std::string, SamplingReport>> closures;

  bool all_pass() const;
};

/// Re-samples A^T, P^T A P, E A E^-1, A - E and alpha A (alpha in 0.1, 1, 7)
/// in additive mode. Throws PremiseFailed unless A itself samples clean.
ClosureReport closure_checks(const RealMatrix& a, SectorAngle theta, std::size_t trials, std::uint64_t seed,
                             SamplingOptions opts = {});

struct TwoByTwoReport {
  bool criterion_det = false;        // det A < 2 a11 a22
  bool criterion_grid = false;       // Q test of (DA)^2 over grid and analytic point
  double min_normalized_trace = 0.0;  // min over evaluated D of tr((DA)^2) / (d11 a11 d22 a22)
  double analytic_trace = 0.0;       // tr((DA)^2) at d11 = 1/a11, d22 = 1/a22
  std::size_t points = 0;

  bool agree() const { return criterion_det == criterion_grid; }
};

/// For a 2 x 2 P-matrix, compares det A < 2 a11 a22 with a direct check
/// that tr((DA)^2) > 0 and det((DA)^2) > 0 over a grid_size^2 log-uniform
/// grid on [e^-8, e^8]^2 plus the point d11 a11 = d22 a22.
/// Throws Dimension or NotPMatrix.
TwoByTwoReport two_by_two_equivalence(const RealMatrix& a, std::size_t grid_size = 33);

}  // namespace dstab
