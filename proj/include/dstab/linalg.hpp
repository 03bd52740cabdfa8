#pragma once

// Dense real-matrix substrate: validated matrix and scaling types, sector
// angles, spectra, determinants, minor sums and the sector membership test.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dstab {

enum class ErrorCode {
  InvalidMatrix,
  InvalidArgument,
  NonConvergence,
  DimensionTooLarge,
  Dimension,
  ZeroDiagonal,
  NotPositiveDefinite,
  NotLyapunovScaling,
  NotDiagonallyStable,
  NotNormal,
  NotDominant,
  WrongDiagonalSign,
  NonpositiveDiagonal,
  NonpositiveMaxDiagonal,
  ThetaAtHalfPlane,
  NotPMatrix,
  NotP0Matrix,
  HypothesisFailed,
  ArgOutOfSector,
  PremiseFailed,
  Parse,
  InternalConsistency,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const { return code_; }
  /// Offending row/element index for the errors that carry one.
  std::optional<std::size_t> index() const { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

/// Ternary outcome of a strict inequality evaluated in floating point.
enum class Verdict { True, False, Indeterminate };

std::string_view to_string(Verdict v);

/// Relative margin used for every strict inequality (default 1e-9).
/// DSTAB_EPS in the environment overrides it; read once per process.
double strict_eps();

/// Strict positivity with margin strict_eps()*scale. Values inside the
/// margin are Indeterminate, except an exact zero (or a zero scale), which
/// is False.
Verdict positive_verdict(double value, double scale);

class RealMatrix {
 public:
  /// Row-major entries; throws InvalidMatrix unless n >= 1, the size is
  /// n*n and every entry is finite.
  RealMatrix(std::size_t n, std::span<const double> row_major);
  RealMatrix(std::size_t n, std::initializer_list<double> row_major);
  explicit RealMatrix(Eigen::MatrixXd m);

  static RealMatrix identity(std::size_t n);
  static RealMatrix zero(std::size_t n);
  static RealMatrix diagonal(std::span<const double> d);
  static RealMatrix diagonal(std::initializer_list<double> d);

  std::size_t n() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& mat() const { return m_; }

  std::vector<double> row_major() const;
  std::vector<double> diagonal_entries() const;
  RealMatrix transpose() const { return RealMatrix(Eigen::MatrixXd(m_.transpose())); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }
  double trace() const { return m_.trace(); }

  friend bool operator==(const RealMatrix& a, const RealMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  void validate() const;
  Eigen::MatrixXd m_;
};

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a);
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);

enum class ScalingMode { Multiplicative, Additive };

std::string_view to_string(ScalingMode m);

/// Diagonal factor D: strictly positive entries in multiplicative mode,
/// nonnegative entries in additive mode.
class DiagonalScaling {
 public:
  DiagonalScaling(std::vector<double> d, ScalingMode mode);

  static DiagonalScaling identity(std::size_t n) {
    return DiagonalScaling(std::vector<double>(n, 1.0), ScalingMode::Multiplicative);
  }

  std::size_t size() const { return d_.size(); }
  const std::vector<double>& values() const { return d_; }
  double operator[](std::size_t i) const { return d_[i]; }
  ScalingMode mode() const { return mode_; }

  RealMatrix matrix() const { return RealMatrix::diagonal(d_); }
  /// D * A, computed by row scaling.
  RealMatrix scale_rows(const RealMatrix& a) const;
  double product() const;

 private:
  std::vector<double> d_;
  ScalingMode mode_;
};

/// Half-angle of the open sector around the negative real axis. Either a
/// finite angle in [0, pi/2) or the half-plane variant; the half-plane is
/// never represented by theta = pi/2.
class SectorAngle {
 public:
  static SectorAngle from_radians(double theta);
  static SectorAngle half_plane() { return SectorAngle(kHalfPi, true); }

  bool is_half_plane() const { return half_plane_; }
  /// Radians; pi/2 for the half-plane variant.
  double value() const { return theta_; }
  /// cos(theta); throws ThetaAtHalfPlane for the half-plane.
  double cos() const;

  friend bool operator==(const SectorAngle&, const SectorAngle&) = default;

  static constexpr double kHalfPi = 1.57079632679489661923;

 private:
  SectorAngle(double theta, bool half) : theta_(theta), half_plane_(half) {}
  double theta_;
  bool half_plane_;
};

enum class Orientation { NegativeAxis, PositiveAxis };

struct ComplexSpectrum {
  std::vector<std::complex<double>> values;

  std::size_t size() const { return values.size(); }
  std::complex<double> sum() const;
  std::complex<double> product() const;
  double spectral_radius() const;
};

/// All n eigenvalues with multiplicity (Hessenberg reduction plus shifted
/// QR). Throws NonConvergence after 100*n^2 iterations.
ComplexSpectrum eigenvalues(const RealMatrix& a);

/// Ascending eigenvalues of the symmetric part of `s`.
std::vector<double> symmetric_eigenvalues(const RealMatrix& s);

/// LU with partial pivoting. Returns exactly 0.0 when some pivot falls
/// below 1e-13 * max|entry|.
double determinant(const RealMatrix& a);

RealMatrix sym_part(const RealMatrix& a);
RealMatrix skew_part(const RealMatrix& a);

bool is_symmetric(const RealMatrix& a, double rel_tol = 1e-12);

/// Largest singular value s1(A).
double operator_norm(const RealMatrix& a);

/// ||S^{-1}|| for symmetric nonsingular S, i.e. 1 / min |eigenvalue|.
/// Throws NotPositiveDefinite (with an explanatory message) when S is
/// numerically singular.
double symmetric_inverse_norm(const RealMatrix& s);

/// Determinant of the principal submatrix selected by `mask` (bit i set
/// selects row/column i). The empty mask has determinant 1.
double principal_minor(const RealMatrix& a, std::uint32_t mask);

enum class MinorSumPath { Auto, Recursive, Exhaustive };

/// Sums of principal minors by order together with a magnitude scale for
/// each order (used for strict-positivity margins).
struct MinorSums {
  std::vector<double> sums;   // E_1..E_n
  std::vector<double> scale;  // per-order magnitude: sum of |minor| or a bound
};

/// E_1..E_n. Auto computes them by the Faddeev-LeVerrier recursion and,
/// for n <= 8, also by exhaustive enumeration, throwing InternalConsistency
/// if the two disagree by more than 1e-8 relative; the enumerated values
/// are returned in that case. Exhaustive throws DimensionTooLarge for n > 12.
std::vector<double> principal_minor_sums(const RealMatrix& a,
                                         MinorSumPath path = MinorSumPath::Auto);
MinorSums principal_minor_sums_scaled(const RealMatrix& a,
                                      MinorSumPath path = MinorSumPath::Auto);

/// Strict membership in the open sector (negative-axis orientation) or its
/// reflection through the origin. Zero is never inside.
bool in_sector(std::complex<double> z, SectorAngle theta,
               Orientation orientation = Orientation::NegativeAxis);

/// Angular slack theta - phi, where phi in [0, pi] is the angle between z
/// and the sector axis. Negative means outside. For theta = 0 an angle
/// below 1e-12 counts as on-axis; z = 0 has slack -pi/2.
double sector_slack(std::complex<double> z, SectorAngle theta,
                    Orientation orientation = Orientation::NegativeAxis);

/// Stable 64-bit FNV-1a digest of n and the entry bit patterns, as hex.
std::string content_digest(const RealMatrix& a);

}  // namespace dstab
