#include "dstab/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace dstab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::Dimension: return "Dimension";
    case ErrorCode::ZeroDiagonal: return "ZeroDiagonal";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotLyapunovScaling: return "NotLyapunovScaling";
    case ErrorCode::NotDiagonallyStable: return "NotDiagonallyStable";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotDominant: return "NotDominant";
    case ErrorCode::WrongDiagonalSign: return "WrongDiagonalSign";
    case ErrorCode::NonpositiveDiagonal: return "NonpositiveDiagonal";
    case ErrorCode::NonpositiveMaxDiagonal: return "NonpositiveMaxDiagonal";
    case ErrorCode::ThetaAtHalfPlane: return "ThetaAtHalfPlane";
    case ErrorCode::NotPMatrix: return "NotPMatrix";
    case ErrorCode::NotP0Matrix: return "NotP0Matrix";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::ArgOutOfSector: return "ArgOutOfSector";
    case ErrorCode::PremiseFailed: return "PremiseFailed";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "True";
    case Verdict::False: return "False";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::string_view to_string(ScalingMode m) {
  return m == ScalingMode::Multiplicative ? "multiplicative" : "additive";
}

double strict_eps() {
  static const double eps = [] {
    if (const char* env = std::getenv("DSTAB_EPS")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && std::isfinite(v) && v >= 0.0) return v;
    }
    return 1e-9;
  }();
  return eps;
}

Verdict positive_verdict(double value, double scale) {
  const double margin = strict_eps() * std::abs(scale);
  if (value > margin) return Verdict::True;
  if (value < -margin || value == 0.0 || margin == 0.0) return Verdict::False;
  return Verdict::Indeterminate;
}

// ---------------------------------------------------------------------------
// RealMatrix

RealMatrix::RealMatrix(std::size_t n, std::span<const double> row_major) {
  if (n == 0) throw Error(ErrorCode::InvalidMatrix, "matrix dimension must be >= 1");
  if (row_major.size() != n * n) {
    throw Error(ErrorCode::InvalidMatrix,
                "expected " + std::to_string(n * n) + " entries, got " +
                    std::to_string(row_major.size()));
  }
  const auto k = static_cast<Eigen::Index>(n);
  m_.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m_(i, j) = row_major[static_cast<std::size_t>(i * k + j)];
  validate();
}

RealMatrix::RealMatrix(std::size_t n, std::initializer_list<double> row_major)
    : RealMatrix(n, std::span<const double>(row_major.begin(), row_major.size())) {}

RealMatrix::RealMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() == 0) throw Error(ErrorCode::InvalidMatrix, "matrix dimension must be >= 1");
  if (m_.rows() != m_.cols()) throw Error(ErrorCode::InvalidMatrix, "matrix is not square");
  validate();
}

void RealMatrix::validate() const {
  if (!m_.allFinite()) throw Error(ErrorCode::InvalidMatrix, "matrix has non-finite entries");
}

RealMatrix RealMatrix::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return RealMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Identity(k, k)));
}

RealMatrix RealMatrix::zero(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return RealMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Zero(k, k)));
}

RealMatrix RealMatrix::diagonal(std::span<const double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Eigen::Index>(i)) = d[i];
  return RealMatrix(Eigen::MatrixXd(v.asDiagonal()));
}

RealMatrix RealMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

std::vector<double> RealMatrix::row_major() const {
  std::vector<double> out;
  out.reserve(n() * n());
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < m_.cols(); ++j) out.push_back(m_(i, j));
  return out;
}

std::vector<double> RealMatrix::diagonal_entries() const {
  std::vector<double> out(n());
  for (std::size_t i = 0; i < n(); ++i) out[i] = (*this)(i, i);
  return out;
}

static void require_same_size(const RealMatrix& a, const RealMatrix& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::Dimension, "matrix dimensions differ");
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  require_same_size(a, b);
  return RealMatrix(Eigen::MatrixXd(a.mat() + b.mat()));
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  require_same_size(a, b);
  return RealMatrix(Eigen::MatrixXd(a.mat() - b.mat()));
}

RealMatrix operator-(const RealMatrix& a) { return RealMatrix(Eigen::MatrixXd(-a.mat())); }

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  require_same_size(a, b);
  return RealMatrix(Eigen::MatrixXd(a.mat() * b.mat()));
}

RealMatrix operator*(double s, const RealMatrix& a) { return RealMatrix(Eigen::MatrixXd(s * a.mat())); }

// ---------------------------------------------------------------------------
// DiagonalScaling / SectorAngle

DiagonalScaling::DiagonalScaling(std::vector<double> d, ScalingMode mode)
    : d_(std::move(d)), mode_(mode) {
  if (d_.empty()) throw Error(ErrorCode::InvalidArgument, "empty diagonal scaling");
  for (std::size_t i = 0; i < d_.size(); ++i) {
    const double v = d_[i];
    const bool ok = std::isfinite(v) && (mode_ == ScalingMode::Multiplicative ? v > 0.0 : v >= 0.0);
    if (!ok) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(mode_ == ScalingMode::Multiplicative ? "multiplicative" : "additive") +
                      " scaling has an invalid entry at index " + std::to_string(i),
                  i);
    }
  }
}

RealMatrix DiagonalScaling::scale_rows(const RealMatrix& a) const {
  if (a.n() != d_.size()) throw Error(ErrorCode::Dimension, "scaling size differs from matrix size");
  Eigen::MatrixXd m = a.mat();
  for (std::size_t i = 0; i < d_.size(); ++i) m.row(static_cast<Eigen::Index>(i)) *= d_[i];
  return RealMatrix(std::move(m));
}

double DiagonalScaling::product() const {
  return std::accumulate(d_.begin(), d_.end(), 1.0, std::multiplies<>());
}

SectorAngle SectorAngle::from_radians(double theta) {
  if (!(theta >= 0.0 && theta < kHalfPi)) {
    throw Error(ErrorCode::InvalidArgument,
                "sector angle must lie in [0, pi/2); got " + std::to_string(theta));
  }
  return SectorAngle(theta, false);
}

double SectorAngle::cos() const {
  if (half_plane_) throw Error(ErrorCode::ThetaAtHalfPlane, "half-plane sector has cos(theta) = 0");
  return std::cos(theta_);
}

// ---------------------------------------------------------------------------
// Spectra

std::complex<double> ComplexSpectrum::sum() const {
  return std::accumulate(values.begin(), values.end(), std::complex<double>{});
}

std::complex<double> ComplexSpectrum::product() const {
  return std::accumulate(values.begin(), values.end(), std::complex<double>{1.0, 0.0},
                         std::multiplies<>());
}

double ComplexSpectrum::spectral_radius() const {
  double r = 0.0;
  for (const auto& z : values) r = std::max(r, std::abs(z));
  return r;
}

ComplexSpectrum eigenvalues(const RealMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.n());
  ComplexSpectrum out;
  if (n == 1) {
    out.values.emplace_back(a(0, 0), 0.0);
    return out;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.setMaxIterations(100 * n * n);
  solver.compute(a.mat(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence,
                "eigenvalue iteration did not converge for a " + std::to_string(n) + "x" +
                    std::to_string(n) + " matrix");
  }
  const Eigen::VectorXcd& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  return out;
}

std::vector<double> symmetric_eigenvalues(const RealMatrix& s) {
  const Eigen::MatrixXd sym = 0.5 * (s.mat() + s.mat().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "symmetric eigensolver did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double determinant(const RealMatrix& a) {
  const double scale = a.max_abs();
  if (scale == 0.0) return 0.0;
  if (a.n() == 1) return a(0, 0);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a.mat());
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < 1e-13 * scale) return 0.0;
  return lu.determinant();
}

RealMatrix sym_part(const RealMatrix& a) {
  return RealMatrix(Eigen::MatrixXd(0.5 * (a.mat() + a.mat().transpose())));
}

RealMatrix skew_part(const RealMatrix& a) {
  return RealMatrix(Eigen::MatrixXd(0.5 * (a.mat() - a.mat().transpose())));
}

bool is_symmetric(const RealMatrix& a, double rel_tol) {
  const double scale = std::max(a.max_abs(), 1e-300);
  return (a.mat() - a.mat().transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double operator_norm(const RealMatrix& a) {
  const Eigen::MatrixXd gram = a.mat().transpose() * a.mat();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "symmetric eigensolver did not converge");
  }
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double symmetric_inverse_norm(const RealMatrix& s) {
  const auto ev = symmetric_eigenvalues(s);
  double lo = std::abs(ev.front());
  double hi = 0.0;
  for (double v : ev) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (lo == 0.0 || lo <= 1e-15 * hi) {
    throw Error(ErrorCode::NotPositiveDefinite, "symmetric matrix is numerically singular");
  }
  return 1.0 / lo;
}

// ---------------------------------------------------------------------------
// Principal minors

double principal_minor(const RealMatrix& a, std::uint32_t mask) {
  const int k = std::popcount(mask);
  if (k == 0) return 1.0;
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < a.n(); ++i)
    if (mask & (1u << i)) idx.push_back(static_cast<Eigen::Index>(i));
  Eigen::MatrixXd sub(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) sub(r, c) = a.mat()(idx[r], idx[c]);
  return determinant(RealMatrix(std::move(sub)));
}

namespace {

// C(n, k) ||A||^k: the magnitude of the traces the recursion cancels at
// order k, which sets its rounding error. It dominates the Hadamard bound
// on the sum of |k x k principal minors|.
std::vector<double> recursion_scale(const RealMatrix& a) {
  const std::size_t n = a.n();
  const double norm = operator_norm(a);
  std::vector<double> s(n);
  double binom = 1.0, power = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
    power *= norm;
    s[k - 1] = binom * power;
  }
  return s;
}

std::vector<double> faddeev_leverrier(const RealMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.n());
  const Eigen::MatrixXd& A = a.mat();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // det(lambda I - A) = sum_k c[k] lambda^k, c[n] = 1.
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = A * M + c[static_cast<std::size_t>(n - k + 1)] * I;
    c[static_cast<std::size_t>(n - k)] = -(A * M).trace() / static_cast<double>(k);
  }
  std::vector<double> e(static_cast<std::size_t>(n));
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    e[static_cast<std::size_t>(k - 1)] = sign * c[static_cast<std::size_t>(n - k)];
  }
  return e;
}

MinorSums enumerate_minors(const RealMatrix& a) {
  const std::size_t n = a.n();
  MinorSums out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const std::uint32_t end = 1u << n;
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    const double m = principal_minor(a, mask);
    const auto k = static_cast<std::size_t>(std::popcount(mask)) - 1;
    out.sums[k] += m;
    out.scale[k] += std::abs(m);
  }
  return out;
}

}  // namespace

MinorSums principal_minor_sums_scaled(const RealMatrix& a, MinorSumPath path) {
  const std::size_t n = a.n();
  if (path == MinorSumPath::Exhaustive) {
    if (n > 12) {
      throw Error(ErrorCode::DimensionTooLarge,
                  "exhaustive minor enumeration is limited to n <= 12; got n = " + std::to_string(n));
    }
    return enumerate_minors(a);
  }
  const auto bounds = recursion_scale(a);
  auto recursive = faddeev_leverrier(a);
  if (path == MinorSumPath::Recursive || n > 8) return {std::move(recursive), bounds};

  auto enumerated = enumerate_minors(a);
  for (std::size_t k = 0; k < n; ++k) {
    const double tol = 1e-8 * std::max(enumerated.scale[k], bounds[k]);
    if (std::abs(recursive[k] - enumerated.sums[k]) > tol) {
      throw Error(ErrorCode::InternalConsistency,
                  "Faddeev-LeVerrier and minor enumeration disagree at order " +
                      std::to_string(k + 1));
    }
  }
  return enumerated;
}

std::vector<double> principal_minor_sums(const RealMatrix& a, MinorSumPath path) {
  return principal_minor_sums_scaled(a, path).sums;
}

// ---------------------------------------------------------------------------
// Sector membership

namespace {

std::complex<double> oriented(std::complex<double> z, Orientation o) {
  return o == Orientation::NegativeAxis ? z : -z;
}

constexpr double kAxisTol = 1e-12;

}  // namespace

bool in_sector(std::complex<double> z, SectorAngle theta, Orientation orientation) {
  const auto w = oriented(z, orientation);
  const double x = w.real();
  const double y = std::abs(w.imag());
  if (!(x < 0.0)) return false;
  if (theta.is_half_plane()) return true;
  if (theta.value() == 0.0) return y <= kAxisTol * (-x);
  return y < -x * std::tan(theta.value());
}

double sector_slack(std::complex<double> z, SectorAngle theta, Orientation orientation) {
  if (z == std::complex<double>{}) return -SectorAngle::kHalfPi;
  const auto w = oriented(z, orientation);
  double phi = std::atan2(std::abs(w.imag()), -w.real());
  if (theta.value() == 0.0 && phi <= kAxisTol) phi = 0.0;
  return theta.value() - phi;
}

std::string content_digest(const RealMatrix& a) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(a.n()));
  for (double v : a.row_major()) {
    if (v == 0.0) v = 0.0;  // fold -0.0
    mix(std::bit_cast<std::uint64_t>(v));
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xfu];
    h >>= 4;
  }
  return out;
}

}  // namespace dstab
