#pragma once

// Sector-Lyapunov certificates: the 2n x 2n matrix W(A, D, theta), the
// Lyapunov diagonal scaling search, and the sector-angle estimators for
// diagonally stable, normal positive definite, dominant and Q^2-scaled
// matrices.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "dstab/linalg.hpp"

namespace dstab {

enum class CertificateKind { DiagonalSectorStable, DiagonallyStable, SectorDominant, Q2Scaling, NormalPD };
enum class CertificateStatus { Certified, Refuted, Indeterminate };

std::string_view to_string(CertificateKind k);
std::string_view to_string(CertificateStatus s);

/// Angle added to an infimum estimate before certifying, so that the
/// certified sector is strictly wider than the estimate.
inline constexpr double kCertificateMargin = 1e-6;

struct SectorCertificate {
  CertificateKind kind{};
  std::optional<DiagonalScaling> d;
  SectorAngle theta = SectorAngle::half_plane();
  /// Standard keys: lambda_max_W, norm_skew, norm_sym_inv, s_max; others
  /// (theta_inf, lambda_max_lyapunov) appear where relevant.
  std::map<std::string, double> evidence;
  CertificateStatus status = CertificateStatus::Indeterminate;
  std::string note;

  bool certified() const { return status == CertificateStatus::Certified; }
};

/// The printed block-sum form of W for an arbitrary symmetric H:
/// [s HA, c HA; -c HA, s HA] + [s A^T H, -c A^T H; c A^T H, s A^T H].
RealMatrix sector_lyapunov_matrix(const RealMatrix& a, const RealMatrix& h, SectorAngle theta);

/// W(A, D, theta) in symmetrized form: diagonal blocks 2 sin(theta) Sym(DA),
/// off-diagonal blocks 2 cos(theta) Skew(DA) and its transpose. Requires a
/// multiplicative D and theta in (0, pi/2).
RealMatrix build_W(const RealMatrix& a, const DiagonalScaling& d, SectorAngle theta);

/// lambda_max(Sym(S)) < -eps * spectral radius, ternary.
Verdict is_negative_definite(const RealMatrix& s);
/// Largest eigenvalue of Sym(S) (S is symmetrized first).
double lambda_max(const RealMatrix& s);

/// Sector-Lyapunov check with a general symmetric positive definite H.
/// Certified results are cross-checked against the spectrum of A; a
/// disagreement throws InternalConsistency.
SectorCertificate check_sector_lyapunov(const RealMatrix& a, const RealMatrix& h, SectorAngle theta);

struct SearchOptions {
  /// Function-evaluation budget; 0 means 500 * n.
  std::size_t budget = 0;
  std::uint64_t seed = 0x5eedULL;
  std::size_t random_restarts = 8;
};

/// Searches for positive diagonal D with DA + A^T D negative definite by
/// coordinate descent in u = log d with golden-section line searches,
/// starting at u = 0 and then at seeded random points. Returns nullopt when
/// the budget runs out without a feasible point.
std::optional<DiagonalScaling> find_lyapunov_diagonal(const RealMatrix& a, SearchOptions opts = {});

/// tan-form of the estimate: ||Skew(DA)|| * ||Sym(DA)^{-1}||. Throws
/// NotLyapunovScaling unless DA + A^T D is negative definite.
double skew_sym_ratio(const RealMatrix& a, const DiagonalScaling& d);

/// arctan(||Skew(DA)|| * ||Sym(DA)^{-1}||); W(A, D, theta') is checked
/// negative definite at theta' = theta + 0.01 when that is below pi/2.
SectorAngle theta_from_scaling(const RealMatrix& a, const DiagonalScaling& d);

/// Minimizes theta_from_scaling over D starting from the feasibility point.
/// Any returned pair is sound; it need not be the infimum. Throws
/// NotDiagonallyStable when no Lyapunov scaling is found.
std::pair<DiagonalScaling, SectorAngle> optimize_theta(const RealMatrix& a, SearchOptions opts = {});

struct NormalTheta {
  SectorAngle theta;          // from the spectrum of A
  SectorAngle general_theta;  // arctan(||Skew A|| ||Sym(A)^{-1}||)
};

/// For normal A with Sym(A) positive definite:
/// arctan(max |Im lambda| / min |Re lambda|). Throws NotPositiveDefinite or
/// NotNormal.
NormalTheta theta_for_normal_pd_detail(const RealMatrix& a);
SectorAngle theta_for_normal_pd(const RealMatrix& a);

/// arcsin(max_i s_i) for strictly row dominant A with negative diagonal.
/// Throws NotDominant or WrongDiagonalSign.
SectorAngle theta_for_dd(const RealMatrix& a);

/// pi/2 - pi/(2n).
SectorAngle theta_for_q2(std::size_t n);

/// Sufficient test ||X|| < 1/sqrt(||A^{-1}|| ||B^{-1}||) for
/// [[A, X], [X^T, B]] to be positive definite. A True result is confirmed by
/// an eigensolve of the block matrix (InternalConsistency otherwise).
Verdict block_pd_norm_test(const RealMatrix& a, const RealMatrix& b, const RealMatrix& x);

// Certificate constructors used by the CLI and the bounds module. Each
// returns a certificate for sigma(A) (and sigma(DA), sigma(A - D)) lying in
// the sector around the negative real axis.

/// SectorDominant at theta = arcsin(max s_i) + margin.
SectorCertificate dominance_certificate(const RealMatrix& a);
/// NormalPD: -A normal with Sym(-A) positive definite, D = I.
SectorCertificate normal_pd_certificate(const RealMatrix& a);
/// DiagonallyStable (half-plane) from find_lyapunov_diagonal.
SectorCertificate lyapunov_certificate(const RealMatrix& a, SearchOptions opts = {});
/// DiagonalSectorStable from optimize_theta, at theta(D) + margin.
SectorCertificate diagonal_sector_certificate(const RealMatrix& a, SearchOptions opts = {});
/// DiagonalSectorStable check of a given scaling at a given angle.
SectorCertificate check_diagonal_sector(const RealMatrix& a, const DiagonalScaling& d, SectorAngle theta);

enum class HypothesisStatus { Exact, Sampled, Failed };
std::string_view to_string(HypothesisStatus s);

struct Q2Hypothesis {
  HypothesisStatus status = HypothesisStatus::Failed;
  std::size_t samples = 0;        // scalings drawn (sampled path only)
  std::size_t indeterminate = 0;  // samples whose Q verdict was inside the margin
  std::string detail;
};

/// Whether (DA)^2 is a Q-matrix for every positive diagonal D, for a
/// P-matrix A. Exact for n = 1, for diagonal A, and for n = 2 through the
/// criterion det A < 2 a11 a22; otherwise sampled over `samples` scalings
/// with log d_i uniform on [-3, 3]. Throws NotPMatrix.
Q2Hypothesis check_q2_hypothesis(const RealMatrix& a, std::size_t samples = 1000,
                                 std::uint64_t seed = 0x5eedULL);

/// Q2Scaling for sigma(A) with -A a P-matrix satisfying the hypothesis, at
/// theta = pi/2 - pi/(2n). Certified only when the hypothesis is Exact.
SectorCertificate q2_certificate(const RealMatrix& a);

}  // namespace dstab
