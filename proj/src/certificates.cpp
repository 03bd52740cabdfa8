#include "dstab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dstab/predicates.hpp"
#include "dstab/random.hpp"

namespace dstab {

std::string_view to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::DiagonalSectorStable: return "DiagonalSectorStable";
    case CertificateKind::DiagonallyStable: return "DiagonallyStable";
    case CertificateKind::SectorDominant: return "SectorDominant";
    case CertificateKind::Q2Scaling: return "Q2Scaling";
    case CertificateKind::NormalPD: return "NormalPD";
  }
  return "Unknown";
}

std::string_view to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Certified: return "Certified";
    case CertificateStatus::Refuted: return "Refuted";
    case CertificateStatus::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::string_view to_string(HypothesisStatus s) {
  switch (s) {
    case HypothesisStatus::Exact: return "Exact";
    case HypothesisStatus::Sampled: return "Sampled";
    case HypothesisStatus::Failed: return "Failed";
  }
  return "Failed";
}

namespace {

void require_open_sector(SectorAngle theta) {
  if (theta.is_half_plane() || theta.value() <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "sector angle must lie strictly inside (0, pi/2)");
  }
}

CertificateStatus status_of(Verdict v) {
  switch (v) {
    case Verdict::True: return CertificateStatus::Certified;
    case Verdict::False: return CertificateStatus::Refuted;
    case Verdict::Indeterminate: return CertificateStatus::Indeterminate;
  }
  return CertificateStatus::Indeterminate;
}

DiagonalScaling scaling_from_log(const std::vector<double>& u) {
  std::vector<double> d(u.size());
  std::transform(u.begin(), u.end(), d.begin(), [](double x) { return std::exp(x); });
  return DiagonalScaling(std::move(d), ScalingMode::Multiplicative);
}

// D A + A^T D = 2 Sym(DA).
RealMatrix lyapunov_form(const RealMatrix& a, const DiagonalScaling& d) {
  const RealMatrix da = d.scale_rows(a);
  return RealMatrix(Eigen::MatrixXd(da.mat() + da.mat().transpose()));
}

constexpr double kGolden = 0.6180339887498949;

// Coordinate descent in log space. Each coordinate gets a golden-section
// search on [u_i - width, u_i + width]; the width halves after a sweep that
// fails to improve, down to 1e-6. `eval` returns the objective and may set
// `stop` to end the search early.
template <class Eval>
std::vector<double> coordinate_descent(std::vector<double> u, double& best, std::size_t& budget,
                                       Eval&& eval, bool& stop) {
  constexpr int kLineEvals = 12;
  double width = 2.0;
  best = eval(u, stop);
  if (budget > 0) --budget;
  while (!stop && budget > 0 && width > 1e-6) {
    const double before = best;
    for (std::size_t i = 0; i < u.size() && !stop && budget > 0; ++i) {
      const double origin = u[i];
      double lo = origin - width;
      double hi = origin + width;
      auto probe = [&](double t) {
        u[i] = t;
        const double v = eval(u, stop);
        if (budget > 0) --budget;
        return v;
      };
      double x1 = hi - kGolden * (hi - lo);
      double x2 = lo + kGolden * (hi - lo);
      double f1 = probe(x1);
      double f2 = stop ? f1 : probe(x2);
      double best_t = origin;
      double best_f = best;
      auto note = [&](double t, double f) {
        if (f < best_f) {
          best_f = f;
          best_t = t;
        }
      };
      note(x1, f1);
      note(x2, f2);
      for (int it = 2; it < kLineEvals && !stop && budget > 0; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kGolden * (hi - lo);
          f1 = probe(x1);
          note(x1, f1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kGolden * (hi - lo);
          f2 = probe(x2);
          note(x2, f2);
        }
      }
      if (stop) {
        // eval left the feasible point in u
        return u;
      }
      u[i] = best_t;
      best = best_f;
    }
    if (!(best < before - 1e-12 * std::abs(before))) width *= 0.5;
  }
  return u;
}

std::size_t default_budget(const RealMatrix& a, const SearchOptions& opts) {
  return opts.budget > 0 ? opts.budget : 500 * a.n();
}

SectorAngle clamp_angle(double theta) {
  return SectorAngle::from_radians(std::clamp(theta, 0.0, std::nextafter(SectorAngle::kHalfPi, 0.0)));
}

}  // namespace

// ---------------------------------------------------------------------------

RealMatrix sector_lyapunov_matrix(const RealMatrix& a, const RealMatrix& h, SectorAngle theta) {
  require_open_sector(theta);
  if (a.n() != h.n()) throw Error(ErrorCode::Dimension, "H and A differ in size");
  const double s = std::sin(theta.value());
  const double c = std::cos(theta.value());
  const auto n = static_cast<Eigen::Index>(a.n());
  const Eigen::MatrixXd ha = h.mat() * a.mat();
  const Eigen::MatrixXd ath = a.mat().transpose() * h.mat();
  Eigen::MatrixXd w(2 * n, 2 * n);
  w.topLeftCorner(n, n) = s * ha + s * ath;
  w.topRightCorner(n, n) = c * ha - c * ath;
  w.bottomLeftCorner(n, n) = -c * ha + c * ath;
  w.bottomRightCorner(n, n) = s * ha + s * ath;
  return RealMatrix(std::move(w));
}

RealMatrix build_W(const RealMatrix& a, const DiagonalScaling& d, SectorAngle theta) {
  require_open_sector(theta);
  if (d.mode() != ScalingMode::Multiplicative) {
    throw Error(ErrorCode::InvalidArgument, "W requires a multiplicative (positive) scaling");
  }
  const RealMatrix da = d.scale_rows(a);
  const Eigen::MatrixXd sym = sym_part(da).mat();
  const Eigen::MatrixXd skew = skew_part(da).mat();
  const double s2 = 2.0 * std::sin(theta.value());
  const double c2 = 2.0 * std::cos(theta.value());
  const auto n = static_cast<Eigen::Index>(a.n());
  Eigen::MatrixXd w(2 * n, 2 * n);
  w.topLeftCorner(n, n) = s2 * sym;
  w.topRightCorner(n, n) = c2 * skew;
  w.bottomLeftCorner(n, n) = c2 * skew.transpose();
  w.bottomRightCorner(n, n) = s2 * sym;
  return RealMatrix(std::move(w));
}

double lambda_max(const RealMatrix& s) { return symmetric_eigenvalues(s).back(); }

Verdict is_negative_definite(const RealMatrix& s) {
  const auto ev = symmetric_eigenvalues(s);
  const double radius = std::max(std::abs(ev.front()), std::abs(ev.back()));
  return positive_verdict(-ev.back(), radius);
}

namespace {

void require_spd(const RealMatrix& h, const char* name) {
  if (!is_symmetric(h) || is_negative_definite(-h) != Verdict::True) {
    throw Error(ErrorCode::NotPositiveDefinite, std::string(name) + " is not symmetric positive definite");
  }
}

bool is_diagonal(const RealMatrix& m) {
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

}  // namespace

SectorCertificate check_sector_lyapunov(const RealMatrix& a, const RealMatrix& h, SectorAngle theta) {
  require_open_sector(theta);
  require_spd(h, "H");
  const RealMatrix w = sector_lyapunov_matrix(a, h, theta);
  SectorCertificate cert;
  cert.kind = CertificateKind::DiagonalSectorStable;
  if (is_diagonal(h)) {
    cert.d = DiagonalScaling(h.diagonal_entries(), ScalingMode::Multiplicative);
  } else {
    cert.note = "general symmetric positive definite H";
  }
  cert.theta = theta;
  cert.evidence["lambda_max_W"] = lambda_max(w);
  cert.status = status_of(is_negative_definite(w));
  if (cert.certified()) {
    for (const auto& z : eigenvalues(a).values) {
      if (!in_sector(z, theta)) {
        throw Error(ErrorCode::InternalConsistency,
                    "W(A, H) is negative definite but an eigenvalue of A lies outside the sector");
      }
    }
  }
  return cert;
}

std::optional<DiagonalScaling> find_lyapunov_diagonal(const RealMatrix& a, SearchOptions opts) {
  const std::size_t n = a.n();
  const std::size_t starts = 1 + opts.random_restarts;
  const std::size_t total = default_budget(a, opts);
  std::optional<DiagonalScaling> found;

  auto objective = [&](const std::vector<double>& u, bool& stop) {
    const DiagonalScaling d = scaling_from_log(u);
    const RealMatrix form = lyapunov_form(a, d);
    if (is_negative_definite(form) == Verdict::True) {
      found = d;
      stop = true;
    }
    const double dmax = *std::max_element(d.values().begin(), d.values().end());
    return lambda_max(form) / dmax;
  };

  std::size_t remaining = total;
  for (std::size_t start = 0; start < starts && remaining > 0; ++start) {
    std::vector<double> u(n, 0.0);
    if (start > 0) {
      Rng rng(derive_seed(opts.seed, start));
      for (auto& x : u) x = rng.uniform(-2.0, 2.0);
    }
    std::size_t budget = std::max<std::size_t>(1, total / starts);
    budget = std::min(budget, remaining);
    const std::size_t granted = budget;
    bool stop = false;
    double best = 0.0;
    coordinate_descent(std::move(u), best, budget, objective, stop);
    if (found) return found;
    remaining -= granted - budget;
  }
  return std::nullopt;
}

double skew_sym_ratio(const RealMatrix& a, const DiagonalScaling& d) {
  const RealMatrix da = d.scale_rows(a);
  const RealMatrix sym = sym_part(da);
  if (is_negative_definite(sym) != Verdict::True) {
    throw Error(ErrorCode::NotLyapunovScaling, "DA + A^T D is not negative definite");
  }
  return operator_norm(skew_part(da)) * symmetric_inverse_norm(sym);
}

SectorAngle theta_from_scaling(const RealMatrix& a, const DiagonalScaling& d) {
  const double theta = std::atan(skew_sym_ratio(a, d));
  const double probe = theta + 0.01;
  if (probe < SectorAngle::kHalfPi) {
    const Verdict v = is_negative_definite(build_W(a, d, SectorAngle::from_radians(probe)));
    if (v == Verdict::False) {
      throw Error(ErrorCode::InternalConsistency,
                  "W(A, D, theta + 0.01) is not negative definite for a Lyapunov scaling D");
    }
  }
  return clamp_angle(theta);
}

std::pair<DiagonalScaling, SectorAngle> optimize_theta(const RealMatrix& a, SearchOptions opts) {
  auto feasible = find_lyapunov_diagonal(a, opts);
  if (!feasible) {
    throw Error(ErrorCode::NotDiagonallyStable, "no Lyapunov diagonal scaling found within budget");
  }
  const std::size_t n = a.n();
  std::vector<double> u0(n);
  for (std::size_t i = 0; i < n; ++i) u0[i] = std::log((*feasible)[i]);

  auto ratio_at = [&a](const std::vector<double>& u) {
    const DiagonalScaling d = scaling_from_log(u);
    const RealMatrix da = d.scale_rows(a);
    const RealMatrix sym = sym_part(da);
    if (is_negative_definite(sym) != Verdict::True) return std::numeric_limits<double>::infinity();
    return operator_norm(skew_part(da)) * symmetric_inverse_norm(sym);
  };

  std::vector<double> best_u = u0;
  double best = ratio_at(u0);
  if (best > 0.0) {
    const std::size_t starts = 1 + opts.random_restarts;
    const std::size_t per_start = std::max<std::size_t>(1, default_budget(a, opts) / starts);
    for (std::size_t start = 0; start < starts; ++start) {
      std::vector<double> u = u0;
      if (start > 0) {
        Rng rng(derive_seed(opts.seed ^ 0x7e7aULL, start));
        for (auto& x : u) x += rng.uniform(-0.5, 0.5);
        if (!std::isfinite(ratio_at(u))) continue;
      }
      std::size_t budget = per_start;
      bool stop = false;
      double value = 0.0;
      auto eval = [&](const std::vector<double>& x, bool&) { return ratio_at(x); };
      u = coordinate_descent(std::move(u), value, budget, eval, stop);
      // Minimum over restarts; ties keep the earlier restart.
      if (value < best) {
        best = value;
        best_u = u;
      }
      if (best == 0.0) break;
    }
  }
  DiagonalScaling d = scaling_from_log(best_u);
  return {d, clamp_angle(std::atan(best))};
}

NormalTheta theta_for_normal_pd_detail(const RealMatrix& a) {
  const RealMatrix sym = sym_part(a);
  if (is_negative_definite(-sym) != Verdict::True) {
    throw Error(ErrorCode::NotPositiveDefinite, "Sym(A) is not positive definite");
  }
  const Eigen::MatrixXd& m = a.mat();
  const double norm_a = operator_norm(a);
  const double commutator = operator_norm(RealMatrix(Eigen::MatrixXd(m * m.transpose() - m.transpose() * m)));
  if (!(commutator < 1e-8 * norm_a * norm_a)) {
    throw Error(ErrorCode::NotNormal, "A is not normal: ||AA^T - A^T A|| = " + std::to_string(commutator));
  }
  double max_im = 0.0;
  double min_re = std::numeric_limits<double>::infinity();
  for (const auto& z : eigenvalues(a).values) {
    max_im = std::max(max_im, std::abs(z.imag()));
    min_re = std::min(min_re, std::abs(z.real()));
  }
  const double normal = std::atan(max_im / min_re);
  const double general = std::atan(operator_norm(skew_part(a)) * symmetric_inverse_norm(sym));
  if (normal > general + 1e-8) {
    throw Error(ErrorCode::InternalConsistency,
                "spectral sector estimate exceeds the norm-based estimate for a normal matrix");
  }
  return {clamp_angle(normal), clamp_angle(general)};
}

SectorAngle theta_for_normal_pd(const RealMatrix& a) { return theta_for_normal_pd_detail(a).theta; }

SectorAngle theta_for_dd(const RealMatrix& a) {
  const auto row = is_strict_row_dd(a);
  if (!row.is_true()) {
    const std::size_t i = row.witness.empty() ? 0 : row.witness.front();
    throw Error(ErrorCode::NotDominant, "row " + std::to_string(i) + " is not strictly dominant", i);
  }
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (!(a(i, i) < 0.0)) {
      throw Error(ErrorCode::WrongDiagonalSign, "diagonal entry " + std::to_string(i) + " is not negative", i);
    }
  }
  const auto s = dominance_ratios(a);
  const double theta = std::asin(*std::max_element(s.begin(), s.end()));
  const double probe = theta + 0.01;
  if (probe < SectorAngle::kHalfPi && !is_sector_dd(a, SectorAngle::from_radians(probe)).is_true()) {
    throw Error(ErrorCode::InternalConsistency, "matrix is not sector dominant just above arcsin(max s_i)");
  }
  return clamp_angle(theta);
}

SectorAngle theta_for_q2(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  const double pi = 2.0 * SectorAngle::kHalfPi;
  return SectorAngle::from_radians(pi / 2.0 - pi / (2.0 * static_cast<double>(n)));
}

Verdict block_pd_norm_test(const RealMatrix& a, const RealMatrix& b, const RealMatrix& x) {
  require_spd(a, "A");
  require_spd(b, "B");
  if (a.n() != b.n() || a.n() != x.n()) throw Error(ErrorCode::Dimension, "block sizes differ");
  const double bound = 1.0 / std::sqrt(symmetric_inverse_norm(a) * symmetric_inverse_norm(b));
  const Verdict v = positive_verdict(bound - operator_norm(x), bound);
  if (v == Verdict::True) {
    const auto n = static_cast<Eigen::Index>(a.n());
    Eigen::MatrixXd block(2 * n, 2 * n);
    block << a.mat(), x.mat(), x.mat().transpose(), b.mat();
    if (is_negative_definite(RealMatrix(Eigen::MatrixXd(-block))) == Verdict::False) {
      throw Error(ErrorCode::InternalConsistency,
                  "norm condition holds but the block matrix is not positive definite");
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Certificate constructors

namespace {

SectorCertificate refuted(CertificateKind kind, const std::string& why) {
  SectorCertificate cert;
  cert.kind = kind;
  cert.status = CertificateStatus::Refuted;
  cert.note = why;
  return cert;
}

std::optional<SectorAngle> widened(double theta_inf, double margin = kCertificateMargin) {
  const double t = theta_inf + margin;
  if (!(t < SectorAngle::kHalfPi)) return std::nullopt;
  return SectorAngle::from_radians(t);
}

}  // namespace

SectorCertificate check_diagonal_sector(const RealMatrix& a, const DiagonalScaling& d, SectorAngle theta) {
  const RealMatrix w = build_W(a, d, theta);
  SectorCertificate cert;
  cert.kind = CertificateKind::DiagonalSectorStable;
  cert.d = d;
  cert.theta = theta;
  cert.evidence["lambda_max_W"] = lambda_max(w);
  cert.status = status_of(is_negative_definite(w));
  return cert;
}

SectorCertificate dominance_certificate(const RealMatrix& a) {
  SectorAngle inf = SectorAngle::half_plane();
  try {
    inf = theta_for_dd(a);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDominant && e.code() != ErrorCode::WrongDiagonalSign) throw;
    return refuted(CertificateKind::SectorDominant, e.what());
  }
  const auto s = dominance_ratios(a);
  SectorCertificate cert;
  cert.kind = CertificateKind::SectorDominant;
  cert.evidence["s_max"] = *std::max_element(s.begin(), s.end());
  cert.evidence["theta_inf"] = inf.value();
  const auto theta = widened(inf.value());
  if (!theta) {
    cert.note = "dominance ratio too close to 1 to widen the sector";
    return cert;
  }
  cert.theta = *theta;
  cert.status = is_sector_dd(a, *theta).is_true() ? CertificateStatus::Certified
                                                  : CertificateStatus::Indeterminate;
  return cert;
}

SectorCertificate normal_pd_certificate(const RealMatrix& a) {
  const RealMatrix neg = -a;
  NormalTheta nt{SectorAngle::half_plane(), SectorAngle::half_plane()};
  try {
    nt = theta_for_normal_pd_detail(neg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotNormal && e.code() != ErrorCode::NotPositiveDefinite) throw;
    return refuted(CertificateKind::NormalPD, e.what());
  }
  const auto theta = widened(nt.theta.value());
  SectorCertificate cert;
  cert.kind = CertificateKind::NormalPD;
  cert.evidence["theta_inf"] = nt.theta.value();
  cert.evidence["norm_skew"] = operator_norm(skew_part(neg));
  cert.evidence["norm_sym_inv"] = symmetric_inverse_norm(sym_part(neg));
  if (!theta) {
    cert.note = "spectral sector too close to the imaginary axis to widen";
    return cert;
  }
  const auto check = check_diagonal_sector(a, DiagonalScaling::identity(a.n()), *theta);
  cert.d = check.d;
  cert.theta = *theta;
  cert.evidence["lambda_max_W"] = check.evidence.at("lambda_max_W");
  cert.status = check.status;
  return cert;
}

SectorCertificate lyapunov_certificate(const RealMatrix& a, SearchOptions opts) {
  SectorCertificate cert;
  cert.kind = CertificateKind::DiagonallyStable;
  cert.theta = SectorAngle::half_plane();
  auto d = find_lyapunov_diagonal(a, opts);
  if (!d) {
    cert.status = CertificateStatus::Indeterminate;
    cert.note = "no Lyapunov diagonal scaling found within the search budget";
    return cert;
  }
  const RealMatrix form = lyapunov_form(a, *d);
  cert.d = *d;
  cert.evidence["lambda_max_lyapunov"] = lambda_max(form);
  cert.status = status_of(is_negative_definite(form));
  return cert;
}

SectorCertificate diagonal_sector_certificate(const RealMatrix& a, SearchOptions opts) {
  std::optional<std::pair<DiagonalScaling, SectorAngle>> found;
  try {
    found = optimize_theta(a, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDiagonallyStable) throw;
    SectorCertificate cert;
    cert.kind = CertificateKind::DiagonalSectorStable;
    cert.status = CertificateStatus::Indeterminate;
    cert.note = e.what();
    return cert;
  }
  const auto& [d, inf] = *found;
  const RealMatrix da = d.scale_rows(a);
  SectorCertificate cert;
  cert.kind = CertificateKind::DiagonalSectorStable;
  cert.d = d;
  cert.evidence["theta_inf"] = inf.value();
  cert.evidence["norm_skew"] = operator_norm(skew_part(da));
  cert.evidence["norm_sym_inv"] = symmetric_inverse_norm(sym_part(da));
  for (double margin : {kCertificateMargin, 0.01}) {
    const auto theta = widened(inf.value(), margin);
    if (!theta) break;
    const auto check = check_diagonal_sector(a, d, *theta);
    cert.theta = *theta;
    cert.evidence["lambda_max_W"] = check.evidence.at("lambda_max_W");
    cert.status = check.status;
    if (cert.certified()) return cert;
  }
  if (!cert.certified()) {
    cert.status = CertificateStatus::Indeterminate;
    cert.note = "W(A, D, theta) not certified just above the estimate";
  }
  return cert;
}

Q2Hypothesis check_q2_hypothesis(const RealMatrix& a, std::size_t samples, std::uint64_t seed) {
  if (!is_P_matrix(a).is_true()) throw Error(ErrorCode::NotPMatrix, "matrix is not a P-matrix");
  const std::size_t n = a.n();
  Q2Hypothesis out;
  if (n == 1 || is_diagonal(a)) {
    out.status = HypothesisStatus::Exact;
    out.detail = "(DA)^2 is a positive diagonal matrix for every D";
    return out;
  }
  if (n == 2) {
    const bool holds = determinant(a) < 2.0 * a(0, 0) * a(1, 1);
    out.status = holds ? HypothesisStatus::Exact : HypothesisStatus::Failed;
    out.detail = holds ? "det A < 2 a11 a22" : "det A >= 2 a11 a22";
    return out;
  }
  out.samples = samples;
  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, t));
    std::vector<double> d(n);
    for (auto& x : d) x = std::exp(rng.uniform(-3.0, 3.0));
    const RealMatrix da = DiagonalScaling(std::move(d), ScalingMode::Multiplicative).scale_rows(a);
    const Verdict v = is_Q_matrix(da * da).verdict;
    if (v == Verdict::False) {
      out.status = HypothesisStatus::Failed;
      out.detail = "(DA)^2 is not a Q-matrix for sampled scaling " + std::to_string(t);
      return out;
    }
    if (v == Verdict::Indeterminate) ++out.indeterminate;
  }
  out.status = HypothesisStatus::Sampled;
  out.detail = "(DA)^2 passed the Q test for every sampled scaling";
  return out;
}

SectorCertificate q2_certificate(const RealMatrix& a) {
  const RealMatrix neg = -a;
  if (!is_P_matrix(neg).is_true()) return refuted(CertificateKind::Q2Scaling, "-A is not a P-matrix");
  const auto hyp = check_q2_hypothesis(neg);
  SectorCertificate cert;
  cert.kind = CertificateKind::Q2Scaling;
  cert.theta = theta_for_q2(a.n());
  cert.note = hyp.detail;
  switch (hyp.status) {
    case HypothesisStatus::Exact: cert.status = CertificateStatus::Certified; break;
    case HypothesisStatus::Sampled: cert.status = CertificateStatus::Indeterminate; break;
    case HypothesisStatus::Failed: cert.status = CertificateStatus::Refuted; break;
  }
  return cert;
}

}  // namespace dstab
