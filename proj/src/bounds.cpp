#include "dstab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dstab/predicates.hpp"

namespace dstab {

namespace {

double diagonal_product(const RealMatrix& a) {
  double p = 1.0;
  for (std::size_t i = 0; i < a.n(); ++i) p *= a(i, i);
  return p;
}

void require_positive_diagonal(const RealMatrix& a) {
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (!(a(i, i) > 0.0)) {
      throw Error(ErrorCode::NonpositiveDiagonal, "diagonal entry " + std::to_string(i) + " is not positive", i);
    }
  }
}

double half_n(const RealMatrix& a) { return 0.5 * static_cast<double>(a.n()); }

}  // namespace

AmGmResult complex_amgm(std::span<const std::complex<double>> z, SectorAngle theta) {
  if (z.empty()) throw Error(ErrorCode::InvalidArgument, "empty tuple");
  const double c = theta.cos();
  double log_sum = 0.0;
  bool has_zero = false;
  double max_abs = 0.0;
  std::complex<double> sum{};
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double arg = std::atan2(std::abs(z[i].imag()), z[i].real());
    if (arg > theta.value() + 1e-12) {
      throw Error(ErrorCode::ArgOutOfSector, "|arg z_" + std::to_string(i) + "| exceeds theta", i);
    }
    const double m = std::abs(z[i]);
    max_abs = std::max(max_abs, m);
    if (m == 0.0) {
      has_zero = true;
    } else {
      log_sum += std::log(m);
    }
    sum += z[i];
  }
  const double n = static_cast<double>(z.size());
  AmGmResult out;
  out.geometric_mean = has_zero ? 0.0 : std::exp(log_sum / n);
  out.bound = std::abs(sum) / (n * c);
  const double scale = std::max({out.geometric_mean, out.bound, max_abs});
  out.holds = out.bound - out.geometric_mean >= -1e-10 * scale;
  return out;
}

bool complex_amgm_check(std::span<const std::complex<double>> z, SectorAngle theta) {
  return complex_amgm(z, theta).holds;
}

double hadamard_classic(const RealMatrix& a) {
  if (!is_symmetric(a) || is_negative_definite(-a) != Verdict::True) {
    throw Error(ErrorCode::NotPositiveDefinite, "matrix is not symmetric positive definite");
  }
  return diagonal_product(a);
}

double sector_hadamard(const RealMatrix& a, SectorAngle theta) {
  const double c = theta.cos();
  require_positive_diagonal(a);
  return diagonal_product(a) / std::pow(c, static_cast<double>(a.n()));
}

double additive_sector_hadamard(const RealMatrix& a, SectorAngle theta) {
  const double c = theta.cos();
  const auto diag = a.diagonal_entries();
  const double top = *std::max_element(diag.begin(), diag.end());
  if (!(top > 0.0)) throw Error(ErrorCode::NonpositiveMaxDiagonal, "largest diagonal entry is not positive");
  return std::pow(top / c, static_cast<double>(a.n()));
}

double tan_form_bound(const RealMatrix& a, double tan_theta) {
  return std::pow(tan_theta * tan_theta + 1.0, half_n(a)) * diagonal_product(a);
}

DiagStableBound diag_stable_bound_detail(const RealMatrix& a, SearchOptions opts) {
  require_positive_diagonal(a);
  auto [d, theta] = optimize_theta(-a, opts);
  const double value = tan_form_bound(a, std::tan(theta.value()));
  return {value, std::move(d), theta};
}

double diag_stable_bound(const RealMatrix& a, SearchOptions opts) {
  return diag_stable_bound_detail(a, opts).value;
}

NormalPdBound normal_pd_bound(const RealMatrix& a) {
  const auto nt = theta_for_normal_pd_detail(a);
  (void)nt;
  double max_im = 0.0;
  double min_re = std::numeric_limits<double>::infinity();
  for (const auto& z : eigenvalues(a).values) {
    max_im = std::max(max_im, std::abs(z.imag()));
    min_re = std::min(min_re, std::abs(z.real()));
  }
  const double general_ratio = operator_norm(skew_part(a)) * symmetric_inverse_norm(sym_part(a));
  return {tan_form_bound(a, max_im / min_re), tan_form_bound(a, general_ratio)};
}

double dd_bound(const RealMatrix& a) {
  if (!is_strict_row_dd(a).is_true()) throw Error(ErrorCode::NotDominant, "matrix is not strictly row dominant");
  require_positive_diagonal(a);
  const auto s = dominance_ratios(a);
  const double smax = *std::max_element(s.begin(), s.end());
  return diagonal_product(a) / std::pow(1.0 - smax * smax, half_n(a));
}

double doubly_dd_bound(const RealMatrix& a) {
  if (!is_doubly_dd(a).is_true()) throw Error(ErrorCode::NotDominant, "matrix is not doubly dominant");
  require_positive_diagonal(a);
  const double ratio = operator_norm(skew_part(a)) * symmetric_inverse_norm(sym_part(a));
  return tan_form_bound(a, ratio);
}

Q2Bound q2_bound(const RealMatrix& a, std::size_t samples, std::uint64_t seed) {
  auto hyp = check_q2_hypothesis(a, samples, seed);
  if (hyp.status == HypothesisStatus::Failed) throw Error(ErrorCode::HypothesisFailed, hyp.detail);
  const double n = static_cast<double>(a.n());
  const double s = std::sin(SectorAngle::kHalfPi / n);
  return {diagonal_product(a) / std::pow(s, n), std::move(hyp)};
}

// ---------------------------------------------------------------------------

namespace {

BoundEntry not_applicable(std::string why) {
  BoundEntry e;
  e.note = std::move(why);
  return e;
}

// Runs `body`; precondition failures become a non-applicable entry.
BoundEntry guarded(const std::function<BoundEntry()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InternalConsistency) throw;
    return not_applicable(std::string(to_string(e.code())) + ": " + e.what());
  }
}

const SectorCertificate* narrowest(std::initializer_list<const SectorCertificate*> certs) {
  const SectorCertificate* best = nullptr;
  for (const auto* c : certs) {
    if (!c->certified() || c->theta.is_half_plane()) continue;
    if (!best || c->theta.value() < best->theta.value()) best = c;
  }
  return best;
}

}  // namespace

BoundReport best_bound(const RealMatrix& a, SearchOptions opts) {
  BoundReport report;
  report.det_exact = determinant(a);
  const RealMatrix neg = -a;

  // Sector certificates for -A, cheapest first.
  const SectorCertificate dom = dominance_certificate(neg);
  const SectorCertificate normal = normal_pd_certificate(neg);
  const SectorCertificate diag = diagonal_sector_certificate(neg, opts);
  SectorCertificate q2{};
  q2.kind = CertificateKind::Q2Scaling;
  q2.status = CertificateStatus::Refuted;
  if (a.n() <= 20) q2 = q2_certificate(neg);

  report.bounds["hadamard"] = guarded([&] {
    BoundEntry e;
    e.value = hadamard_classic(a);
    e.applicable = true;
    bool diagonal = true;
    for (std::size_t i = 0; i < a.n(); ++i)
      for (std::size_t j = 0; j < a.n(); ++j)
        if (i != j && std::abs(a(i, j)) >= 1e-12) diagonal = false;
    e.note = diagonal ? "equality: matrix is diagonal" : "strict: matrix is not diagonal";
    return e;
  });

  report.bounds["sector"] = guarded([&] {
    const SectorCertificate* cert = narrowest({&dom, &normal, &diag, &q2});
    if (!cert) return not_applicable("no certified sector for -A");
    BoundEntry e;
    e.value = sector_hadamard(a, cert->theta);
    e.theta_used = cert->theta;
    e.certificate = *cert;
    e.applicable = true;
    return e;
  });

  report.bounds["additive_sector"] = guarded([&] {
    const SectorCertificate* cert = narrowest({&dom, &normal, &diag});
    if (!cert) return not_applicable("no certified additive sector for -A");
    BoundEntry e;
    e.value = additive_sector_hadamard(a, cert->theta);
    e.theta_used = cert->theta;
    e.certificate = *cert;
    e.applicable = true;
    if (a.n() <= 20) e.note = "P0+ check of A: " + std::string(to_string(is_P0_plus(a).verdict));
    return e;
  });

  report.bounds["diag_stable"] = guarded([&] {
    const auto r = diag_stable_bound_detail(a, opts);
    BoundEntry e;
    e.value = r.value;
    e.theta_used = r.theta;
    if (diag.certified()) e.certificate = diag;
    e.applicable = true;
    return e;
  });

  report.bounds["normal_pd"] = guarded([&] {
    const auto r = normal_pd_bound(a);
    BoundEntry e;
    e.value = r.value;
    e.theta_used = theta_for_normal_pd(a);
    if (normal.certified()) e.certificate = normal;
    e.applicable = true;
    e.note = "norm-based variant: " + std::to_string(r.general);
    return e;
  });

  report.bounds["row_dd"] = guarded([&] {
    BoundEntry e;
    e.value = dd_bound(a);
    const auto s = dominance_ratios(a);
    e.theta_used = SectorAngle::from_radians(std::asin(*std::max_element(s.begin(), s.end())));
    if (dom.certified()) e.certificate = dom;
    e.applicable = true;
    return e;
  });

  report.bounds["doubly_dd"] = guarded([&] {
    BoundEntry e;
    e.value = doubly_dd_bound(a);
    e.applicable = true;
    return e;
  });

  report.bounds["q2"] = guarded([&] {
    const auto r = q2_bound(a);
    BoundEntry e;
    e.value = r.value;
    e.theta_used = theta_for_q2(a.n());
    e.note = std::string("hypothesis ") + std::string(to_string(r.hypothesis.status)) + ": " + r.hypothesis.detail;
    e.applicable = r.hypothesis.status == HypothesisStatus::Exact;
    if (q2.certified()) e.certificate = q2;
    return e;
  });

  for (const auto& [name, entry] : report.bounds) {
    if (!entry.applicable || !entry.value) {
      report.tightness[name] = std::nullopt;
      continue;
    }
    const double v = *entry.value;
    report.tightness[name] =
        (v > 0.0 && report.det_exact > 0.0) ? std::optional<double>(report.det_exact / v) : std::nullopt;
    if (report.det_exact > 0.0 && report.det_exact > v * (1.0 + 1e-9)) report.violations.push_back(name);
  }
  return report;
}

}  // namespace dstab
