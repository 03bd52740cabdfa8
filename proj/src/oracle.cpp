#include "dstab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>

#include "dstab/predicates.hpp"
#include "dstab/random.hpp"

namespace dstab {

DiagonalScaling draw_scaling(std::size_t n, ScalingMode mode, std::uint64_t seed, std::size_t index) {
  Rng rng(derive_seed(seed, index));
  std::vector<double> d(n);
  for (auto& x : d) {
    const double u = rng.uniform(-6.0, 6.0);
    if (mode == ScalingMode::Multiplicative) {
      x = std::exp(u);
    } else {
      const bool zero = rng.bernoulli(0.2);
      x = zero ? 0.0 : std::max(0.0, std::exp(u) - std::exp(-6.0));
    }
  }
  return DiagonalScaling(std::move(d), mode);
}

namespace {

RealMatrix apply_scaling(const RealMatrix& a, const DiagonalScaling& d) {
  if (d.mode() == ScalingMode::Multiplicative) return d.scale_rows(a);
  Eigen::MatrixXd m = a.mat();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    m(k, k) -= d[i];
  }
  return RealMatrix(std::move(m));
}

struct Partial {
  std::size_t violations = 0;
  double worst = SectorAngle::kHalfPi;
};

Partial run_trials(const RealMatrix& a, SectorAngle theta, ScalingMode mode, std::uint64_t seed,
                   std::size_t begin, std::size_t end) {
  Partial p;
  for (std::size_t t = begin; t < end; ++t) {
    const auto d = draw_scaling(a.n(), mode, seed, t);
    double trial_worst = SectorAngle::kHalfPi;
    for (const auto& z : eigenvalues(apply_scaling(a, d)).values) {
      trial_worst = std::min(trial_worst, sector_slack(z, theta));
    }
    if (trial_worst < 0.0) ++p.violations;
    p.worst = std::min(p.worst, trial_worst);
  }
  return p;
}

}  // namespace

SamplingReport sample_scalings(const RealMatrix& a, SectorAngle theta, ScalingMode mode, std::size_t trials,
                               std::uint64_t seed, SamplingOptions opts) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const std::size_t workers = std::clamp<std::size_t>(opts.threads, 1, trials);
  std::vector<Partial> parts(workers);
  if (workers == 1) {
    parts[0] = run_trials(a, theta, mode, seed, 0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::size_t begin = trials * w / workers;
          const std::size_t end = trials * (w + 1) / workers;
          parts[w] = run_trials(a, theta, mode, seed, begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  SamplingReport r;
  r.trials = trials;
  r.seed = seed;
  r.mode = mode;
  r.theta = theta;
  r.worst_margin = SectorAngle::kHalfPi;
  for (const auto& p : parts) {
    r.violations += p.violations;
    r.worst_margin = std::min(r.worst_margin, p.worst);
  }
  return r;
}

void write_spectrum_csv(std::ostream& out, const RealMatrix& a, SectorAngle theta, ScalingMode mode,
                        std::size_t trials, std::uint64_t seed) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "trial,d,re,im,slack\n";
  for (std::size_t t = 0; t < trials; ++t) {
    const auto d = draw_scaling(a.n(), mode, seed, t);
    std::string dv;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i) dv += ';';
      dv += num(d[i]);
    }
    for (const auto& z : eigenvalues(apply_scaling(a, d)).values) {
      out << t << ',' << dv << ',' << num(z.real()) << ',' << num(z.imag()) << ','
          << num(sector_slack(z, theta)) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

void require_expansion_args(const RealMatrix& a, const DiagonalScaling& d) {
  if (a.n() > 12) {
    throw Error(ErrorCode::DimensionTooLarge, "subset expansion is limited to n <= 12; got n = " + std::to_string(a.n()));
  }
  if (d.size() != a.n()) throw Error(ErrorCode::Dimension, "scaling size differs from matrix size");
  if (d.mode() != ScalingMode::Additive) throw Error(ErrorCode::InvalidArgument, "expansion needs an additive D");
}

template <class Visit>
void for_each_expansion_term(const RealMatrix& a, const DiagonalScaling& d, Visit&& visit) {
  const std::uint32_t full = (1u << a.n()) - 1;
  for (std::uint32_t picked = 0; picked <= full; ++picked) {
    double weight = 1.0;
    for (std::size_t i = 0; i < a.n(); ++i)
      if (picked & (1u << i)) weight *= d[i];
    if (weight == 0.0) {
      visit(0.0);
      continue;
    }
    visit(weight * principal_minor(a, full & ~picked));
  }
}

}  // namespace

double expansion_det_sum(const RealMatrix& a, const DiagonalScaling& d) {
  require_expansion_args(a, d);
  double total = 0.0;
  for_each_expansion_term(a, d, [&total](double term) { total += term; });
  return total;
}

double expansion_abs_sum(const RealMatrix& a, const DiagonalScaling& d) {
  require_expansion_args(a, d);
  double total = 0.0;
  for_each_expansion_term(a, d, [&total](double term) { total += std::abs(term); });
  return total;
}

SuperadditivityReport verify_superadditivity(const RealMatrix& a, std::size_t trials, std::uint64_t seed) {
  if (a.n() > 12) throw Error(ErrorCode::DimensionTooLarge, "superadditivity check is limited to n <= 12");
  if (!is_P0_matrix(a).is_true()) throw Error(ErrorCode::NotP0Matrix, "matrix is not a P0-matrix");
  SuperadditivityReport r;
  r.trials = trials;
  r.worst_slack = std::numeric_limits<double>::infinity();
  const double det_a = determinant(a);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    std::vector<double> dv(a.n());
    for (auto& x : dv) x = rng.bernoulli(0.2) ? 0.0 : std::exp(rng.uniform(-3.0, 3.0));
    const DiagonalScaling d(std::move(dv), ScalingMode::Additive);
    const double det_sum = determinant(a + d.matrix());
    const double expansion = expansion_det_sum(a, d);
    const double scale = std::max({std::abs(det_sum), expansion_abs_sum(a, d), std::abs(det_a) + d.product()});
    if (std::abs(expansion - det_sum) > 1e-9 * scale) ++r.expansion_mismatches;
    const double slack = det_sum - det_a - d.product();
    if (slack < -1e-9 * scale) ++r.violations;
    r.worst_slack = std::min(r.worst_slack, scale > 0.0 ? slack / scale : 0.0);
  }
  if (trials == 0) r.worst_slack = 0.0;
  return r;
}

// ---------------------------------------------------------------------------

bool ClosureReport::all_pass() const {
  if (premise.violations != 0) return false;
  return std::all_of(closures.begin(), closures.end(), [](const auto& c) { return c.second.violations == 0; });
}

ClosureReport closure_checks(const RealMatrix& a, SectorAngle theta, std::size_t trials, std::uint64_t seed,
                             SamplingOptions opts) {
  const auto mode = ScalingMode::Additive;
  ClosureReport report;
  report.premise = sample_scalings(a, theta, mode, trials, seed, opts);
  if (report.premise.violations != 0) {
    throw Error(ErrorCode::PremiseFailed, "A itself is not sector stable under sampled additive scalings");
  }
  const std::size_t n = a.n();
  Rng rng(derive_seed(seed, 0xc105ULL));

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(i)) = 1.0;

  Eigen::VectorXd e(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = std::exp(rng.uniform(-3.0, 3.0));
  std::vector<double> shift(n);
  for (auto& x : shift) x = rng.bernoulli(0.2) ? 0.0 : std::exp(rng.uniform(-3.0, 3.0));

  const Eigen::MatrixXd& m = a.mat();
  const std::vector<std::pair<std::string, RealMatrix>> variants = {
      {"transpose", a.transpose()},
      {"permutation", RealMatrix(Eigen::MatrixXd(p.transpose() * m * p))},
      {"diagonal_similarity", RealMatrix(Eigen::MatrixXd(e.asDiagonal() * m * e.cwiseInverse().asDiagonal()))},
      {"diagonal_shift", a - RealMatrix::diagonal(shift)},
      {"scale_0.1", 0.1 * a},
      {"scale_1", a},
      {"scale_7", 7.0 * a},
  };
  std::uint64_t k = 1;
  for (const auto& [name, variant] : variants) {
    report.closures.emplace_back(name, sample_scalings(variant, theta, mode, trials, derive_seed(seed, k++), opts));
  }
  return report;
}

// ---------------------------------------------------------------------------

TwoByTwoReport two_by_two_equivalence(const RealMatrix& a, std::size_t grid_size) {
  if (a.n() != 2) throw Error(ErrorCode::Dimension, "two_by_two_equivalence needs a 2 x 2 matrix");
  if (!is_P_matrix(a).is_true()) throw Error(ErrorCode::NotPMatrix, "matrix is not a P-matrix");
  const double a11 = a(0, 0), a12 = a(0, 1), a21 = a(1, 0), a22 = a(1, 1);

  TwoByTwoReport r;
  r.criterion_det = determinant(a) < 2.0 * a11 * a22;

  bool all_positive = true;
  r.min_normalized_trace = std::numeric_limits<double>::infinity();
  auto test_point = [&](double d1, double d2) {
    Eigen::Matrix2d da;
    da << d1 * a11, d1 * a12, d2 * a21, d2 * a22;
    const Eigen::Matrix2d sq = da * da;
    const double tr = sq.trace();
    const double det = sq.determinant();
    r.min_normalized_trace = std::min(r.min_normalized_trace, tr / (d1 * a11 * d2 * a22));
    ++r.points;
    if (!(tr > 0.0) || !(det > 0.0)) all_positive = false;
    return tr;
  };

  const std::size_t g = std::max<std::size_t>(grid_size, 2);
  for (std::size_t i = 0; i < g; ++i) {
    const double d1 = std::exp(-8.0 + 16.0 * static_cast<double>(i) / static_cast<double>(g - 1));
    for (std::size_t j = 0; j < g; ++j) {
      const double d2 = std::exp(-8.0 + 16.0 * static_cast<double>(j) / static_cast<double>(g - 1));
      test_point(d1, d2);
    }
  }
  // d11 a11 = d22 a22 minimizes tr((DA)^2) / (d11 a11 d22 a22).
  r.analytic_trace = test_point(1.0 / a11, 1.0 / a22);
  r.criterion_grid = all_positive;
  return r;
}

}  // namespace dstab
