// Acceptance suite: one PASS/FAIL line per criterion, each with its runtime
// limit. Expected values come from the reference routines in oracles.hpp.

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "dstab/bounds.hpp"
#include "dstab/certificates.hpp"
#include "dstab/cli.hpp"
#include "dstab/oracle.hpp"
#include "dstab/predicates.hpp"
#include "oracles.hpp"

using namespace dstab;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome r{false, ""};
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= limit_s;
  const bool pass = r.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s AC%d %s: %s (%.2fs / limit %.0fs%s)\n", pass ? "PASS" : "FAIL", id, name, r.detail.c_str(), secs,
              limit_s, in_time ? "" : ", over time");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Symmetric positive semidefinite part plus a skew part: always P0.
RealMatrix random_p0(Rng& rng, std::size_t n) {
  const std::size_t rank = rng.below(n + 1);
  std::vector<double> b(n * std::max<std::size_t>(rank, 1), 0.0);
  for (auto& x : b) x = rank ? rng.uniform(-1, 1) : 0.0;
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rank; ++k) s += b[i * rank + k] * b[j * rank + k];
      v[i * n + j] = s;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = rng.uniform(-1, 1);
      v[i * n + j] += k;
      v[j * n + i] -= k;
    }
  return RealMatrix(n, v);
}

Outcome hadamard_classical() {
  Rng rng(1001);
  std::size_t violations = 0, equality_mismatch = 0, diagonal_cases = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + rng.below(7);
    RealMatrix a = oracle::random_spd(rng, n);
    const bool diagonal = t % 10 == 0;
    if (diagonal) {
      a = RealMatrix::diagonal(a.diagonal_entries());
      ++diagonal_cases;
    }
    const double det = oracle::cofactor_det(a);
    const double bound = hadamard_classic(a);
    if (det > bound * (1.0 + 1e-9)) ++violations;
    const bool equal = std::abs(bound - det) <= 1e-9 * bound;
    if (equal != diagonal) ++equality_mismatch;
  }
  return {violations == 0 && equality_mismatch == 0,
          fmt("10000 matrices (%zu diagonal), %zu violations, %zu equality mismatches", diagonal_cases, violations,
              equality_mismatch)};
}

Outcome sector_hadamard_dominant() {
  Rng rng(1002);
  std::size_t violations = 0, disagreements = 0;
  double worst_agree = 0.0, worst_margin_shift = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(7);
    const auto a = oracle::random_row_dominant(rng, n);
    const auto s = dominance_ratios(a);
    const double smax = *std::max_element(s.begin(), s.end());
    const double det = oracle::cofactor_det(a);
    const double inf = std::asin(smax);
    const double with_margin = sector_hadamard(a, SectorAngle::from_radians(inf + 1e-6));
    if (det > with_margin * (1.0 + 1e-9)) ++violations;
    // The dominance bound is the sector bound at the infimum angle.
    const double eq = dd_bound(a);
    const double at_inf = sector_hadamard(a, SectorAngle::from_radians(inf));
    const double rel = std::abs(at_inf - eq) / eq;
    worst_agree = std::max(worst_agree, rel);
    worst_margin_shift = std::max(worst_margin_shift, (with_margin - eq) / eq);
    if (rel > 1e-6) ++disagreements;
  }
  return {violations == 0 && disagreements == 0,
          fmt("1000 matrices, %zu violations at +1e-6; agreement with the dominance bound worst %.2e "
              "(%zu over 1e-6); margin shifts the bound by at most %.2e",
              violations, worst_agree, disagreements, worst_margin_shift)};
}

Outcome expansion_identity() {
  Rng rng(1003);
  std::size_t mismatches = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(8);
    const auto a = oracle::random_matrix(rng, n);
    std::vector<double> dv(n);
    for (auto& x : dv) x = rng.bernoulli(0.2) ? 0.0 : std::exp(rng.uniform(-3, 3));
    const DiagonalScaling d(dv, ScalingMode::Additive);
    const double ref = oracle::cofactor_det(a + d.matrix());
    const double rel = std::abs(expansion_det_sum(a, d) - ref) / std::abs(ref);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-9)) ++mismatches;
  }
  return {mismatches == 0, fmt("1000 pairs, worst relative error %.2e, %zu over 1e-9", worst, mismatches)};
}

Outcome superadditivity() {
  Rng rng(1004);
  std::size_t violations = 0, mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_p0(rng, 2 + rng.below(5));
    const auto r = verify_superadditivity(a, 10, derive_seed(1004, static_cast<std::uint64_t>(t)));
    violations += r.violations;
    mismatches += r.expansion_mismatches;
  }
  return {violations == 0, fmt("1000 P0 matrices x 10 scalings, %zu violations (%zu expansion mismatches)",
                               violations, mismatches)};
}

Outcome commutation() {
  Rng rng(1005);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const auto a = oracle::random_matrix(rng, n);
    std::vector<double> d(n), d0(n), ratio(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = std::exp(rng.uniform(-2, 2));
      d0[i] = std::exp(rng.uniform(-2, 2));
      ratio[i] = d0[i] / d[i];
    }
    const auto th = SectorAngle::from_radians(rng.uniform(0.01, 1.56));
    const DiagonalScaling dd(d, ScalingMode::Multiplicative);
    const auto lhs = build_W(dd.scale_rows(a), DiagonalScaling(ratio, ScalingMode::Multiplicative), th);
    const auto rhs = build_W(a, DiagonalScaling(d0, ScalingMode::Multiplicative), th);
    worst = std::max(worst, (lhs - rhs).max_abs());
  }
  return {worst <= 1e-10, fmt("1000 tuples, worst entrywise difference %.2e", worst)};
}

Outcome lyapunov_soundness() {
  Rng rng(1006);
  std::size_t successes = 0, attempts = 0, w_fail = 0, sample_violations = 0, skipped_wide = 0;
  while (successes < 200 && attempts < 5000) {
    ++attempts;
    const std::size_t n = 2 + rng.below(4);
    // Negative definite symmetric part, then a perturbation that may need D != I.
    auto base = -oracle::random_spd(rng, n);
    const auto skew = oracle::random_matrix(rng, n, -2.0, 2.0);
    const auto a = base + (skew - skew.transpose()) + 0.6 * oracle::random_matrix(rng, n);
    SearchOptions opts;
    opts.seed = derive_seed(1006, attempts);
    const auto d = find_lyapunov_diagonal(a, opts);
    if (!d) continue;
    const double th = std::atan(skew_sym_ratio(a, *d));
    if (th + 0.01 >= SectorAngle::kHalfPi) {
      ++skipped_wide;
      continue;
    }
    ++successes;
    const auto wider = SectorAngle::from_radians(th + 0.01);
    if (is_negative_definite(build_W(a, *d, wider)) != Verdict::True) ++w_fail;
    sample_violations += sample_scalings(a, wider, ScalingMode::Multiplicative, 1000, opts.seed).violations;
  }
  return {successes >= 200 && w_fail == 0 && sample_violations == 0,
          fmt("%zu successes in %zu attempts (%zu skipped, sector too wide), %zu W failures, %zu sampled violations",
              successes, attempts, skipped_wide, w_fail, sample_violations)};
}

Outcome normal_equality() {
  const RealMatrix a(2, {2.0, 1.0, -1.0, 2.0});
  const double bound = normal_pd_bound(a).value;
  const double det = oracle::cofactor_det(a);
  return {std::abs(bound - 5.0) <= 1e-9 && std::abs(det - 5.0) <= 1e-9,
          fmt("bound %.15g, det %.15g", bound, det)};
}

RealMatrix random_2x2_p(Rng& rng) {
  for (;;) {
    const double a11 = std::exp(rng.uniform(-2, 2)), a22 = std::exp(rng.uniform(-2, 2));
    const double scale = std::sqrt(a11 * a22) * 3.0;
    const double a12 = rng.uniform(-scale, scale), a21 = rng.uniform(-scale, scale);
    if (a11 * a22 - a12 * a21 > 1e-6 * a11 * a22) return RealMatrix(2, {a11, a12, a21, a22});
  }
}

Outcome two_by_two_criterion() {
  Rng rng(1008);
  std::size_t agree = 0, holds = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto r = two_by_two_equivalence(random_2x2_p(rng));
    agree += r.agree();
    holds += r.criterion_det;
  }
  return {agree == 1000, fmt("%zu / 1000 agree (%zu satisfy det A < 2 a11 a22)", agree, holds)};
}

Outcome q2_sector_two_by_two() {
  Rng rng(1009);
  std::size_t matrices = 0, violations = 0;
  double worst = INFINITY;
  const auto th = SectorAngle::from_radians(kPi / 4 + 1e-6);
  while (matrices < 20) {
    const auto a = random_2x2_p(rng);
    if (!(determinant(a) < 2.0 * a(0, 0) * a(1, 1))) continue;
    ++matrices;
    const auto r = sample_scalings(-a, th, ScalingMode::Multiplicative, 10000, derive_seed(1009, matrices));
    violations += r.violations;
    worst = std::min(worst, r.worst_margin);
  }
  return {violations == 0, fmt("20 matrices x 10000 scalings, %zu violations, worst slack %.3e rad", violations, worst)};
}

Outcome amgm() {
  Rng rng(1010);
  std::size_t violations = 0;
  for (int t = 0; t < 1000000; ++t) {
    const auto th = SectorAngle::from_radians(rng.uniform(0.0, 1.55));
    std::complex<double> z[8];
    const std::size_t n = 1 + rng.below(8);
    for (std::size_t i = 0; i < n; ++i) z[i] = std::polar(std::exp(rng.uniform(-3, 3)), rng.uniform(-1, 1) * th.value());
    if (!complex_amgm_check(std::span<const std::complex<double>>(z, n), th)) ++violations;
  }
  double worst_eq = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double theta = rng.uniform(0.0, 1.5), r = std::exp(rng.uniform(-3, 3));
    const std::size_t pairs = 1 + rng.below(4);
    std::vector<std::complex<double>> z;
    for (std::size_t k = 0; k < pairs; ++k) {
      z.push_back(std::polar(r, theta));
      z.push_back(std::polar(r, -theta));
    }
    const auto res = complex_amgm(z, SectorAngle::from_radians(theta));
    worst_eq = std::max(worst_eq, std::abs(res.bound - res.geometric_mean) / r);
  }
  return {violations == 0 && worst_eq <= 1e-12,
          fmt("1e6 tuples, %zu violations; conjugate pairs equal within %.2e", violations, worst_eq)};
}

std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dstab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(status) + "\n" + out.str();
}

Outcome determinism() {
  const auto path = (std::filesystem::temp_directory_path() / "dstab_acceptance_det.txt").string();
  {
    std::ofstream f(path);
    f << "4\n-3 1 0.5 0.2\n0.2 -2 1 -0.3\n1 -0.5 -4 0.7\n0.1 0.4 -0.2 -1.5\n";
  }
  std::size_t identical = 0, runs = 0;
  const std::vector<std::vector<std::string>> commands = {
      {"sample", "--input", path, "--theta", "0.9", "--trials", "5000", "--seed", "42"},
      {"sample", "--input", path, "--theta", "0.9", "--trials", "2000", "--seed", "42", "--mode", "add"},
      {"verify", "--input", path, "--theta", "1.2", "--trials", "200", "--seed", "42"},
      {"certify", "--input", path, "--seed", "42", "--all"},
      {"bound", "--input", path, "--seed", "42"},
  };
  for (const auto& base : commands) {
    auto one = base, eight = base;
    one.insert(one.end(), {"--threads", "1"});
    eight.insert(eight.end(), {"--threads", "8"});
    const std::string ref = run_cli(one);
    for (int rep = 0; rep < 2; ++rep) {
      runs += 2;
      identical += run_cli(one) == ref;
      identical += run_cli(eight) == ref;
    }
  }
  return {identical == runs, fmt("%zu / %zu runs byte-identical across repeats and 1 vs 8 threads", identical, runs)};
}

}  // namespace

int main() {
  criterion(1, "classical Hadamard on SPD matrices", 30, hadamard_classical);
  criterion(2, "sector Hadamard on row-dominant matrices", 20, sector_hadamard_dominant);
  criterion(3, "subset expansion of det(A + D)", 10, expansion_identity);
  criterion(4, "P0 superadditivity", 20, superadditivity);
  criterion(5, "W commutation identity", 10, commutation);
  criterion(6, "Lyapunov scaling soundness", 120, lyapunov_soundness);
  criterion(7, "normal positive definite equality", 1, normal_equality);
  criterion(8, "2x2 Q^2 criterion equivalence", 5, two_by_two_criterion);
  criterion(9, "2x2 Q^2 sector pi/4", 30, q2_sector_two_by_two);
  criterion(10, "complex AM-GM", 10, amgm);
  criterion(11, "determinism across runs and threads", 60, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
