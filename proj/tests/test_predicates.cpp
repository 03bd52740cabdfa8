#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dstab/predicates.hpp"
#include "oracles.hpp"

using namespace dstab;
using doctest::Approx;

TEST_CASE("P-matrix") {
  CHECK(is_P_matrix(RealMatrix::identity(4)).verdict == Verdict::True);
  const auto bad = is_P_matrix(RealMatrix(2, {1.0, 2.0, 3.0, 4.0}));
  CHECK(bad.verdict == Verdict::False);
  CHECK(bad.witness == std::vector<std::size_t>{0, 1});
  CHECK(is_P_matrix(RealMatrix(2, {2.0, 1.0, 1.0, 2.0})).verdict == Verdict::True);
  CHECK_THROWS_AS((void)is_P_matrix(RealMatrix::identity(21)), Error);
}

TEST_CASE("P-matrix agrees with brute-force minors") {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng.below(5);
    const auto a = oracle::random_matrix(rng, n, -0.5, 1.5);
    const auto g = oracle::grid(a);
    double least = INFINITY;
    for (std::uint32_t m = 1; m < (1u << n); ++m) least = std::min(least, oracle::cofactor_det(oracle::submatrix(g, m)));
    const auto v = is_P_matrix(a).verdict;
    if (least > 1e-6) CHECK(v == Verdict::True);
    if (least < -1e-6) CHECK(v == Verdict::False);
  }
}

TEST_CASE("P0 and P0+") {
  CHECK(is_P0_matrix(RealMatrix::zero(3)).is_true());
  CHECK(is_P0_plus(RealMatrix::zero(3)).verdict == Verdict::False);
  CHECK(is_P0_matrix(RealMatrix::identity(3)).is_true());
  CHECK(is_P0_plus(RealMatrix::identity(3)).is_true());
  const RealMatrix a(2, {0.0, 1.0, 0.0, 1.0});
  CHECK(is_P0_matrix(a).is_true());
  CHECK(is_P0_plus(a).verdict == Verdict::False);
  CHECK(is_P0_matrix(RealMatrix::diagonal({1.0, -1.0})).verdict == Verdict::False);
}

TEST_CASE("Q-matrix") {
  CHECK(is_Q_matrix(RealMatrix::identity(3)).is_true());
  const auto d = is_Q_matrix(RealMatrix::diagonal({1.0, -1.0}));
  CHECK(d.verdict == Verdict::False);
  // E_1 = 0 already fails, before E_2 = -1.
  CHECK(d.witness == std::vector<std::size_t>{0});
  CHECK(is_Q_matrix(RealMatrix(2, {1.0, 2.0, 3.0, 4.0})).verdict == Verdict::False);
}

TEST_CASE("dominance ratios") {
  for (double s : dominance_ratios(RealMatrix::diagonal({1.0, -4.0, 2.0}))) CHECK(s == 0.0);
  auto s = dominance_ratios(RealMatrix(2, {-2.0, 1.0, 1.0, -2.0}));
  CHECK(s[0] == Approx(0.5));
  CHECK(s[1] == Approx(0.5));
  s = dominance_ratios(RealMatrix(2, {-1.0, 1.0, 0.0, -1.0}));
  CHECK(s[0] == Approx(1.0));
  CHECK(s[1] == 0.0);
  CHECK_THROWS_AS((void)dominance_ratios(RealMatrix(2, {0.0, 1.0, 1.0, 1.0})), Error);
}

TEST_CASE("row, column and double dominance") {
  const auto diag = RealMatrix::diagonal({1.0, 2.0, 3.0});
  CHECK(is_strict_row_dd(diag).is_true());
  CHECK(is_strict_col_dd(diag).is_true());
  CHECK(is_doubly_dd(diag).is_true());
  const RealMatrix a(2, {1.0, 2.0, 0.0, 1.0});
  const auto row = is_strict_row_dd(a);
  CHECK(row.verdict == Verdict::False);
  CHECK(row.witness == std::vector<std::size_t>{0});
  const auto col = is_strict_col_dd(a);
  CHECK(col.verdict == Verdict::False);
  CHECK(col.witness == std::vector<std::size_t>{1});
  CHECK(is_doubly_dd(RealMatrix(2, {3.0, 1.0, 1.0, 3.0})).is_true());
}

TEST_CASE("sector dominance") {
  CHECK(is_sector_dd(RealMatrix::diagonal({-1.0, -1.0}), SectorAngle::from_radians(0.1)).is_true());
  const auto sixth = SectorAngle::from_radians(std::numbers::pi / 6);
  CHECK(is_sector_dd(RealMatrix(2, {-2.0, 1.0, 1.0, -2.0}), sixth).verdict == Verdict::False);
  CHECK(is_sector_dd(RealMatrix(2, {-2.0, 0.5, 0.5, -2.0}), sixth).is_true());
  CHECK(is_sector_dd(RealMatrix::diagonal({1.0, 1.0}), sixth).verdict == Verdict::False);
}

TEST_CASE("classify report") {
  const auto r = classify(RealMatrix(2, {2.0, 1.0, 1.0, 2.0}), SectorAngle::from_radians(0.3));
  CHECK(r.verdicts.at("P") == Verdict::True);
  CHECK(r.verdicts.at("Q") == Verdict::True);
  CHECK(r.verdicts.at("doubly_dd") == Verdict::True);
  CHECK(r.verdicts.count("sector_dd") == 1);
  CHECK(r.ratios.has_value());
  CHECK(r.matrix_hash.size() == 16);
  const auto z = classify(RealMatrix(2, {0.0, 1.0, -1.0, 0.0}));
  CHECK_FALSE(z.ratios.has_value());
  CHECK(z.verdicts.count("sector_dd") == 0);
  const auto big = classify(RealMatrix::identity(21));
  CHECK(big.verdicts.at("P") == Verdict::Indeterminate);
}
