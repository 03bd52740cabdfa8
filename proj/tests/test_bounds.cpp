#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dstab/bounds.hpp"
#include "oracles.hpp"

using namespace dstab;
using doctest::Approx;

namespace {

const double kPi = std::numbers::pi;

SectorAngle angle(double t) { return SectorAngle::from_radians(t); }

}  // namespace

TEST_CASE("complex AM-GM examples") {
  const std::vector<std::complex<double>> ones{1.0, 1.0, 1.0};
  auto r = complex_amgm(ones, angle(0.0));
  CHECK(r.holds);
  CHECK(r.geometric_mean == Approx(r.bound));

  const auto pair = std::vector<std::complex<double>>{std::polar(1.0, kPi / 4), std::polar(1.0, -kPi / 4)};
  r = complex_amgm(pair, angle(kPi / 4));
  CHECK(r.holds);
  CHECK(std::abs(r.bound - r.geometric_mean) < 1e-12);

  const std::vector<std::complex<double>> reals{2.0, 3.0, 5.0};
  r = complex_amgm(reals, angle(0.0));
  CHECK(r.geometric_mean == Approx(std::cbrt(30.0)));
  CHECK(r.bound == Approx(10.0 / 3.0));
  CHECK(r.holds);

  const std::vector<std::complex<double>> out{std::polar(1.0, 0.5)};
  CHECK_THROWS_AS((void)complex_amgm(out, angle(0.4)), Error);
  CHECK_THROWS_AS((void)complex_amgm(std::vector<std::complex<double>>{}, angle(0.4)), Error);
}

TEST_CASE("complex AM-GM on random tuples") {
  Rng rng(41);
  for (int t = 0; t < 2000; ++t) {
    const auto th = angle(rng.uniform(0.0, 1.5));
    std::vector<std::complex<double>> z(1 + rng.below(6));
    for (auto& x : z) x = std::polar(std::exp(rng.uniform(-3, 3)), rng.uniform(-th.value(), th.value()));
    CHECK(complex_amgm_check(z, th));
  }
}

TEST_CASE("classical Hadamard") {
  CHECK(hadamard_classic(RealMatrix::identity(3)) == Approx(1.0));
  CHECK(hadamard_classic(RealMatrix::diagonal({2.0, 5.0})) == Approx(10.0));
  CHECK(hadamard_classic(RealMatrix(2, {2.0, 1.0, 1.0, 2.0})) == Approx(4.0));
  CHECK_THROWS_AS((void)hadamard_classic(RealMatrix(2, {1.0, 2.0, 0.0, 1.0})), Error);
  CHECK_THROWS_AS((void)hadamard_classic(RealMatrix(2, {1.0, 2.0, 2.0, 1.0})), Error);
}

TEST_CASE("sector Hadamard") {
  const RealMatrix s(2, {2.0, 1.0, 1.0, 2.0});
  CHECK(sector_hadamard(s, angle(0.0)) == Approx(hadamard_classic(s)));
  CHECK(sector_hadamard(RealMatrix::identity(2), angle(kPi / 4)) == Approx(2.0));
  CHECK(sector_hadamard(s, angle(kPi / 6)) == Approx(16.0 / 3.0));
  CHECK_THROWS_AS((void)sector_hadamard(s, SectorAngle::half_plane()), Error);
  CHECK_THROWS_AS((void)sector_hadamard(RealMatrix::diagonal({1.0, -1.0}), angle(0.2)), Error);
}

TEST_CASE("additive sector Hadamard") {
  CHECK(additive_sector_hadamard(RealMatrix::identity(2), angle(0.0)) == Approx(1.0));
  CHECK(additive_sector_hadamard(RealMatrix::diagonal({1.0, 3.0}), angle(0.0)) == Approx(9.0));
  CHECK(additive_sector_hadamard(RealMatrix(2, {2.0, 1.0, 1.0, 2.0}), angle(kPi / 4)) == Approx(8.0));
  CHECK_THROWS_AS((void)additive_sector_hadamard(RealMatrix::diagonal({-1.0, -3.0}), angle(0.1)), Error);
}

TEST_CASE("diagonally stable bound") {
  const RealMatrix spd(2, {3.0, 1.0, 1.0, 2.0});
  CHECK(diag_stable_bound(spd) <= 6.0 * 1.05);
  CHECK(diag_stable_bound(spd) >= determinant(spd));
  const RealMatrix a(2, {1.0, -1.0, 1.0, 1.0});
  CHECK(diag_stable_bound(a) <= 2.0 + 1e-6);
  CHECK(diag_stable_bound(a) >= 2.0 - 1e-9);
  const RealMatrix b(2, {2.0, -1.0, 1.0, 2.0});
  CHECK(diag_stable_bound(b) == Approx(5.0).epsilon(1e-6));
}

TEST_CASE("normal positive definite bound") {
  CHECK(normal_pd_bound(RealMatrix::identity(3)).value == Approx(1.0));
  CHECK(normal_pd_bound(RealMatrix(2, {1.0, 1.0, -1.0, 1.0})).value == Approx(2.0));
  const auto r = normal_pd_bound(RealMatrix(2, {2.0, 1.0, -1.0, 2.0}));
  CHECK(std::abs(r.value - 5.0) < 1e-9);
  CHECK(r.general == Approx(5.0));
  CHECK_THROWS_AS((void)normal_pd_bound(RealMatrix(2, {1.0, 3.0, 0.0, 1.0})), Error);
}

TEST_CASE("dominance bounds") {
  CHECK(dd_bound(RealMatrix::diagonal({2.0, 3.0})) == Approx(6.0));
  CHECK(dd_bound(RealMatrix(2, {2.0, 1.0, 1.0, 2.0})) == Approx(16.0 / 3.0));
  CHECK(dd_bound(RealMatrix(2, {10.0, 1.0, 1.0, 10.0})) == Approx(100.0 / 0.99));
  CHECK(doubly_dd_bound(RealMatrix(2, {3.0, 1.0, 1.0, 3.0})) == Approx(9.0));
  CHECK(doubly_dd_bound(RealMatrix(2, {3.0, 1.0, -1.0, 3.0})) == Approx(10.0));
  CHECK(doubly_dd_bound(RealMatrix(2, {4.0, 1.0, 2.0, 4.0})) == Approx(16.64));
  CHECK_THROWS_AS((void)dd_bound(RealMatrix(2, {1.0, 2.0, 0.0, 1.0})), Error);
}

TEST_CASE("Q^2 bound") {
  CHECK(q2_bound(RealMatrix::identity(2)).value == Approx(2.0));
  CHECK(q2_bound(RealMatrix(1, {7.0})).value == Approx(7.0));
  CHECK(q2_bound(RealMatrix(2, {2.0, 1.0, 1.0, 2.0})).value == Approx(8.0));
  CHECK_THROWS_AS((void)q2_bound(RealMatrix(2, {1.0, 3.0, -3.0, 1.0})), Error);
}

TEST_CASE("bound report for the identity") {
  const auto r = best_bound(RealMatrix::identity(3));
  CHECK(r.det_exact == Approx(1.0));
  for (const char* name : kBoundNames) {
    INFO(name);
    const auto& e = r.bounds.at(name);
    CHECK(e.applicable);
    REQUIRE(e.value.has_value());
    CHECK(*e.value >= 1.0 - 1e-9);
  }
  CHECK(*r.bounds.at("hadamard").value == Approx(1.0));
  CHECK(*r.tightness.at("hadamard") == Approx(1.0));
  CHECK(r.consistent());
}

TEST_CASE("bound report for a symmetric dominant matrix") {
  const auto r = best_bound(RealMatrix(2, {2.0, 1.0, 1.0, 2.0}));
  CHECK(r.det_exact == Approx(3.0));
  CHECK(*r.bounds.at("hadamard").value == Approx(4.0));
  CHECK(*r.bounds.at("row_dd").value == Approx(16.0 / 3.0));
  CHECK(*r.bounds.at("q2").value == Approx(8.0));
  CHECK(r.bounds.at("q2").applicable);
  CHECK(r.consistent());
}

TEST_CASE("bound report for a rotation generator") {
  const auto r = best_bound(RealMatrix(2, {0.0, 1.0, -1.0, 0.0}));
  CHECK(r.det_exact == Approx(1.0));
  for (const auto& [name, e] : r.bounds) {
    INFO(name);
    CHECK_FALSE(e.applicable);
  }
  CHECK(r.consistent());
}

TEST_CASE("no applicable bound is exceeded on random inputs") {
  Rng rng(43);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng.below(3);
    const auto a = (t % 2) ? oracle::random_row_dominant(rng, n) : oracle::random_spd(rng, n);
    const auto r = best_bound(a);
    CHECK(r.consistent());
    CHECK(r.det_exact == Approx(oracle::cofactor_det(a)).epsilon(1e-9));
  }
}
