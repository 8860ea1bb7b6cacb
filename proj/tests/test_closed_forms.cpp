#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ivol/closed_forms.hpp"
#include "ivol/special_functions.hpp"

using namespace ivol;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;
}

TEST_CASE("continuum intrinsic volumes, printed values") {
  CHECK(vk_continuum(ContinuumFamily::Kinf_BM, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(vk_continuum(ContinuumFamily::Kinf_BB, 1) == doctest::Approx(kPi / 4.0).epsilon(1e-13));
  CHECK(vk_continuum(ContinuumFamily::L1_BM, 1) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(vk_continuum(ContinuumFamily::L1_BB, 1) == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK(vk_continuum(ContinuumFamily::Kinf_BM, 2) == doctest::Approx(kPi / 6.0).epsilon(1e-13));
}

TEST_CASE("continuum k = 0 and halving identity") {
  for (auto family :
       {ContinuumFamily::L1_BM, ContinuumFamily::L1_BB, ContinuumFamily::Kinf_BM,
        ContinuumFamily::Kinf_BB, ContinuumFamily::Linf_BM, ContinuumFamily::Linf_BB}) {
    CHECK(vk_continuum(family, 0) == 1.0);
  }
  for (int k = 1; k <= 20; ++k) {
    CHECK(vk_continuum(ContinuumFamily::Linf_BM, k) ==
          doctest::Approx(std::pow(2.0, -k) * vk_continuum(ContinuumFamily::Kinf_BM, k))
              .epsilon(1e-12));
    CHECK(vk_continuum(ContinuumFamily::Linf_BB, k) ==
          doctest::Approx(std::pow(2.0, -k) * vk_continuum(ContinuumFamily::Kinf_BB, k))
              .epsilon(1e-12));
  }
}

TEST_CASE("v1 table") {
  CHECK(v1_sobolev_exact({SetClass::K, Star::BM, PNorm::One}) ==
        doctest::Approx(kPi).epsilon(1e-13));
  CHECK(v1_sobolev_exact({SetClass::K, Star::BB, PNorm::One}) ==
        doctest::Approx(kPi * std::log(2.0)).epsilon(1e-13));
  CHECK(v1_sobolev_exact({SetClass::L, Star::BM, PNorm::One}) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(v1_sobolev_exact({SetClass::L, Star::BB, PNorm::One}) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK(v1_sobolev_exact({SetClass::K, Star::CBM, PNorm::Inf}) ==
        doctest::Approx((2.0 * std::sqrt(3.0) + std::log(2.0 + std::sqrt(3.0))) / 6.0)
            .epsilon(1e-13));
  // 2 * integral of the constant standard deviation 1/sqrt(12).
  CHECK(v1_sobolev_exact({SetClass::K, Star::CBB, PNorm::Inf}) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(v1_sobolev_exact({SetClass::L, Star::BB, PNorm::Inf}) ==
        doctest::Approx(kPi / 8.0).epsilon(1e-13));
}

TEST_CASE("v1 unsupported combinations") {
  CHECK_THROWS_AS(v1_sobolev_exact({SetClass::K, Star::BM, PNorm::Two}), unsupported_error);
  CHECK_THROWS_AS(v1_sobolev_exact({SetClass::K, Star::CBM, PNorm::One}), unsupported_error);
  CHECK_THROWS_AS(v1_sobolev_exact({SetClass::L, Star::CBB, PNorm::One}), std::domain_error);
}

TEST_CASE("simplex sums, small cases") {
  CHECK(vk_simplex_discrete(1, 1, WalkFamily::BM) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(vk_simplex_discrete(2, 1, WalkFamily::BM) ==
        doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(vk_simplex_discrete(2, 1, WalkFamily::BB) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  CHECK_THROWS_AS(vk_simplex_discrete(2, 3, WalkFamily::BM), std::domain_error);
}

TEST_CASE("simplex sums nondecreasing in n") {
  for (int k = 1; k <= 4; ++k) {
    double prev = 0.0;
    for (int n = k; n <= 12; ++n) {
      const double value = vk_simplex_discrete(n, k, WalkFamily::BM);
      CHECK(value >= prev);
      prev = value;
    }
  }
}

TEST_CASE("zonotope sums, small cases") {
  CHECK(vk_zonotope_discrete(1, 1, WalkFamily::BM) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(vk_zonotope_discrete(2, 1, WalkFamily::BM) ==
        doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-13));
  CHECK(vk_zonotope_discrete(2, 2, WalkFamily::BM) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(vk_zonotope_discrete(2, 1, WalkFamily::BB) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("hull volume and projections") {
  CHECK(expected_hull_volume(1, WalkFamily::BM) ==
        doctest::Approx(4.0 / std::sqrt(kTwoPi)).epsilon(1e-13));
  CHECK(expected_hull_volume(2, WalkFamily::BM) == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK(expected_hull_volume(2, WalkFamily::BB) == doctest::Approx(kPi / 3.0).epsilon(1e-13));
  CHECK(expected_hull_vm(7, 0, WalkFamily::BM) == 1.0);
  CHECK(expected_hull_vm(2, 1, WalkFamily::BM) ==
        doctest::Approx(kPi * std::sqrt(2.0 / kPi)).epsilon(1e-13));
  for (int k = 1; k <= 5; ++k) {
    for (auto family : {WalkFamily::BM, WalkFamily::BB}) {
      CHECK(expected_hull_vm(k, k, family) ==
            doctest::Approx(expected_hull_volume(k, family)).epsilon(1e-12));
    }
  }
}

TEST_CASE("walk hull expectations") {
  // Semiperimeter display: sqrt(pi/2) sum 1/sqrt(j).
  double harmonic_root = 0.0;
  for (int j = 1; j <= 10; ++j) harmonic_root += 1.0 / std::sqrt(static_cast<double>(j));
  CHECK(expected_walk_hull(10, 2, 1, WalkFamily::BM) ==
        doctest::Approx(std::sqrt(kPi / 2.0) * harmonic_root).epsilon(1e-13));
  CHECK(expected_walk_hull(1, 1, 1, WalkFamily::BM) ==
        doctest::Approx(2.0 / std::sqrt(kTwoPi)).epsilon(1e-13));
  // Full-order projection sum agrees with the simplex enumeration identity.
  for (int k = 1; k <= 4; ++k) {
    for (int n = k; n <= 4; ++n) {
      const double lhs = expected_walk_hull(n, k, k, WalkFamily::BM);
      const double rhs = gamma_fn(k + 1.0) * ball_volume(k) * std::pow(kTwoPi, -0.5 * k) *
                         vk_simplex_discrete(n, k, WalkFamily::BM);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("walk zonotope expectations") {
  CHECK(expected_walk_zonotope(2, 1, WalkFamily::BM) ==
        doctest::Approx(std::sqrt(2.0 / kPi) * (1.0 + std::sqrt(2.0))).epsilon(1e-13));
  CHECK(expected_walk_zonotope(2, 2, WalkFamily::BM) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(expected_walk_zonotope(2, 1, WalkFamily::BB) ==
        doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-13));
}

TEST_CASE("zonoid volumes, both modes") {
  CHECK(expected_brownian_zonoid_volume(1, WalkFamily::BM, ZonoidMode::ViaTsirelson) ==
        doctest::Approx(4.0 / (3.0 * std::sqrt(kTwoPi))).epsilon(1e-13));
  CHECK(expected_brownian_zonoid_volume(1, WalkFamily::BM, ZonoidMode::AsPrinted) ==
        doctest::Approx(1.0 / (3.0 * std::sqrt(kTwoPi))).epsilon(1e-13));
  CHECK(expected_brownian_zonoid_volume(1, WalkFamily::BB, ZonoidMode::ViaTsirelson) ==
        doctest::Approx(std::sqrt(kTwoPi) / 8.0).epsilon(1e-13));
  // For the unconstrained family the two modes differ by exactly kappa_k^2.
  // For the bridge family the discrepancy carries an extra Gamma-ratio factor
  // Gamma(3k/2 + 1) / Gamma(3k/2 + 3/2), so the kappa_k^2 relation is BM-only.
  for (int k = 1; k <= 6; ++k) {
    const double printed =
        expected_brownian_zonoid_volume(k, WalkFamily::BM, ZonoidMode::AsPrinted);
    const double via =
        expected_brownian_zonoid_volume(k, WalkFamily::BM, ZonoidMode::ViaTsirelson);
    const double kap = ball_volume(k);
    CHECK(printed * kap * kap == doctest::Approx(via).epsilon(1e-12));

    const double printed_bb =
        expected_brownian_zonoid_volume(k, WalkFamily::BB, ZonoidMode::AsPrinted);
    const double via_bb =
        expected_brownian_zonoid_volume(k, WalkFamily::BB, ZonoidMode::ViaTsirelson);
    const double gamma_ratio =
        gamma_fn(1.5 * k + 1.0) / gamma_fn(1.5 * k + 1.5);
    CHECK(printed_bb * kap * kap * gamma_ratio == doctest::Approx(via_bb).epsilon(1e-12));
  }
}

TEST_CASE("ellipsoid v1 table") {
  CHECK(ellipsoid_v1_table(EllipsoidFamilyTag::E, 2) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-13));
  CHECK(ellipsoid_v1_table(EllipsoidFamilyTag::E, 4) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(ellipsoid_v1_table(EllipsoidFamilyTag::F, 2) ==
        doctest::Approx(8.0 * constant("catalan") / kPi).epsilon(1e-12));
  CHECK(ellipsoid_v1_table(EllipsoidFamilyTag::F, 4) ==
        doctest::Approx(28.0 * constant("zeta3") / (kPi * kPi)).epsilon(1e-12));
  CHECK_THROWS_AS(ellipsoid_v1_table(EllipsoidFamilyTag::E, 3), unsupported_error);
}

TEST_CASE("convergence of discrete sums to the continuum") {
  const double zono = std::pow(2000.0, -1.5) * vk_zonotope_discrete(2000, 1, WalkFamily::BM);
  CHECK(std::abs(zono - 2.0 / 3.0) / (2.0 / 3.0) < 0.01);
  // The unnormalized walk has Gram matrix min(i, j); rescaling the sum by
  // n^{-k/2} recovers the continuum value (here 2 for k = 1).
  const double simplex =
      std::pow(5000.0, -0.5) * vk_simplex_discrete(5000, 1, WalkFamily::BM);
  CHECK(std::abs(simplex - 2.0) / 2.0 < 0.02);
}

TEST_CASE("term budget") {
  CHECK(composition_count(10, 3) == doctest::Approx(120.0));
  CHECK_THROWS_AS(composition_count(200, 10), budget_error);
  CHECK_THROWS_AS(vk_simplex_discrete(200, 10, WalkFamily::BM), budget_error);
}
