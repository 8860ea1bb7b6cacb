#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ivol/estimators.hpp"
#include "ivol/gaussian_sim.hpp"
#include "ivol/special_functions.hpp"

using namespace ivol;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

double sample_variance_at(Star star, int steps, int grid_index, long draws,
                          std::uint64_t seed) {
  RngStream rng(seed, 0);
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < draws; ++i) {
    const double v = sample_path(star, steps, rng).values(grid_index);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / draws;
  return sum_sq / draws - mean * mean;
}

}  // namespace

TEST_CASE("path marginal variances") {
  const int steps = 64;
  const long draws = 100000;
  // Var W(1/2) = 1/2.
  CHECK(std::abs(sample_variance_at(Star::BM, steps, steps / 2, draws, 1) - 0.5) < 0.02 * 0.5 * 2);
  // Var X_BB(1/2) = 1/4.
  CHECK(std::abs(sample_variance_at(Star::BB, steps, steps / 2, draws, 2) - 0.25) < 0.25 * 0.04);
  // Var X_CBM(t) = t^2 - t + 1/3 at t = 1/2 -> 1/12.
  CHECK(std::abs(sample_variance_at(Star::CBM, steps, steps / 2, draws, 3) - 1.0 / 12.0) <
        0.04 / 12.0 + 0.003);
  // Var X_CBB(t) = 1/12 at every t.
  CHECK(std::abs(sample_variance_at(Star::CBB, steps, steps / 4, draws, 4) - 1.0 / 12.0) <
        0.04 / 12.0 + 0.003);
}

TEST_CASE("path structural constraints") {
  RngStream rng(9, 0);
  const Path bb = sample_path(Star::BB, 128, rng);
  CHECK(bb.values(0) == 0.0);
  CHECK(bb.values(128) == 0.0);
  const Path cbm = sample_path(Star::CBM, 128, rng);
  double trapz = 0.5 * (cbm.values(0) + cbm.values(128));
  for (int i = 1; i < 128; ++i) trapz += cbm.values(i);
  CHECK(std::abs(trapz / 128.0) < 1e-12);
}

TEST_CASE("path norms") {
  Path constant;
  constant.star = Star::BM;
  constant.steps = 10;
  constant.values = Eigen::VectorXd::Constant(11, -0.7);
  CHECK(path_norm(constant, PNorm::One) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(path_norm(constant, PNorm::Inf) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(path_norm(constant, PNorm::One, true) == 0.0);

  Path ramp;
  ramp.star = Star::BM;
  ramp.steps = 1000;
  ramp.values.resize(1001);
  for (int i = 0; i <= 1000; ++i) ramp.values(i) = i / 1000.0;
  CHECK(std::abs(path_norm(ramp, PNorm::Two) - 1.0 / std::sqrt(3.0)) < 1e-5);
}

TEST_CASE("widths are nonnegative and L never exceeds K") {
  for (Star star : {Star::BM, Star::BB}) {
    for (PNorm p : {PNorm::One, PNorm::Two, PNorm::Inf}) {
      // Same stream state on both calls: both consume exactly one path.
      RngStream rng_k(33, 5);
      RngStream rng_l(33, 5);
      for (int i = 0; i < 200; ++i) {
        const double wk = sample_width(SetClass::K, star, p, 64, rng_k);
        const double wl = sample_width(SetClass::L, star, p, 64, rng_l);
        CHECK(wk >= 0.0);
        CHECK(wl >= 0.0);
        CHECK(wl <= wk + 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(
      [] {
        RngStream rng(1, 1);
        sample_width(SetClass::L, Star::CBM, PNorm::Inf, 16, rng);
      }(),
      std::domain_error);
}

TEST_CASE("walks and walk bridges") {
  RngStream rng(5, 0);
  const Eigen::MatrixXd bridge = sample_walk(3, 12, rng, true);
  CHECK(bridge.col(11).norm() == 0.0);

  const long draws = 100000;
  double var_plain = 0.0, var_bridge = 0.0;
  RngStream rng2(6, 0);
  for (long i = 0; i < draws; ++i) {
    const Eigen::MatrixXd walk = sample_walk(1, 8, rng2, false);
    var_plain += walk(0, 4) * walk(0, 4);
  }
  var_plain /= draws;
  CHECK(std::abs(var_plain - 5.0) < 0.1);  // Var S_5 = 5
  RngStream rng3(7, 0);
  for (long i = 0; i < draws; ++i) {
    const Eigen::MatrixXd walk = sample_walk(1, 8, rng3, true);
    var_bridge += walk(0, 4) * walk(0, 4);
  }
  var_bridge /= draws;
  CHECK(std::abs(var_bridge - 5.0 * 3.0 / 8.0) < 0.06);  // i(n-i)/n at i=5, n=8
}

TEST_CASE("weighted chi-square means") {
  const long draws = 20000;
  RngStream rng(15, 0);
  double mean_s = 0.0;
  for (long i = 0; i < draws; ++i) mean_s += sample_weighted_chisq(ChiSqFamily::S, 2, 500, rng);
  mean_s /= draws;
  CHECK(std::abs(mean_s - 1.0 / 3.0) < 0.02 / 3.0 * 3);

  RngStream rng2(16, 0);
  double mean_c = 0.0;
  for (long i = 0; i < draws; ++i) mean_c += sample_weighted_chisq(ChiSqFamily::C, 2, 500, rng2);
  mean_c /= draws;
  CHECK(std::abs(mean_c - 1.0) < 0.03);
}

TEST_CASE("laplace transforms") {
  CHECK(chisq_laplace_exact(ChiSqFamily::S, 2, 0.0) == 1.0);
  for (ChiSqFamily family : {ChiSqFamily::S, ChiSqFamily::C}) {
    for (double t : {0.5, 1.0, 2.0}) {
      auto sampler = [family, t](RngStream& rng) {
        return std::exp(-t * sample_weighted_chisq(family, 2, 500, rng));
      };
      const McResult mc = mc_mean(sampler, 20000, 71, 1);
      const double exact = chisq_laplace_exact(family, 2, t);
      CHECK(std::abs(mc.estimate - exact) <= 3.0 * mc.std_error + 2e-4);
    }
  }
}

TEST_CASE("ellipsoid functionals") {
  // Single axis: V_1 of a segment of length 2 lambda.
  const EllipsoidSpec single = EllipsoidSpec::explicit_axes({0.8});
  auto sampler1 = [&single](RngStream& rng) {
    return sample_ellipsoid_functional(single, 1, rng);
  };
  const McResult v1 = mc_mean(sampler1, 100000, 81, 1).scaled(std::sqrt(kTwoPi));
  CHECK(std::abs(v1.estimate - 1.6) <= 3.0 * v1.std_error);

  // Two axes: V_2 = pi a b, via (2 pi)^{k/2}/k! E sqrt(det W_k).
  const EllipsoidSpec two = EllipsoidSpec::explicit_axes({1.0, 0.5});
  auto sampler2 = [&two](RngStream& rng) { return sample_ellipsoid_functional(two, 2, rng); };
  const McResult v2 = mc_mean(sampler2, 50000, 82, 1).scaled(kTwoPi / 2.0);
  CHECK(std::abs(v2.estimate - kPi * 0.5) <= 3.0 * v2.std_error);

  // Fewer axes than k: degenerate, identically 0 without tail compensation.
  RngStream rng(83, 0);
  CHECK(sample_ellipsoid_functional(two, 3, rng) == 0.0);
}

TEST_CASE("truncation consistency") {
  const long draws = 20000;
  auto estimate = [&](long truncation, std::uint64_t seed) {
    const EllipsoidSpec spec = EllipsoidSpec::family(EllipsoidFamilyTag::E, 2, truncation);
    auto sampler = [&spec](RngStream& rng) {
      return sample_ellipsoid_functional(spec, 1, rng);
    };
    return mc_mean(sampler, draws, seed, 1);
  };
  const McResult coarse = estimate(500, 91);
  const McResult fine = estimate(1000, 92);
  const double se =
      std::sqrt(coarse.std_error * coarse.std_error + fine.std_error * fine.std_error);
  CHECK(std::abs(coarse.estimate - fine.estimate) <= 3.0 * se);
}

TEST_CASE("rivin duality") {
  const Eigen::MatrixXd diag = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  auto [lhs, rhs] = rivin_duality_check(diag, 1, 20000, 101);
  const double se =
      std::sqrt(lhs.std_error * lhs.std_error + rhs.std_error * rhs.std_error);
  CHECK(std::abs(lhs.estimate - rhs.estimate) <= 3.0 * se);

  // Homogeneity: scaling sigma by c^2 scales the k=1 estimate by c.
  auto [scaled, scaled_rhs] = rivin_duality_check(4.0 * diag, 1, 20000, 102);
  const double se2 = std::sqrt(4.0 * lhs.std_error * lhs.std_error +
                               scaled.std_error * scaled.std_error);
  CHECK(std::abs(scaled.estimate - 2.0 * lhs.estimate) <= 3.0 * se2);
  (void)scaled_rhs;

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(rivin_duality_check(bad, 1, 1000, 103), std::domain_error);
}

TEST_CASE("identity covariance matches the ball formula") {
  // V_1(B_3) = C(3,1) kappa_3 / kappa_2 = 4.
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  auto [lhs, rhs] = rivin_duality_check(id, 1, 30000, 104);
  const double exact = 3.0 * ball_volume(3) / ball_volume(2);
  CHECK(std::abs(lhs.estimate - exact) <= 4.0 * lhs.std_error);
  CHECK(std::abs(rhs.estimate - exact) <= 4.0 * rhs.std_error);
}
