#include "ivol/closed_forms.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "ivol/special_functions.hpp"

namespace ivol {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kTermBudget = 1e8;

double factorial(int k) { return gamma_fn(k + 1.0); }

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

// Enumerates (d_1, ..., d_k) in N^k with d_1 + ... + d_k <= n and accumulates
// term(product d_i, sum d_i). Recursive descent, no shortcuts.
double composition_sum(int n, int k, const std::function<double(double, int)>& term) {
  composition_count(n, k);  // budget check
  double total = 0.0;
  std::function<void(int, int, double)> descend = [&](int depth, int used, double prod) {
    if (depth == k) {
      total += term(prod, used);
      return;
    }
    for (int d = 1; used + d + (k - depth - 1) <= n; ++d) {
      descend(depth + 1, used + d, prod * d);
    }
  };
  descend(0, 0, 1.0);
  return total;
}

// Enumerates 1 <= l_1 < ... < l_k <= n and accumulates term(gap product, l_k)
// where the gap product is l_1 (l_2 - l_1) ... (l_k - l_{k-1}).
double tuple_sum(int n, int k, const std::function<double(double, int)>& term) {
  composition_count(n, k);
  double total = 0.0;
  std::function<void(int, int, double)> descend = [&](int depth, int prev, double prod) {
    if (depth == k) {
      total += term(prod, prev);
      return;
    }
    for (int l = prev + 1; l <= n - (k - depth - 1); ++l) {
      descend(depth + 1, l, prod * (l - prev));
    }
  };
  descend(0, 0, 1.0);
  return total;
}

}  // namespace

double composition_count(int n, int k) {
  require(n >= 1 && k >= 1 && k <= n, "composition_count: need 1 <= k <= n");
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= static_cast<double>(n - i) / (i + 1);
  if (c > kTermBudget) {
    throw budget_error("composition enumeration over A_{" + std::to_string(n) + "," +
                       std::to_string(k) + "} exceeds the 1e8 term budget");
  }
  return c;
}

double vk_continuum(ContinuumFamily family, int k) {
  require(k >= 0, "vk_continuum: k must be nonnegative");
  if (k == 0) return 1.0;
  const double kk = k;
  // Direct Gamma ratios: gamma_fn is bit-exact at half-integers, which keeps
  // the printed table values correct to the last digit. Fall back to the
  // log-Gamma form only when the arguments would overflow.
  if (k > 90) {
    switch (family) {
      case ContinuumFamily::L1_BM:
        return std::exp(kk / 2.0 * std::log(kPi) - log_gamma(kk / 2.0 + 1.0) -
                        log_gamma(kk + 1.0));
      case ContinuumFamily::L1_BB:
        return 0.5 * std::exp((kk + 1.0) / 2.0 * std::log(kPi) -
                              log_gamma(kk / 2.0 + 1.5) - log_gamma(kk + 1.0));
      case ContinuumFamily::Kinf_BM:
        return std::exp(kk / 2.0 * std::log(kPi) - log_gamma(1.5 * kk + 1.0));
      case ContinuumFamily::Kinf_BB:
        return 0.5 * std::exp((kk + 1.0) / 2.0 * std::log(kPi) - log_gamma(1.5 * kk + 1.5));
      case ContinuumFamily::Linf_BM:
      case ContinuumFamily::Linf_BB:
        break;  // handled below via the Kinf value
    }
  }
  switch (family) {
    case ContinuumFamily::L1_BM:
      return std::pow(kPi, kk / 2.0) / (gamma_fn(kk / 2.0 + 1.0) * gamma_fn(kk + 1.0));
    case ContinuumFamily::L1_BB:
      return 0.5 * std::pow(kPi, (kk + 1.0) / 2.0) /
             (gamma_fn(kk / 2.0 + 1.5) * gamma_fn(kk + 1.0));
    case ContinuumFamily::Kinf_BM:
      return std::pow(kPi, kk / 2.0) / gamma_fn(1.5 * kk + 1.0);
    case ContinuumFamily::Kinf_BB:
      return 0.5 * std::pow(kPi, (kk + 1.0) / 2.0) / gamma_fn(1.5 * kk + 1.5);
    case ContinuumFamily::Linf_BM:
      return std::pow(2.0, -kk) * vk_continuum(ContinuumFamily::Kinf_BM, k);
    case ContinuumFamily::Linf_BB:
      return std::pow(2.0, -kk) * vk_continuum(ContinuumFamily::Kinf_BB, k);
  }
  throw std::domain_error("vk_continuum: unknown family");
}

double v1_sobolev_exact(const BodyFamily& body) {
  require(body.admissible(), "v1_sobolev_exact: monotone class with centered star is empty");
  if (body.p == PNorm::Two) {
    throw unsupported_error(
        "v1_sobolev_exact: p = 2 bodies are ellipsoids; use the ellipsoid table");
  }
  const bool k_class = body.set_class == SetClass::K;
  if (body.p == PNorm::One) {
    switch (body.star) {
      case Star::BM:
        return k_class ? kPi : 2.0;
      case Star::BB:
        return k_class ? kPi * std::log(2.0) : kPi / 2.0;
      default:
        throw unsupported_error("v1_sobolev_exact: no printed value for p = 1 centered stars");
    }
  }
  // p = infinity
  if (k_class) {
    switch (body.star) {
      case Star::BM:
        return 4.0 / 3.0;
      case Star::BB:
        return kPi / 4.0;
      case Star::CBM:
        return (2.0 * std::sqrt(3.0) + std::log(2.0 + std::sqrt(3.0))) / 6.0;
      case Star::CBB:
        // X_CBB has constant variance 1/12, so the width route gives
        // 2 * integral of sigma = 2 / sqrt(12) = 1 / sqrt(3). A published
        // table lists 2 / sqrt(3) for this entry, which is inconsistent with
        // that variance by exactly a factor of 2; the Monte Carlo
        // verification confirms 1 / sqrt(3).
        return 1.0 / std::sqrt(3.0);
    }
  }
  return body.star == Star::BM ? 2.0 / 3.0 : kPi / 8.0;
}

double vk_simplex_discrete(int n, int k, WalkFamily family) {
  require(k <= n, "vk_simplex_discrete: need k <= n");
  const double scale = 1.0 / factorial(k);
  if (family == WalkFamily::BM) {
    return scale * composition_sum(n, k, [](double prod, int) { return 1.0 / std::sqrt(prod); });
  }
  return scale * composition_sum(n, k, [n](double prod, int used) {
    return std::sqrt(static_cast<double>(n - used) / (static_cast<double>(n) * prod));
  });
}

double vk_zonotope_discrete(int n, int k, WalkFamily family) {
  require(k <= n, "vk_zonotope_discrete: need k <= n");
  if (family == WalkFamily::BM) {
    return tuple_sum(n, k, [](double prod, int) { return std::sqrt(prod); });
  }
  return tuple_sum(n, k, [n](double prod, int last) {
    return std::sqrt(prod * static_cast<double>(n - last));
  });
}

double expected_hull_volume(int k, WalkFamily family) {
  require(k >= 1, "expected_hull_volume: k must be positive");
  const double kap = ball_volume(k);
  const double scale = std::pow(kTwoPi, -0.5 * k);
  if (family == WalkFamily::BM) return kap * kap * scale;
  return kap * ball_volume(k + 1) * scale / 2.0;
}

double expected_hull_vm(int k, int m, WalkFamily family) {
  require(0 <= m && m <= k, "expected_hull_vm: need 0 <= m <= k");
  if (m == 0) return 1.0;
  const double common = std::pow(kTwoPi, -0.5 * m) * binomial_general(k, m) *
                        ball_volume(k) / ball_volume(k - m);
  if (family == WalkFamily::BM) return common * ball_volume(m);
  return 0.5 * common * ball_volume(m + 1);
}

double expected_walk_hull(int n, int k, int m, WalkFamily family) {
  require(1 <= m && m <= k, "expected_walk_hull: need 1 <= m <= k");
  const double prefactor = std::pow(kTwoPi, -0.5 * m) * binomial_general(k, m) *
                           ball_volume(k) / ball_volume(k - m);
  double sum;
  if (family == WalkFamily::BM) {
    sum = composition_sum(n, m, [](double prod, int) { return 1.0 / std::sqrt(prod); });
  } else {
    sum = composition_sum(n, m, [n](double prod, int used) {
      return std::sqrt(static_cast<double>(n - used) / (static_cast<double>(n) * prod));
    });
  }
  return prefactor * sum;
}

double expected_walk_zonotope(int n, int k, WalkFamily family) {
  require(1 <= k && k <= n, "expected_walk_zonotope: need 1 <= k <= n");
  const double prefactor = factorial(k) * ball_volume(k) * std::pow(kTwoPi, -0.5 * k);
  double sum;
  if (family == WalkFamily::BM) {
    sum = composition_sum(n, k, [](double prod, int) { return std::sqrt(prod); });
  } else {
    // B_{n,k}: k+1 positive parts with exact sum n; the last part is n - sum
    // of the first k, kept positive by restricting the enumeration.
    sum = composition_sum(n, k, [n](double prod, int used) {
      return used < n ? std::sqrt(prod * static_cast<double>(n - used)) : 0.0;
    });
  }
  return prefactor * sum;
}

double expected_brownian_zonoid_volume(int k, WalkFamily family, ZonoidMode mode) {
  require(k >= 1, "expected_brownian_zonoid_volume: k must be positive");
  if (mode == ZonoidMode::AsPrinted) {
    const double base =
        std::pow(2.0 * std::sqrt(kTwoPi), -static_cast<double>(k)) / binomial_general(1.5 * k, k);
    if (family == WalkFamily::BM) return base;
    return 0.5 * std::sqrt(kPi) * base;
  }
  const double vk = vk_continuum(
      family == WalkFamily::BM ? ContinuumFamily::Linf_BM : ContinuumFamily::Linf_BB, k);
  return factorial(k) * ball_volume(k) * std::pow(kTwoPi, -0.5 * k) * vk;
}

double ellipsoid_v1_table(EllipsoidFamilyTag family, int d) {
  if (family == EllipsoidFamilyTag::E) {
    if (d == 2) return 2.0 * std::log(2.0);
    if (d == 4) return 2.0;
  } else {
    if (d == 2) return 8.0 * constant("catalan") / kPi;
    if (d == 4) return 28.0 * constant("zeta3") / (kPi * kPi);
  }
  throw unsupported_error("ellipsoid_v1_table: no printed value for d = " + std::to_string(d));
}

}  // namespace ivol
