#include "ivol/gaussian_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "ivol/special_functions.hpp"

namespace ivol {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// Trapezoid weights on the uniform grid: h/2 at the endpoints, h inside.
double trapezoid_integral(const Eigen::VectorXd& values, int steps) {
  const double h = 1.0 / steps;
  double inner = 0.0;
  for (int i = 1; i < steps; ++i) inner += values(i);
  return h * (0.5 * (values(0) + values(steps)) + inner);
}

}  // namespace

Path sample_path(Star star, int n_steps, RngStream& rng) {
  if (n_steps < 1) throw std::domain_error("sample_path: n_steps must be >= 1");
  Path path;
  path.star = star;
  path.steps = n_steps;
  path.values.resize(n_steps + 1);
  const double sd = 1.0 / std::sqrt(static_cast<double>(n_steps));
  path.values(0) = 0.0;
  for (int i = 1; i <= n_steps; ++i) {
    path.values(i) = path.values(i - 1) + sd * rng.next_gaussian();
  }
  if (star == Star::BB || star == Star::CBB) {
    const double terminal = path.values(n_steps);
    for (int i = 0; i <= n_steps; ++i) {
      path.values(i) -= terminal * i / static_cast<double>(n_steps);
    }
    path.values(n_steps) = 0.0;
  }
  if (star == Star::CBM || star == Star::CBB) {
    path.values.array() -= trapezoid_integral(path.values, n_steps);
  }
  return path;
}

double path_norm(const Path& path, PNorm q, bool positive_part) {
  const int n = path.steps;
  auto value = [&](int i) {
    const double v = path.values(i);
    return positive_part ? std::max(v, 0.0) : v;
  };
  if (q == PNorm::Inf) {
    double m = 0.0;
    for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(value(i)));
    return m;
  }
  Eigen::VectorXd transformed(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double v = value(i);
    transformed(i) = q == PNorm::One ? std::abs(v) : v * v;
  }
  const double integral = trapezoid_integral(transformed, n);
  return q == PNorm::One ? integral : std::sqrt(integral);
}

double sample_width(SetClass set_class, Star star, PNorm p, int n_steps, RngStream& rng) {
  if (set_class == SetClass::L && (star == Star::CBM || star == Star::CBB)) {
    throw std::domain_error("sample_width: the monotone class has no centered variants");
  }
  const PNorm q = p == PNorm::One ? PNorm::Inf : (p == PNorm::Inf ? PNorm::One : PNorm::Two);
  Path path = sample_path(star, n_steps, rng);
  if (set_class == SetClass::K) return 2.0 * path_norm(path, q, false);
  const double plus = path_norm(path, q, true);
  path.values = -path.values;
  const double minus = path_norm(path, q, true);
  return plus + minus;
}

Eigen::MatrixXd sample_walk(int k, int n, RngStream& rng, bool bridge) {
  if (k < 1 || n < 1) throw std::domain_error("sample_walk: need k, n >= 1");
  Eigen::MatrixXd points(k, n);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) sum(j) += rng.next_gaussian();
    points.col(i) = sum;
  }
  if (bridge) {
    const Eigen::VectorXd terminal = points.col(n - 1);
    for (int i = 0; i < n; ++i) {
      points.col(i) -= terminal * ((i + 1) / static_cast<double>(n));
    }
    points.col(n - 1).setZero();
  }
  return points;
}

namespace {

double chisq_axis(ChiSqFamily family, long n) {
  const double shift = family == ChiSqFamily::S ? 0.0 : 0.5;
  return 1.0 / ((static_cast<double>(n) - shift) * kPi);
}

// d * sum_{n > N} lambda_n^2, from the closed forms sum 1/n^2 = pi^2/6 and
// sum 1/(n - 1/2)^2 = pi^2/2.
double chisq_tail(ChiSqFamily family, int d, long truncation) {
  double head = 0.0;
  for (long n = 1; n <= truncation; ++n) {
    const double lambda = chisq_axis(family, n);
    head += lambda * lambda;
  }
  // Full sums: sum lambda_n^2 = (1/pi^2)(pi^2/6) = 1/6 for S and
  // (1/pi^2)(pi^2/2) = 1/2 for C.
  const double total = family == ChiSqFamily::S ? 1.0 / 6.0 : 0.5;
  return d * std::max(0.0, total - head);
}

}  // namespace

double sample_weighted_chisq(ChiSqFamily family, int d, long truncation, RngStream& rng) {
  if (d < 1 || truncation < 1) {
    throw std::domain_error("sample_weighted_chisq: need d >= 1, N >= 1");
  }
  static thread_local ChiSqFamily cached_family = ChiSqFamily::S;
  static thread_local int cached_d = 0;
  static thread_local long cached_n = 0;
  static thread_local double cached_tail = 0.0;
  if (cached_d != d || cached_n != truncation || cached_family != family) {
    cached_family = family;
    cached_d = d;
    cached_n = truncation;
    cached_tail = chisq_tail(family, d, truncation);
  }
  double total = cached_tail;
  for (long n = 1; n <= truncation; ++n) {
    const double lambda = chisq_axis(family, n);
    double chi2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double g = rng.next_gaussian();
      chi2 += g * g;
    }
    total += lambda * lambda * chi2;
  }
  return total;
}

double chisq_laplace_exact(ChiSqFamily family, int d, double t) {
  if (!(t >= 0.0)) throw std::domain_error("chisq_laplace_exact: t must be >= 0");
  if (t == 0.0) return 1.0;
  const double s = std::sqrt(2.0 * t);
  const double base = family == ChiSqFamily::S ? s / std::sinh(s) : 1.0 / std::cosh(s);
  return std::pow(base, 0.5 * d);
}

EllipsoidSpec EllipsoidSpec::explicit_axes(std::vector<double> axes) {
  if (axes.empty()) throw std::domain_error("EllipsoidSpec: empty axis list");
  for (double a : axes) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::domain_error("EllipsoidSpec: axes must be positive and finite");
    }
  }
  EllipsoidSpec spec;
  spec.axes = std::move(axes);
  return spec;
}

EllipsoidSpec EllipsoidSpec::family(EllipsoidFamilyTag family, int d, long truncation) {
  if (d < 1 || truncation < 1) throw std::domain_error("EllipsoidSpec: need d >= 1, N >= 1");
  EllipsoidSpec spec;
  spec.axes.reserve(static_cast<std::size_t>(truncation) * d);
  const ChiSqFamily cf = family == EllipsoidFamilyTag::E ? ChiSqFamily::S : ChiSqFamily::C;
  for (long n = 1; n <= truncation; ++n) {
    const double lambda = chisq_axis(cf, n);
    for (int j = 0; j < d; ++j) spec.axes.push_back(lambda);
  }
  spec.tail_compensation = chisq_tail(cf, d, truncation);
  return spec;
}

double sample_ellipsoid_functional(const EllipsoidSpec& spec, int k, RngStream& rng) {
  if (k < 1) throw std::domain_error("sample_ellipsoid_functional: k must be >= 1");
  if (k == 1) {
    double m = spec.tail_compensation;
    for (double lambda : spec.axes) {
      const double g = rng.next_gaussian();
      m += lambda * lambda * g * g;
    }
    return std::sqrt(m);
  }
  // Fewer than k axes and no tail mass: W_k is rank-deficient, det is exactly 0.
  if (spec.tail_compensation == 0.0 && static_cast<int>(spec.axes.size()) < k) {
    for (std::size_t j = 0; j < spec.axes.size() * k; ++j) rng.next_gaussian();
    return 0.0;
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(k, k) * spec.tail_compensation;
  Eigen::VectorXd g(k);
  for (double lambda : spec.axes) {
    for (int i = 0; i < k; ++i) g(i) = rng.next_gaussian();
    w.selfadjointView<Eigen::Lower>().rankUpdate(g, lambda * lambda);
  }
  w = w.selfadjointView<Eigen::Lower>();
  const double det = w.determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

std::pair<McResult, McResult> rivin_duality_check(const Eigen::MatrixXd& sigma, int k,
                                                  long samples, std::uint64_t seed,
                                                  int workers) {
  const int n = static_cast<int>(sigma.rows());
  if (n != sigma.cols() || n < 2 || n > 6) {
    throw std::domain_error("rivin_duality_check: need a square matrix of size 2..6");
  }
  if (k < 1 || k > n - 1) throw std::domain_error("rivin_duality_check: need 1 <= k <= n-1");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * sigma.cwiseAbs().maxCoeff()) {
    throw std::domain_error("rivin_duality_check: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  const Eigen::VectorXd mu = eig.eigenvalues();
  if (mu.minCoeff() <= 0.0) {
    throw std::domain_error("rivin_duality_check: matrix is not positive definite");
  }
  std::vector<double> primal_axes(n), dual_axes(n);
  double det_sigma = 1.0;
  for (int i = 0; i < n; ++i) {
    primal_axes[i] = std::sqrt(mu(i));
    dual_axes[i] = 1.0 / primal_axes[i];
    det_sigma *= mu(i);
  }
  const EllipsoidSpec primal = EllipsoidSpec::explicit_axes(primal_axes);
  const EllipsoidSpec dual = EllipsoidSpec::explicit_axes(dual_axes);

  auto vk_scale = [](int order) {
    return std::pow(kTwoPi, 0.5 * order) / gamma_fn(order + 1.0);
  };
  McResult lhs = mc_mean(
      [&primal, k](RngStream& rng) { return sample_ellipsoid_functional(primal, k, rng); },
      samples, seed, workers)
          .scaled(vk_scale(k));
  const int dual_order = n - k;
  McResult rhs = mc_mean(
      [&dual, dual_order](RngStream& rng) {
        return sample_ellipsoid_functional(dual, dual_order, rng);
      },
      samples, derive_seed(seed, 0x7269766e), workers)
          .scaled(vk_scale(dual_order) * std::sqrt(det_sigma) * ball_volume(k) /
                  ball_volume(dual_order));
  return {lhs, rhs};
}

}  // namespace ivol
