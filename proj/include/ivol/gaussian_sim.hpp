#ifndef IVOL_GAUSSIAN_SIM_HPP
#define IVOL_GAUSSIAN_SIM_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "ivol/closed_forms.hpp"
#include "ivol/mc.hpp"

namespace ivol {

// Discretized sample of one of the four Gaussian processes on the uniform
// grid t_i = i / steps, i = 0..steps.
struct Path {
  Star star = Star::BM;
  int steps = 0;
  Eigen::VectorXd values;  // steps + 1 entries
};

// Cumulative sums of i.i.d. N(0, 1/n_steps) increments; the bridge subtracts
// t W(1), the centered variants subtract the grid-trapezoid mean.
Path sample_path(Star star, int n_steps, RngStream& rng);

// L^q norm on [0,1]: trapezoid rule for q in {1, 2}, grid max of |.| for
// q = infinity. positive_part clamps negatives to 0 first.
double path_norm(const Path& path, PNorm q, bool positive_part = false);

// One width draw of the Sobolev body indexed by (set_class, star, p), built
// from a single path sample with the conjugate exponent q (1/p + 1/q = 1):
// wid(K) = 2 ||X||_q, wid(L) = ||X^+||_q + ||X^-||_q.
double sample_width(SetClass set_class, Star star, PNorm p, int n_steps, RngStream& rng);

// Partial sums S_1..S_n of i.i.d. standard Gaussian vectors in R^k, as the
// columns of a k x n matrix. The bridge variant returns S_i - (i/n) S_n.
Eigen::MatrixXd sample_walk(int k, int n, RngStream& rng, bool bridge);

// Weighted chi-square families with half-axis rules 1/(n pi) (S) and
// 1/((n - 1/2) pi) (C), each with multiplicity d.
enum class ChiSqFamily { S, C };

// One draw of sum_{n <= N} lambda_n^2 chi2_d plus the exact mean of the
// truncated tail, d sum_{n > N} lambda_n^2.
double sample_weighted_chisq(ChiSqFamily family, int d, long truncation, RngStream& rng);

// Exact Laplace transform E exp(-t draw) of the untruncated series:
// (sqrt(2t)/sinh sqrt(2t))^{d/2} for S, (cosh sqrt(2t))^{-d/2} for C.
double chisq_laplace_exact(ChiSqFamily family, int d, double t);

// Half-axis rule for a Hilbert-space ellipsoid: an explicit finite list, or
// one of the E_d / F_d families truncated at N terms (axes repeated with
// multiplicity d, truncated tail folded into tail_compensation).
struct EllipsoidSpec {
  std::vector<double> axes;
  double tail_compensation = 0.0;  // sum of lambda^2 over the omitted axes

  static EllipsoidSpec explicit_axes(std::vector<double> axes);
  static EllipsoidSpec family(EllipsoidFamilyTag family, int d, long truncation);
};

// One draw of sqrt(M) with M = sum lambda_n^2 N_n^2 for k = 1, or
// sqrt(det W_k) with (W_k)_{ij} = sum lambda_n^2 N_{n,i} N_{n,j} for k >= 2;
// the tail compensation is added to M / the diagonal of W_k.
double sample_ellipsoid_functional(const EllipsoidSpec& spec, int k, RngStream& rng);

// Monte Carlo estimates of V_k of the ellipsoid {x : x' Sigma^{-1} x <= 1}
// and of the dual route sqrt(det Sigma) (kappa_k / kappa_{n-k}) V_{n-k} of
// the polar ellipsoid; the two agree in distribution-free expectation.
std::pair<McResult, McResult> rivin_duality_check(const Eigen::MatrixXd& sigma, int k,
                                                  long samples, std::uint64_t seed,
                                                  int workers = 1);

}  // namespace ivol

#endif
