#ifndef IVOL_ESTIMATORS_HPP
#define IVOL_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "ivol/mc.hpp"

namespace ivol {

// Exact value against a Monte Carlo estimate with a two-sided z verdict.
struct VerifyReport {
  std::string name;
  double exact = 0.0;
  McResult mc;
  double z_score = 0.0;
  bool pass = false;
  std::string tolerance_policy;
};

// Spectrum estimator: mean hull volume of sampled point sets in R^k rescaled
// by (2 pi)^{k/2} / (k! kappa_k), which converts expected spectrum volumes
// into intrinsic volumes.
McResult tsirelson_vk(const std::function<Eigen::MatrixXd(RngStream&)>& body_sampler, int k,
                      long n_samples, std::uint64_t seed, int workers = 1);

VerifyReport verify(const std::string& name, double exact, const McResult& mc,
                    double z_threshold = 4.0);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  long n1 = 0;
  long n2 = 0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov series
// and the standard finite-sample effective-n correction. Ties are handled by
// evaluating the gap only after both samples have consumed every copy of an
// equal value (equivalent to the midrank convention for the statistic).
KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys);

}  // namespace ivol

#endif
