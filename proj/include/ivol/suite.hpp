#ifndef IVOL_SUITE_HPP
#define IVOL_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ivol {

struct SuiteOptions {
  std::uint64_t seed = 1;
  int workers = 1;
  // Multiplies every Monte Carlo sample count; < 1 gives a fast smoke run.
  double sample_scale = 1.0;
};

struct SuiteCheck {
  int criterion = 0;
  std::string name;
  bool pass = false;
  bool has_numbers = false;  // exact/estimate/std_error/z_score populated
  double exact = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  long n_samples = 0;
  std::string detail;
};

// The full verification battery, criteria 1-14; several criteria expand to
// multiple rows. Deterministic for fixed (seed, sample_scale) and any worker
// count.
std::vector<SuiteCheck> run_suite(const SuiteOptions& options);

// True when every row of every criterion passed.
bool suite_passed(const std::vector<SuiteCheck>& rows);

}  // namespace ivol

#endif
