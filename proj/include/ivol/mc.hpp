#ifndef IVOL_MC_HPP
#define IVOL_MC_HPP

#include <cstdint>
#include <functional>

#include "ivol/rng.hpp"

namespace ivol {

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;

  McResult scaled(double c) const {
    McResult r = *this;
    r.estimate *= c;
    r.std_error *= std::abs(c);
    return r;
  }
};

// Sample mean and standard error of a scalar sampler. Samples are split into
// fixed-size chunks; chunk c draws from RngStream(seed, c) and chunk partial
// sums are reduced in chunk order, so the result is bit-identical for any
// worker count. Throws on a non-finite draw, reporting the stream position.
McResult mc_mean(const std::function<double(RngStream&)>& sampler, long n_samples,
                 std::uint64_t seed, int workers);

}  // namespace ivol

#endif
