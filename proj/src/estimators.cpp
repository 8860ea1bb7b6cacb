#include "ivol/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ivol/geometry.hpp"
#include "ivol/special_functions.hpp"

namespace ivol {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;
constexpr long kChunkSize = 4096;

struct ChunkStats {
  double sum = 0.0;
  double sum_sq = 0.0;
};

}  // namespace

// Chunked deterministic mean: chunk c always draws from RngStream(seed, c)
// and partial sums are reduced in chunk order, so the result is bit-identical
// for every worker count.
McResult mc_mean(const std::function<double(RngStream&)>& sampler, long n_samples,
                 std::uint64_t seed, int workers) {
  if (n_samples < 2) throw std::domain_error("mc_mean: need at least 2 samples");
  const long n_chunks = (n_samples + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkStats> partial(n_chunks);

  auto run_chunk = [&](long c) {
    RngStream rng(seed, static_cast<std::uint64_t>(c));
    const long count = std::min(kChunkSize, n_samples - c * kChunkSize);
    ChunkStats stats;
    for (long i = 0; i < count; ++i) {
      const double draw = sampler(rng);
      if (!std::isfinite(draw)) {
        throw std::runtime_error("mc_mean: non-finite draw at chunk " + std::to_string(c) +
                                 ", index " + std::to_string(i));
      }
      stats.sum += draw;
      stats.sum_sq += draw * draw;
    }
    partial[c] = stats;
  };

  const int thread_count =
      static_cast<int>(std::max<long>(1, std::min<long>(workers, n_chunks)));
  if (thread_count == 1) {
    for (long c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<long> next_chunk{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker_loop = [&] {
      for (;;) {
        const long c = next_chunk.fetch_add(1);
        if (c >= n_chunks) return;
        try {
          run_chunk(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker_loop);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  double sum = 0.0, sum_sq = 0.0;
  for (const ChunkStats& s : partial) {
    sum += s.sum;
    sum_sq += s.sum_sq;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double variance = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  McResult result;
  result.estimate = mean;
  result.std_error = std::sqrt(variance / n);
  result.n_samples = n_samples;
  result.seed = seed;
  result.workers = workers;
  return result;
}

McResult tsirelson_vk(const std::function<Eigen::MatrixXd(RngStream&)>& body_sampler, int k,
                      long n_samples, std::uint64_t seed, int workers) {
  if (k < 1 || k > 6) throw std::domain_error("tsirelson_vk: need 1 <= k <= 6 (hull cap)");
  auto sampler = [&body_sampler](RngStream& rng) {
    return polytope_volume(convex_hull(body_sampler(rng)));
  };
  const double scale =
      std::pow(kTwoPi, 0.5 * k) / (gamma_fn(k + 1.0) * ball_volume(k));
  return mc_mean(sampler, n_samples, seed, workers).scaled(scale);
}

VerifyReport verify(const std::string& name, double exact, const McResult& mc,
                    double z_threshold) {
  VerifyReport report;
  report.name = name;
  report.exact = exact;
  report.mc = mc;
  report.tolerance_policy = "two-sided |z| <= " + std::to_string(z_threshold);
  if (mc.std_error > 0.0) {
    report.z_score = (mc.estimate - exact) / mc.std_error;
  } else {
    report.z_score =
        mc.estimate == exact ? 0.0 : std::numeric_limits<double>::infinity();
  }
  report.pass = std::abs(report.z_score) <= z_threshold;
  return report;
}

namespace {

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1}
// exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double total = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    total += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * total, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 50 || ys.size() < 50) {
    throw std::domain_error("ks_two_sample: need at least 50 samples per side");
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const long n1 = static_cast<long>(xs.size());
  const long n2 = static_cast<long>(ys.size());
  double d_max = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    const double f1 = static_cast<double>(i) / n1;
    const double f2 = static_cast<double>(j) / n2;
    d_max = std::max(d_max, std::abs(f1 - f2));
  }
  const double ne = static_cast<double>(n1) * n2 / (n1 + n2);
  const double sqrt_ne = std::sqrt(ne);
  const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d_max;
  KsResult result;
  result.statistic = d_max;
  result.p_value = kolmogorov_q(lambda);
  result.n1 = n1;
  result.n2 = n2;
  return result;
}

}  // namespace ivol
