// Acceptance gate: runs the full verification battery and prints one
// PASS/FAIL line per criterion. Criterion 14 additionally re-runs the CLI
// `suite` command twice and compares the output files byte for byte.
//
// Usage: acceptance <path-to-cli-binary> [sample-scale]

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ivol/suite.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

bool cli_reruns_identical(const std::string& cli) {
  const std::string args =
      " suite --seed 7 --samples 3000 --workers 2 --out-path ";
  for (const char* path : {"accept_rerun_a.json", "accept_rerun_b.json"}) {
    const std::string cmd = cli + args + path + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    // The smoke-scale suite may report expected verification failures (exit
    // 4); only a hard error disqualifies the determinism check.
    const int code = WEXITSTATUS(status);
    if (code != 0 && code != 4) {
      std::fprintf(stderr, "suite invocation failed with exit code %d\n", code);
      return false;
    }
  }
  const std::string a = slurp("accept_rerun_a.json");
  return !a.empty() && a == slurp("accept_rerun_b.json");
}

const char* kDescriptions[15] = {
    "",
    "exact first-intrinsic-volume table to 1e-12",
    "Gaussian-width route, p = 1 (grid 4096, |z| <= 4)",
    "Gaussian-width route, p = inf (grid 4096, |z| <= 4)",
    "covariance determinant product identities to 1e-9",
    "parallelotope geometry vs enumerated sums to 1e-9",
    "walk hull spectrum estimates vs enumerated sums",
    "half-perimeter of the 10-step walk hull",
    "continuum 2-D hull volume, one-sided bias band",
    "zonoid volume adjudication between the two closed forms",
    "ellipsoid widths, Laplace transforms, and polar duality",
    "width distribution identities (two-sample KS, p > 1e-3)",
    "discrete-to-continuum convergence of the exact sums",
    "parallel-body and projection-average oracles within 5%",
    "byte-identical reruns and worker-count determinism",
};

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  ivol::SuiteOptions options;
  options.seed = 20260823;
  options.workers = std::max(1u, std::thread::hardware_concurrency());
  options.sample_scale = argc > 2 ? std::atof(argv[2]) : 1.0;

  const std::vector<ivol::SuiteCheck> rows = ivol::run_suite(options);

  std::map<int, std::pair<int, int>> tally;  // criterion -> (passed, total)
  std::map<int, std::vector<const ivol::SuiteCheck*>> failures;
  for (const ivol::SuiteCheck& row : rows) {
    auto& [passed, total] = tally[row.criterion];
    ++total;
    if (row.pass) {
      ++passed;
    } else {
      failures[row.criterion].push_back(&row);
    }
  }

  // Criterion 14 = in-process determinism row AND the external CLI byte check.
  bool external_ok = true;
  if (cli.empty()) {
    std::fprintf(stderr, "warning: no CLI path given; skipping the byte-level rerun check\n");
  } else {
    external_ok = cli_reruns_identical(cli);
    auto& [passed, total] = tally[14];
    ++total;
    if (external_ok) {
      ++passed;
    }
  }

  bool all_pass = true;
  for (int criterion = 1; criterion <= 14; ++criterion) {
    const auto [passed, total] = tally[criterion];
    const bool ok = passed == total && total > 0;
    all_pass = all_pass && ok;
    std::printf("criterion %2d: %s  (%d/%d)  %s\n", criterion, ok ? "PASS" : "FAIL", passed,
                total, kDescriptions[criterion]);
    for (const ivol::SuiteCheck* row : failures[criterion]) {
      if (row->has_numbers) {
        std::printf("              failed: %s  exact=%.10g estimate=%.10g z=%.3g  [%s]\n",
                    row->name.c_str(), row->exact, row->estimate, row->z_score,
                    row->detail.c_str());
      } else {
        std::printf("              failed: %s  [%s]\n", row->name.c_str(),
                    row->detail.c_str());
      }
    }
    if (criterion == 14 && !external_ok) {
      std::printf("              failed: cli_byte_identical_reruns\n");
    }
  }
  std::fflush(stdout);
  return all_pass ? 0 : 1;
}
