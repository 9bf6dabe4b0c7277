// Compares the serial reference sweeps against the OpenMP path on the same
// pair grids and reports timings.

#include <chrono>
#include <cstdio>

#include "ego/sweep.hpp"

namespace {

using Clock = std::chrono::steady_clock;

void print_row(const char* name, bool parallel, const ego::SweepOutcome& out, double ms) {
  std::printf("%-22s %-8s checked=%llu failures=%zu %.1f ms\n", name,
              parallel ? "openmp" : "serial", static_cast<unsigned long long>(out.checked),
              out.failures.size(), ms);
}

double time_pair_sweep(const char* name,
                       ego::SweepOutcome (*fn)(const std::vector<ego::EFormula>&, bool),
                       const std::vector<ego::EFormula>& corpus, bool parallel) {
  auto t0 = Clock::now();
  ego::SweepOutcome out = fn(corpus, parallel);
  double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  print_row(name, parallel, out, ms);
  return ms;
}

double time_random_sweep(bool parallel) {
  auto t0 = Clock::now();
  ego::SweepOutcome out = ego::selfref_random_sweep(20240901, 1000, 4, parallel);
  double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  print_row("selfref random sweep", parallel, out, ms);
  return ms;
}

}  // namespace

int main() {
  std::printf("openmp available: %s\n", ego::openmp_enabled() ? "yes" : "no");
  std::vector<ego::EFormula> corpus = ego::enumerate_eformulas_max_nodes(9);
  std::printf("corpus: %zu formulas, %zu pairs\n", corpus.size(),
              corpus.size() * corpus.size());

  double s1 = time_pair_sweep("selfref pair sweep", ego::selfref_pair_sweep, corpus, false);
  double p1 = time_pair_sweep("selfref pair sweep", ego::selfref_pair_sweep, corpus, true);
  double s2 = time_pair_sweep("lineage pair sweep", ego::lineage_pair_sweep, corpus, false);
  double p2 = time_pair_sweep("lineage pair sweep", ego::lineage_pair_sweep, corpus, true);
  double s3 = time_random_sweep(false);
  double p3 = time_random_sweep(true);

  if (p1 > 0 && p2 > 0 && p3 > 0)
    std::printf("speedups: selfref %.2fx lineage %.2fx random %.2fx\n", s1 / p1, s2 / p2,
                s3 / p3);
  return 0;
}
