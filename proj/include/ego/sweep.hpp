// Exhaustive and randomized verification kernels for the theorem properties.
// Every sweep has a serial reference path and an OpenMP path over the same
// pair grid; both must produce identical results.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ego/assembly.hpp"

namespace ego {

// All canonical formulas with at most max_nodes nodes, in canonical order.
std::vector<EFormula> enumerate_eformulas_max_nodes(std::size_t max_nodes);

// All canonical formulas with height <= max_depth and every branch width
// <= max_width.
std::vector<EFormula> enumerate_eformulas_bounded(std::size_t max_width, std::size_t max_depth);

// Deterministic generators (raw draws from a fixed-algorithm engine; no
// distribution adapters, so results are identical across platforms).
EFormula random_eformula(std::mt19937_64& rng, int max_depth, int max_width);
Assembly random_raw_assembly(std::mt19937_64& rng, int max_depth, int max_width);
// A raw tree set-equal to f by construction: shuffled children and
// duplicated members at random.
Assembly shuffled_duplicate_variant(const EFormula& f, std::mt19937_64& rng);

struct SweepOutcome {
  std::uint64_t checked = 0;
  std::vector<std::string> failures;  // stable order regardless of thread count

  bool ok() const { return failures.empty(); }
};

// classify(equality_evaluator(x,y)) must be Tautology exactly on equal pairs
// and Contradiction otherwise, over the full corpus x corpus grid.
SweepOutcome selfref_pair_sweep(const std::vector<EFormula>& corpus, bool parallel);

// Same theorem over seeded random pairs up to max_depth; half the pairs are
// equal by construction (shuffled duplicate variants).
SweepOutcome selfref_random_sweep(std::uint64_t seed, std::size_t pair_count, int max_depth,
                                  bool parallel);

// fast_equal and canonical comparison must both agree with the Def 2
// reference on the corpus grid.
SweepOutcome lineage_pair_sweep(const std::vector<EFormula>& corpus, bool parallel);

// Replays the worked examples end to end; failure strings name the example.
SweepOutcome examples_suite();

bool openmp_enabled();

}  // namespace ego
