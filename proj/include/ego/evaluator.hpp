// Relational evaluators: constructed formulas that are tautologies exactly
// when the evaluated set relation holds. Equality is the primitive; the
// others are built from it.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ego/assembly.hpp"

namespace ego {

// Cont(X): X itself when it has members, {0} otherwise.
EFormula container(const EFormula& x);

// One surjective pairing between containers; the first component of every
// pair always comes from Cont(x), even when the surjection runs y -> x.
struct Pairing {
  enum class Direction { XtoY, YtoX };
  Direction direction = Direction::XtoY;
  std::vector<std::pair<EFormula, EFormula>> pairs;
};

struct PairingEnumeration {
  std::vector<Pairing> pairings;
  bool truncated = false;
};

// All surjections Cont(x) -> Cont(y) when any exist, otherwise all
// surjections Cont(y) -> Cont(x) reordered. `exact` makes overflowing the
// limit a resource_error instead of a truncation.
PairingEnumeration enumerate_pairings(const EFormula& x, const EFormula& y,
                                      std::size_t limit = 10000, bool exact = false);

// {X=Y}: tautology iff x = y, contradiction otherwise.
EFormula equality_evaluator(const EFormula& x, const EFormula& y,
                            std::size_t pairing_limit = 10000);

// The executable theorem: true iff the evaluator classifies Tautology exactly
// when set equality holds and Contradiction exactly when it does not.
bool check_self_reference(const EFormula& x, const EFormula& y,
                          std::size_t pairing_limit = 10000);

// Recovers the evaluated arguments from the {X≡Y} conjunct embedded in an
// equality evaluator.
std::pair<EFormula, EFormula> recover_arguments(const EFormula& evaluator);

// {X∈Y}: single-member y gives {X=Y1}, otherwise the disjunction of the
// member equalities. y must have members.
EFormula membership_evaluator(const EFormula& x, const EFormula& y,
                              std::size_t pairing_limit = 10000);

// {X⊆Y}: conjunction of membership evaluators; both arguments non-0.
EFormula subset_evaluator(const EFormula& x, const EFormula& y,
                          std::size_t pairing_limit = 10000);

struct SetOpResult {
  EFormula value;
  bool disjoint = false;  // intersection only: no common member, value is 0
  // Built and checked only in verification mode: the defining conjunction,
  // which must classify Tautology.
  std::optional<EFormula> verification;
};

SetOpResult intersection(const EFormula& x, const EFormula& y, bool verify = false);
SetOpResult set_union(const EFormula& x, const EFormula& y, bool verify = false);

}  // namespace ego
