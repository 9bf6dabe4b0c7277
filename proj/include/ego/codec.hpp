// Encodings between external data and formulas: Kuratowski pairs and tuples,
// von Neumann ordinals, attractor encoding of frequency distributions, and
// the positional binary codec used for archetype serials and environment
// strings.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ego/assembly.hpp"

namespace ego {

// <x,y> = {{x},{x,y}}; collapses to {{x}} when x = y.
EFormula ordered_pair(const EFormula& x, const EFormula& y);
std::pair<EFormula, EFormula> unpair(const EFormula& p);  // domain_error if not a pair

// Left fold <x1,...,xn> = <<x1,...,xn-1>,xn>; a 1-tuple is the value itself.
EFormula ordered_tuple(const std::vector<EFormula>& xs);

// 0, {0}, {0,{0}}, {0,{0},{0,{0}}}, ...
EFormula ordinal(std::uint64_t k);

struct FrequencyDistribution {
  std::vector<double> frequencies;  // contiguous intervals, n >= 2
};

// Attractor rules: non-attractors map to {0}; an attractor of its left
// (right) neighbour wraps that neighbour's assembly into an ordered pair
// with 0; two-sided attractors order the halves by the larger neighbour.
// Result is the tuple over the relative maxima. Distributions with no
// attractor at all (e.g. all-equal) are rejected as degenerate.
EFormula attractor_encode(const FrequencyDistribution& d);

// Positional binary: digit atoms {{{0},0},0} (zero, doubling as the radix
// marker) and {{{0},0},{0}} (one); the digit for position k from the right
// carries k extra brace layers; members are collected with the radix,
// which always sorts first canonically.
EFormula ebinary_zero_atom();
EFormula ebinary_one_atom();
EFormula ebinary_radix();

EFormula ebinary_encode(std::string_view bits);      // domain_error on non-bit input
std::uint64_t ebinary_decode(const EFormula& e);     // domain_error on malformed atoms

// Value codec for serials: ordinary binary, no leading zeros.
EFormula ebinary_from_value(std::uint64_t value);
std::string binary_digits(std::uint64_t value);

// Order-significant log-only shortcut; never stored.
std::string ebinary_shortcut(std::string_view bits);

}  // namespace ego
