#include <random>

#include "doctest.h"
#include "ego/codec.hpp"
#include "ego/sweep.hpp"

using namespace ego;

namespace {

EFormula ef(const std::string& text) { return normalize(parse(text)); }

}  // namespace

TEST_CASE("ordered pairs take the Kuratowski form") {
  CHECK(ordered_pair(ef("0"), ef("{0}")) == ef("{{0},{0,{0}}}"));
  EFormula x = ef("{0,{0}}");
  CHECK(ordered_pair(x, x) == normalize(Assembly::branch({Assembly::branch({x.tree()})})));
}

TEST_CASE("pairs decode") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    EFormula x = random_eformula(rng, 3, 3);
    EFormula y = random_eformula(rng, 3, 3);
    auto [a, b] = unpair(ordered_pair(x, y));
    CHECK(a == x);
    CHECK(b == y);
  }
  CHECK_THROWS_AS(unpair(ef("0")), domain_error);
  CHECK_THROWS_AS(unpair(ef("{0,{0},{{0}}}")), domain_error);
}

TEST_CASE("pairing is injective up to set equality") {
  std::vector<EFormula> small = enumerate_eformulas_bounded(2, 2);
  for (const EFormula& a : small)
    for (const EFormula& b : small)
      for (const EFormula& c : small)
        for (const EFormula& d : small) {
          bool pair_equal = ordered_pair(a, b) == ordered_pair(c, d);
          CHECK(pair_equal == (a == c && b == d));
        }
}

TEST_CASE("tuples fold left") {
  EFormula a = ef("0"), b = ef("{0}"), c = ef("{{0}}");
  CHECK(ordered_tuple({a}) == a);
  CHECK(ordered_tuple({a, b, c}) == ordered_pair(ordered_pair(a, b), c));
  CHECK_THROWS_AS(ordered_tuple({}), domain_error);
}

TEST_CASE("ordinals") {
  CHECK(ordinal(0) == ef("0"));
  CHECK(ordinal(1) == ef("{0}"));
  CHECK(ordinal(2) == ef("{0,{0}}"));
  CHECK(ordinal(3) == ef("{0,{0},{0,{0}}}"));
}

TEST_CASE("attractor encoding of the worked two-maxima distribution") {
  // Shape: rise to a both-sided attractor, dip, single right attractor,
  // fall; the maxima are the third and fifth frequencies.
  EFormula zero;
  EFormula x2 = ordered_pair(ef("{0}"), zero);
  EFormula x3 = ordered_pair(ordered_pair(x2, zero), ordered_pair(zero, ef("{0}")));
  EFormula x5 = ordered_pair(zero, ef("{0}"));
  CHECK(attractor_encode({{1, 4, 5, 2, 3, 1}}) == ordered_pair(x3, x5));
}

TEST_CASE("attractor encoding with three maxima and a leading plateau") {
  // First and third frequencies are non-attracted; the sixth attracts only
  // its left neighbour.
  EFormula zero;
  EFormula not0 = ef("{0}");
  EFormula x3 = ordered_pair(ordered_pair(not0, zero), ordered_pair(zero, not0));
  EFormula x6 = ordered_pair(not0, zero);
  CHECK(attractor_encode({{5, 2, 6, 1, 1, 2}}) == ordered_tuple({not0, x3, x6}));
}

TEST_CASE("attractor encoding with a reversed two-sided attractor") {
  // The fifth frequency attracts both sides with the right neighbour
  // larger, so the halves swap.
  EFormula zero;
  EFormula not0 = ef("{0}");
  EFormula x1 = ordered_pair(zero, not0);
  EFormula x5 = ordered_pair(ordered_pair(zero, not0), ordered_pair(not0, zero));
  CHECK(attractor_encode({{5, 2, 2, 1, 6, 3}}) == ordered_tuple({x1, not0, x5}));
}

TEST_CASE("attractor encoding rejects degenerate distributions") {
  CHECK_THROWS_AS(attractor_encode({{1, 1, 1, 1}}), domain_error);
  CHECK_THROWS_AS(attractor_encode({{2, 1, 2}}), domain_error);
  CHECK_THROWS_AS(attractor_encode({{1}}), domain_error);
}

TEST_CASE("attractor encoding is order-sensitive and deterministic") {
  EFormula a = attractor_encode({{1, 2}});
  EFormula b = attractor_encode({{2, 1}});
  CHECK_FALSE(a == b);
  CHECK(attractor_encode({{1, 2}}) == a);
}

TEST_CASE("binary digit atoms and radix") {
  CHECK(ebinary_zero_atom() == ef("{0,{0,{0}}}"));
  CHECK(ebinary_one_atom() == ef("{{0},{0,{0}}}"));
  CHECK(ebinary_radix() == ebinary_zero_atom());
}

TEST_CASE("the worked decode of 101") {
  EFormula e = ebinary_encode("101");
  CHECK(ebinary_decode(e) == 5);
  CHECK(ebinary_decode(ebinary_encode("0")) == 0);
  // the radix marker sorts first
  CHECK(e.member(0) == ebinary_radix());
}

TEST_CASE("the third-position digit of 100 is wrapped twice") {
  EFormula e = ebinary_encode("100");
  Assembly wrapped = Assembly::branch({Assembly::branch({ebinary_one_atom().tree()})});
  bool found = false;
  for (const EFormula& m : e.members())
    if (m == normalize(wrapped)) found = true;
  CHECK(found);
  CHECK(ebinary_decode(e) == 4);
}

TEST_CASE("round trip equals the positional value for every string up to length 10") {
  for (std::size_t len = 1; len <= 10; ++len) {
    for (std::uint64_t bits = 0; bits < (1ull << len); ++bits) {
      std::string text;
      for (std::size_t i = 0; i < len; ++i)
        text += ((bits >> (len - 1 - i)) & 1) ? '1' : '0';
      std::uint64_t expected = std::stoull(text, nullptr, 2);
      CHECK(ebinary_decode(ebinary_encode(text)) == expected);
    }
  }
}

TEST_CASE("encode rejects non-bit input and decode rejects malformed atoms") {
  CHECK_THROWS_AS(ebinary_encode(""), domain_error);
  CHECK_THROWS_AS(ebinary_encode("102"), domain_error);
  CHECK_THROWS_AS(ebinary_decode(ef("0")), domain_error);
  CHECK_THROWS_AS(ebinary_decode(ef("{0}")), domain_error);
  CHECK_THROWS_AS(ebinary_decode(ef("{{0},{0,{0}},0}")), domain_error);
}

TEST_CASE("serial values render without leading zeros") {
  CHECK(binary_digits(0) == "0");
  CHECK(binary_digits(5) == "101");
  CHECK(binary_digits(8) == "1000");
  for (std::uint64_t v = 0; v < 200; ++v)
    CHECK(ebinary_decode(ebinary_from_value(v)) == v);
}

TEST_CASE("the shortcut form is a log rendering only") {
  CHECK(ebinary_shortcut("101") == "[1,0,1]");
}
