#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "ego/lineage.hpp"
#include "ego/sweep.hpp"

using namespace ego;

TEST_CASE("descendant sums") {
  CHECK(desc(parse("0")) == 1);
  CHECK(desc(parse("{0,{0}}")) == 4);
  CHECK(desc(parse("{0,{{0}},{0,{0}}}")) == 9);
}

TEST_CASE("lineages of the worked example") {
  LineageSet s = lineage_set(parse("{0,{{0}},{0,{0}}}"));
  std::vector<Lineage> expected{{9, 1}, {9, 3, 2, 1}, {9, 4, 1}, {9, 4, 2, 1}};
  std::sort(expected.begin(), expected.end());
  CHECK(s.lineages == expected);
  CHECK(lineage_set(parse("0")).lineages == std::vector<Lineage>{{1}});
}

TEST_CASE("lineages separate equal-desc unequal trees") {
  LineageSet a = lineage_set(parse("{{{0}}}"));
  LineageSet b = lineage_set(parse("{0,{0}}"));
  CHECK(a.lineages == std::vector<Lineage>{{4, 3, 2, 1}});
  CHECK(b.lineages == std::vector<Lineage>{{4, 1}, {4, 2, 1}});
  CHECK_FALSE(a == b);
}

TEST_CASE("fast equality agrees with the reference on the exhaustive corpus") {
  std::vector<EFormula> corpus = enumerate_eformulas_bounded(3, 3);
  for (const EFormula& x : corpus)
    for (const EFormula& y : corpus) {
      bool reference = set_equal(x.tree(), y.tree());
      CHECK(fast_equal(x, y) == reference);
      CHECK((x == y) == reference);
    }
}

TEST_CASE("fast equality agrees on random normalized pairs") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 300; ++i) {
    EFormula x = random_eformula(rng, 4, 3);
    EFormula y = (i % 2) ? normalize(shuffled_duplicate_variant(x, rng))
                         : random_eformula(rng, 4, 3);
    CHECK(fast_equal(x, y) == set_equal(x.tree(), y.tree()));
  }
}

TEST_CASE("equal normalized formulas share a descendant sum") {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 200; ++i) {
    EFormula x = random_eformula(rng, 4, 3);
    EFormula y = normalize(shuffled_duplicate_variant(x, rng));
    CHECK(desc(x) == desc(y));
  }
}

TEST_CASE("the H sequence skips every numeral containing 0") {
  std::vector<std::string> oracle;
  for (std::uint64_t n = 1; oracle.size() < 10000; ++n) {
    std::string digits = std::to_string(n);
    if (digits.find('0') == std::string::npos) oracle.push_back(digits);
  }
  for (std::uint64_t i = 0; i < oracle.size(); ++i) CHECK(h_number(i + 1) == oracle[i]);
}

TEST_CASE("child code rules reproduce the worked values") {
  CHECK(first_born_code(NodeCode{"012004"}).digits == "0120004");
  CHECK(later_born_code(NodeCode{"012004"}, 1).digits == "01200401");
  CHECK(later_born_code(NodeCode{"012004"}, 2).digits == "01200402");
}

TEST_CASE("row-one codes run through the H sequence") {
  std::vector<Assembly> children;
  for (int i = 0; i < 12; ++i) children.push_back(Assembly::leaf());
  NodeCodeMap map(Assembly::branch(children));
  std::vector<std::string> codes;
  for (const auto& [path, code] : map.entries())
    if (path.size() == 1) codes.push_back(code.digits);
  CHECK(codes == std::vector<std::string>{"01", "02", "03", "04", "05", "06", "07", "08",
                                          "09", "011", "012", "013"});
}

TEST_CASE("node codes are injective and never end in zero") {
  std::mt19937_64 rng(79);
  for (int t = 0; t < 500; ++t) {
    Assembly tree = random_raw_assembly(rng, 6, 4);
    while (tree.node_count() > 200) tree = random_raw_assembly(rng, 6, 4);
    NodeCodeMap map(tree);
    std::set<std::string> seen;
    for (const auto& [path, code] : map.entries()) {
      CHECK(seen.insert(code.digits).second);          // injective
      if (code.digits != "0") CHECK(code.digits.back() != '0');
      if (path.empty()) CHECK(code.digits == "0");
    }
    CHECK(map.entries().size() == tree.node_count());
  }
}

TEST_CASE("initial parts ending in two zeros mark first-borns below row one") {
  std::mt19937_64 rng(83);
  for (int t = 0; t < 100; ++t) {
    Assembly tree = random_raw_assembly(rng, 5, 3);
    NodeCodeMap map(tree);
    for (const auto& [path, code] : map.entries()) {
      if (code.digits == "0") continue;
      const std::string& d = code.digits;
      std::size_t last_zero = d.find_last_of('0');
      bool double_zero = last_zero != std::string::npos && last_zero > 0 &&
                         d[last_zero - 1] == '0';
      bool first_born_deep = path.size() > 1 && path.back() == 0;
      CHECK(double_zero == first_born_deep);
    }
  }
}

TEST_CASE("codes address subtrees") {
  Assembly u = parse("{0,{{0}},{0,{{0}}}}");
  NodeCodeMap map(u);
  CHECK(render(map.subtree_at(NodeCode{"0"})) == "{0,{{0}},{0,{{0}}}}");
  CHECK(render(map.subtree_at(NodeCode{"02"})) == "{{0}}");
  CHECK_THROWS_AS(map.subtree_at(NodeCode{"099"}), domain_error);
  std::mt19937_64 rng(89);
  for (int t = 0; t < 50; ++t) {
    Assembly tree = random_raw_assembly(rng, 4, 3);
    NodeCodeMap m(tree);
    for (const auto& [path, code] : m.entries()) {
      const Assembly* node = &tree;
      for (std::uint32_t i : path) node = &node->children()[i];
      CHECK(render(m.subtree_at(code)) == render(*node));
    }
  }
}

TEST_CASE("per-node lineage sets cover every code") {
  Assembly x = parse("{0,{{0}},{0,{0}}}");
  auto by_node = lineage_sets_by_node(x);
  CHECK(by_node.size() == x.node_count());
  CHECK(by_node.at("0") == lineage_set(x));
  CHECK(by_node.at("01") == lineage_set(parse("0")));
}
