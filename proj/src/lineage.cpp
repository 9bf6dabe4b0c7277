#include "ego/lineage.hpp"

#include <algorithm>
#include <deque>

namespace ego {

std::uint64_t desc(const Assembly& a) { return a.node_count(); }

namespace {

void collect_lineages(const Assembly& a, Lineage& prefix, std::vector<Lineage>& out) {
  prefix.push_back(desc(a));
  if (a.is_leaf()) {
    out.push_back(prefix);
  } else {
    for (const Assembly& c : a.children()) collect_lineages(c, prefix, out);
  }
  prefix.pop_back();
}

}  // namespace

LineageSet lineage_set(const Assembly& a) {
  LineageSet set;
  Lineage prefix;
  collect_lineages(a, prefix, set.lineages);
  std::sort(set.lineages.begin(), set.lineages.end());
  set.lineages.erase(std::unique(set.lineages.begin(), set.lineages.end()),
                     set.lineages.end());
  return set;
}

bool fast_equal(const EFormula& x, const EFormula& y) {
  if (x.node_count() != y.node_count()) return false;
  return lineage_set(x) == lineage_set(y);
}

std::string h_number(std::uint64_t n) {
  // bijective base 9 over digits 1..9
  std::string out;
  while (n > 0) {
    std::uint64_t d = n % 9;
    if (d == 0) d = 9;
    out += static_cast<char>('0' + d);
    n = (n - d) / 9;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

// Split a non-root code at its last '0': p keeps the '0', t is the non-empty
// tail (codes never end in '0' away from the root).
std::pair<std::string, std::string> split_terminal(const std::string& digits) {
  auto zero = digits.find_last_of('0');
  return {digits.substr(0, zero + 1), digits.substr(zero + 1)};
}

}  // namespace

NodeCode first_born_code(const NodeCode& parent) {
  auto [p, t] = split_terminal(parent.digits);
  return NodeCode{p + "0" + t};
}

NodeCode later_born_code(const NodeCode& parent, std::uint64_t second_born_index) {
  auto [p, t] = split_terminal(parent.digits);
  return NodeCode{p + t + "0" + h_number(second_born_index)};
}

NodeCodeMap::NodeCodeMap(const Assembly& root) : root_(root) {
  struct Item {
    NodePath path;
    NodeCode code;
    const Assembly* node;
  };
  std::deque<Item> queue;
  queue.push_back({{}, NodeCode{"0"}, &root_});
  while (!queue.empty()) {
    Item item = std::move(queue.front());
    queue.pop_front();
    entries_.push_back({item.path, item.code});
    by_code_[item.code.digits] = item.path;
    const auto& kids = item.node->children();
    for (std::uint32_t i = 0; i < kids.size(); ++i) {
      NodeCode code;
      if (item.path.empty()) {
        code = NodeCode{"0" + h_number(i + 1)};  // row 1 rule
      } else if (i == 0) {
        code = first_born_code(item.code);
      } else {
        code = later_born_code(item.code, i);
      }
      NodePath child_path = item.path;
      child_path.push_back(i);
      queue.push_back({std::move(child_path), std::move(code), &kids[i]});
    }
  }
}

const NodeCode& NodeCodeMap::code_at(const NodePath& path) const {
  for (const auto& [p, c] : entries_)
    if (p == path) return c;
  throw domain_error("unknown node path");
}

Assembly NodeCodeMap::subtree_at(const NodeCode& code) const {
  auto it = by_code_.find(code.digits);
  if (it == by_code_.end()) throw domain_error("unknown node code " + code.digits);
  const Assembly* node = &root_;
  for (std::uint32_t idx : it->second) node = &node->children().at(idx);
  return *node;
}

Assembly subassembly_at(const Assembly& a, const NodeCode& code) {
  return NodeCodeMap(a).subtree_at(code);
}

std::map<std::string, LineageSet> lineage_sets_by_node(const Assembly& a) {
  NodeCodeMap map(a);
  std::map<std::string, LineageSet> out;
  for (const auto& [path, code] : map.entries())
    out[code.digits] = lineage_set(map.subtree_at(code));
  return out;
}

}  // namespace ego
