// Structural fingerprints: descendant sums, root-to-leaf lineages, and the
// positional node codification of rooted trees. LD equality decides set
// equality without building an evaluator.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ego/assembly.hpp"

namespace ego {

// Desc(0) = 1; Desc(branch) = sum over children + 1. Order- and
// duplicate-sensitive on raw assemblies; the equality theorems hold on
// normalized forms.
std::uint64_t desc(const Assembly& a);
inline std::uint64_t desc(const EFormula& f) { return desc(f.tree()); }

using Lineage = std::vector<std::uint64_t>;  // root Desc first, ends in 1

struct LineageSet {
  std::vector<Lineage> lineages;  // sorted, deduplicated

  friend bool operator==(const LineageSet& a, const LineageSet& b) {
    return a.lineages == b.lineages;
  }
};

LineageSet lineage_set(const Assembly& a);
inline LineageSet lineage_set(const EFormula& f) { return lineage_set(f.tree()); }

// LD(X) = LD(Y) iff X = Y, valid on canonical forms only.
bool fast_equal(const EFormula& x, const EFormula& y);

// Per-node variant: lineage set of every subtree, keyed by node code.
std::map<std::string, LineageSet> lineage_sets_by_node(const Assembly& a);

// n-th natural with no digit 0, 1-based: 1..9, 11..19, 21..99, 111, ...
std::string h_number(std::uint64_t n);

struct NodeCode {
  std::string digits;  // "0" for the root; never ends in '0' otherwise

  friend bool operator==(const NodeCode& a, const NodeCode& b) {
    return a.digits == b.digits;
  }
  friend bool operator<(const NodeCode& a, const NodeCode& b) {
    return a.digits < b.digits;
  }
};

// Child codes of a node with code d: the first-born gets p0t (d = p‖t split
// at the last '0'), later children get pt0 + h_number(k).
NodeCode first_born_code(const NodeCode& parent);
NodeCode later_born_code(const NodeCode& parent, std::uint64_t second_born_index);

// Position paths are child-index lists from the root; the same subtree value
// can occur at many positions.
using NodePath = std::vector<std::uint32_t>;

class NodeCodeMap {
 public:
  explicit NodeCodeMap(const Assembly& root);

  const Assembly& root() const { return root_; }
  // Breadth-first (code assignment) order.
  const std::vector<std::pair<NodePath, NodeCode>>& entries() const { return entries_; }

  const NodeCode& code_at(const NodePath& path) const;  // error: unknown path
  Assembly subtree_at(const NodeCode& code) const;      // error: unknown code

 private:
  Assembly root_;
  std::vector<std::pair<NodePath, NodeCode>> entries_;
  std::map<std::string, NodePath> by_code_;
};

inline NodeCodeMap code_nodes(const Assembly& a) { return NodeCodeMap(a); }

// Convenience one-shot lookup; recodes the tree each call.
Assembly subassembly_at(const Assembly& a, const NodeCode& code);

}  // namespace ego
