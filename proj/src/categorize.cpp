#include "ego/categorize.hpp"

#include <algorithm>
#include <unordered_map>

namespace ego {

std::vector<std::pair<NodeCode, EFormula>> subassemblies(const EFormula& x) {
  NodeCodeMap map(x.tree());
  std::vector<std::pair<NodeCode, EFormula>> out;
  out.reserve(map.entries().size());
  for (const auto& [path, code] : map.entries())
    out.emplace_back(code, normalize(map.subtree_at(code)));
  return out;
}

bool is_subassembly(const EFormula& candidate, const EFormula& host) {
  if (candidate == host) return true;
  for (const EFormula& m : host.members())
    if (is_subassembly(candidate, m)) return true;
  return false;
}

namespace {

// Preorder flattening of one input; subtree of node i spans ids [i, i+count).
struct FlatInput {
  std::vector<std::string> keys;         // canonical render per node
  std::vector<std::uint64_t> counts;     // node_count per node
  std::vector<bool> covered;             // strictly inside a selected aspect
  std::unordered_map<std::string, std::vector<std::size_t>> occurrences;

  void flatten(const Assembly& node) {
    std::size_t id = keys.size();
    keys.push_back(render(node));
    counts.push_back(node.node_count());
    occurrences[keys[id]].push_back(id);
    for (const Assembly& c : node.children()) flatten(c);
  }

  bool has_exposed(const std::string& key) const {
    auto it = occurrences.find(key);
    if (it == occurrences.end()) return false;
    for (std::size_t id : it->second)
      if (!covered[id]) return true;
    return false;
  }

  void cover(const std::string& key) {
    auto it = occurrences.find(key);
    if (it == occurrences.end()) return;
    for (std::size_t id : it->second)
      for (std::size_t j = id + 1; j < id + counts[id]; ++j) covered[j] = true;
  }
};

}  // namespace

std::vector<EFormula> common_aspects(const std::vector<EFormula>& xs) {
  if (xs.empty()) throw domain_error("common aspects require at least one input");

  std::vector<EFormula> inputs;
  inputs.reserve(xs.size());
  for (const EFormula& x : xs) inputs.push_back(normalize(x.tree()));

  std::vector<FlatInput> flat(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    flat[i].flatten(inputs[i].tree());
    flat[i].covered.assign(flat[i].keys.size(), false);
  }

  // Candidate values present in every input, largest first.
  struct Candidate {
    std::string key;
    std::uint64_t count;
  };
  std::vector<Candidate> candidates;
  {
    for (const auto& [key, occ] : flat[0].occurrences) {
      bool everywhere = true;
      for (std::size_t i = 1; i < flat.size() && everywhere; ++i)
        everywhere = flat[i].occurrences.count(key) > 0;
      if (everywhere)
        candidates.push_back({key, flat[0].counts[occ.front()]});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });

  std::vector<EFormula> selected;
  Limits relaxed{.max_depth = SIZE_MAX, .max_width = SIZE_MAX};
  for (const Candidate& c : candidates) {
    bool exposed_everywhere = true;
    for (const FlatInput& f : flat)
      if (!f.has_exposed(c.key)) { exposed_everywhere = false; break; }
    if (!exposed_everywhere) continue;
    for (FlatInput& f : flat) f.cover(c.key);
    selected.push_back(normalize(parse(c.key, relaxed)));
  }
  return selected;
}

Category category(const std::vector<EFormula>& xs) {
  std::vector<EFormula> aspects = common_aspects(xs);
  std::vector<Assembly> members;
  members.reserve(aspects.size());
  for (const EFormula& a : aspects) members.push_back(a.tree());
  Category cat;
  cat.properties = normalize(Assembly::branch(std::move(members)));
  for (const EFormula& x : xs) cat.provenance.push_back(x.render());
  return cat;
}

bool is_instance(const EFormula& x, const Category& c) {
  for (const EFormula& prop : c.properties.members())
    if (!is_subassembly(prop, x)) return false;
  return true;
}

void HomeostaticLedger::apply(const std::string& category_key, std::int64_t delta) {
  entries_[category_key] += delta;
}

std::int64_t HomeostaticLedger::at(const std::string& category_key) const {
  auto it = entries_.find(category_key);
  return it == entries_.end() ? 0 : it->second;
}

std::map<std::string, std::int64_t> HomeostaticLedger::nonzero() const {
  std::map<std::string, std::int64_t> out;
  for (const auto& [k, v] : entries_)
    if (v != 0) out[k] = v;
  return out;
}

}  // namespace ego
