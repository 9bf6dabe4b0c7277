// Categorization calculus: subassembly enumeration, common aspects,
// categories, the instance test, and the homeostatic ledger.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ego/assembly.hpp"
#include "ego/lineage.hpp"

namespace ego {

// Every position in x paired with its node code: the formula itself, its
// members, and transitively all members of members.
std::vector<std::pair<NodeCode, EFormula>> subassemblies(const EFormula& x);

bool is_subassembly(const EFormula& candidate, const EFormula& host);

// All common aspects of the inputs. A value is selected when every input
// holds an occurrence of it that is not strictly inside an occurrence of an
// already-selected aspect in that same input; the scan runs from larger to
// smaller values so that containers are settled before their parts.
std::vector<EFormula> common_aspects(const std::vector<EFormula>& xs);

struct Category {
  EFormula properties;                  // aspects as members, canonical order
  std::vector<std::string> provenance;  // renders of the generating instances

  std::string key() const { return properties.render(); }
  std::vector<EFormula> property_list() const { return properties.members(); }
};

Category category(const std::vector<EFormula>& xs);

// Inclusion sufficiency test: x is an instance when every property of c is a
// subassembly of x.
bool is_instance(const EFormula& x, const Category& c);

// Per-category produced-minus-consumed counters keyed by the canonical
// render of the category's properties.
class HomeostaticLedger {
 public:
  void apply(const std::string& category_key, std::int64_t delta);
  std::int64_t at(const std::string& category_key) const;
  bool in_equilibrium(const std::string& category_key) const { return at(category_key) == 0; }
  const std::map<std::string, std::int64_t>& entries() const { return entries_; }
  std::map<std::string, std::int64_t> nonzero() const;

 private:
  std::map<std::string, std::int64_t> entries_;
};

}  // namespace ego
