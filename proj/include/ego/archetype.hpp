// Typed knowledge records forming the engine's memory graph. An archetype is
// the formula {name, meaning}; the name couples the individual prefix, a
// monotone serial, and a typology code; the meaning couples a typology
// vinculum with a datum (a formula, or the names of two nested archetypes).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ego/assembly.hpp"

namespace ego {

enum class Typology : std::uint64_t {
  AbstractBase = 0,
  Factors = 1,
  Paradigma = 2,
  AbstractComposed = 3,
  GenusParadigma = 4,
  QuantityEvent = 7,
  Event = 9,
  Perception = 10,
  Quantity = 11,
  QuantityPair = 12,
  Chain = 20,
  SensusUndam = 21,
};

std::string to_string(Typology t);

// Fixed marker formulas; the A/B markers order the two halves of a paired
// datum, mirroring the quantity-pair and factors layouts.
EFormula individual_prefix_formula();
EFormula typology_base_formula();
EFormula typology_formula(Typology t);
EFormula marker_a();
EFormula marker_b();
EFormula generic_category_marker();  // the generic C(X) of a genus paradigma

struct Archetype {
  EFormula name;
  EFormula vinculum;
  EFormula datum;
  Typology typology;
  std::uint64_t serial = 0;

  std::string name_key() const { return name.render(); }
  EFormula meaning() const;          // {vinculum, datum}
  EFormula whole() const;            // {name, meaning}
};

// Datum built from the names of two other archetypes, in A/B order.
EFormula paired_datum(const EFormula& first_name, const EFormula& second_name);

class ArchetypeStore {
 public:
  // Creates and stores a new archetype; serials increase by one per call.
  const Archetype& put(Typology t, EFormula datum);
  const Archetype* get_by_name(const std::string& name_key) const;
  std::vector<const Archetype*> find_by_typology(Typology t) const;
  std::size_t size() const { return by_name_.size(); }

  // Walks a Composed or Chain nesting left to right down to level 0 and
  // returns the base datums in order.
  std::vector<EFormula> descend_to_level0(const Archetype& a) const;

  std::uint64_t next_serial() const { return next_serial_; }

 private:
  std::uint64_t next_serial_ = 1;
  std::map<std::string, Archetype> by_name_;
  std::vector<std::string> insertion_order_;
};

}  // namespace ego
