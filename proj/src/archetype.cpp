#include "ego/archetype.hpp"

#include "ego/codec.hpp"

namespace ego {

std::string to_string(Typology t) {
  switch (t) {
    case Typology::AbstractBase: return "abstract-base";
    case Typology::Factors: return "factors";
    case Typology::Paradigma: return "paradigma";
    case Typology::AbstractComposed: return "abstract-composed";
    case Typology::GenusParadigma: return "genus-paradigma";
    case Typology::QuantityEvent: return "quantity-event";
    case Typology::Event: return "event";
    case Typology::Perception: return "perception";
    case Typology::Quantity: return "quantity";
    case Typology::QuantityPair: return "quantity-pair";
    case Typology::Chain: return "chain";
    case Typology::SensusUndam: return "sensus-undam";
  }
  return "?";
}

namespace {

Assembly nest(std::uint32_t layers) {
  Assembly a = Assembly::leaf();
  for (std::uint32_t i = 0; i < layers; ++i) a = Assembly::branch({a});
  return a;
}

EFormula marked(std::uint32_t layers, const Assembly& tail) {
  return normalize(Assembly::branch({nest(layers), tail}));
}

}  // namespace

EFormula individual_prefix_formula() { return marked(6, nest(1)); }
EFormula typology_base_formula() { return marked(4, nest(1)); }
EFormula marker_a() { return marked(5, Assembly::leaf()); }
EFormula marker_b() { return marked(5, nest(1)); }
EFormula generic_category_marker() { return marked(7, nest(1)); }

EFormula typology_formula(Typology t) {
  EFormula unit = ebinary_from_value(static_cast<std::uint64_t>(t));
  return normalize(
      Assembly::branch({typology_base_formula().tree(), unit.tree()}));
}

EFormula Archetype::meaning() const {
  return normalize(Assembly::branch({vinculum.tree(), datum.tree()}));
}

EFormula Archetype::whole() const {
  return normalize(Assembly::branch({name.tree(), meaning().tree()}));
}

EFormula paired_datum(const EFormula& first_name, const EFormula& second_name) {
  Assembly a = Assembly::branch({marker_a().tree(), first_name.tree()});
  Assembly b = Assembly::branch({marker_b().tree(), second_name.tree()});
  return normalize(Assembly::branch({std::move(a), std::move(b)}));
}

namespace {

EFormula individual_name() {
  static const EFormula name = normalize(Assembly::branch(
      {individual_prefix_formula().tree(), ebinary_from_value(1).tree()}));
  return name;
}

}  // namespace

const Archetype& ArchetypeStore::put(Typology t, EFormula datum) {
  Archetype a;
  a.typology = t;
  a.serial = next_serial_++;
  a.vinculum = typology_formula(t);
  a.datum = std::move(datum);
  a.name = normalize(Assembly::branch({individual_name().tree(),
                                       ebinary_from_value(a.serial).tree(),
                                       a.vinculum.tree()}));
  std::string key = a.name_key();
  auto [it, inserted] = by_name_.emplace(key, std::move(a));
  if (!inserted) throw domain_error("duplicate archetype name");
  insertion_order_.push_back(key);
  return it->second;
}

const Archetype* ArchetypeStore::get_by_name(const std::string& name_key) const {
  auto it = by_name_.find(name_key);
  return it == by_name_.end() ? nullptr : &it->second;
}

std::vector<const Archetype*> ArchetypeStore::find_by_typology(Typology t) const {
  std::vector<const Archetype*> out;
  for (const std::string& key : insertion_order_) {
    const Archetype& a = by_name_.at(key);
    if (a.typology == t) out.push_back(&a);
  }
  return out;
}

std::vector<EFormula> ArchetypeStore::descend_to_level0(const Archetype& a) const {
  if (a.typology != Typology::AbstractComposed && a.typology != Typology::Chain)
    return {a.datum};
  std::vector<EFormula> out;
  std::vector<const Archetype*> stack{&a};
  std::size_t steps = 0;
  while (!stack.empty()) {
    const Archetype* cur = stack.back();
    stack.pop_back();
    if (++steps > 100000) throw domain_error("archetype nesting too deep or cyclic");
    if (cur->typology == Typology::AbstractComposed || cur->typology == Typology::Chain) {
      // datum = {{A,left},{B,right}}; push right first so the left-to-right
      // swipe comes out in order.
      EFormula left, right;
      bool have_left = false, have_right = false;
      for (const EFormula& half : cur->datum.members()) {
        if (half.member_count() != 2) throw domain_error("malformed paired datum");
        EFormula m0 = half.member(0);
        EFormula m1 = half.member(1);
        EFormula marker = m0, value = m1;
        if (m0 == marker_a() || m0 == marker_b()) { marker = m0; value = m1; }
        else { marker = m1; value = m0; }
        if (marker == marker_a()) { left = value; have_left = true; }
        else if (marker == marker_b()) { right = value; have_right = true; }
      }
      if (!have_left || !have_right) throw domain_error("malformed paired datum");
      const Archetype* l = get_by_name(left.render());
      const Archetype* r = get_by_name(right.render());
      if (!l || !r) throw domain_error("dangling archetype reference");
      stack.push_back(r);
      stack.push_back(l);
    } else {
      out.push_back(cur->datum);
    }
  }
  return out;
}

}  // namespace ego
