#include "ego/engine.hpp"

#include <algorithm>
#include <deque>

#include "ego/codec.hpp"

namespace ego {

EFormula event_formula(const std::vector<EFormula>& triggers,
                       const std::vector<EFormula>& removed,
                       const std::vector<EFormula>& emergents) {
  auto group = [](const std::vector<EFormula>& parts) {
    if (parts.empty()) return Assembly::leaf();
    std::vector<Assembly> members;
    members.reserve(parts.size());
    for (const EFormula& p : parts) members.push_back(p.tree());
    return Assembly::branch(std::move(members));
  };
  return normalize(Assembly::branch({group(triggers), group(removed), group(emergents)}));
}

std::size_t Modality::compliant_count() const {
  std::size_t n = 0;
  for (const Element& e : elements) n += e.compliant;
  return n;
}

long Modality::deficit() const {
  return static_cast<long>(initial_compliant) - static_cast<long>(compliant_count());
}

namespace {

std::string join_keys(const std::vector<std::string>& keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += '+';
    out += keys[i];
  }
  return out;
}

std::set<std::string> prop_set(const EFormula& properties) {
  std::set<std::string> out;
  for (const EFormula& p : properties.members()) out.insert(p.render());
  return out;
}

EFormula props_from_set(const std::set<std::string>& props) {
  Limits relaxed{SIZE_MAX, SIZE_MAX};
  std::vector<Assembly> members;
  for (const std::string& p : props) members.push_back(parse(p, relaxed));
  return normalize(Assembly::branch(std::move(members)));
}

std::set<std::string> intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

bool shares_letter(const std::set<std::string>& a, const std::set<std::string>& b) {
  // 0 is a property of everything; a meaningful intersection needs more.
  for (const std::string& p : intersect(a, b))
    if (p != "0") return true;
  return false;
}

}  // namespace

Engine::Engine(const std::vector<std::pair<std::string, std::vector<EFormula>>>& starting_states,
               TraceWriter& trace, EngineConfig config)
    : trace_(trace), config_(config) {
  if (starting_states.empty()) throw domain_error("at least one modality required");
  for (const auto& [id, states] : starting_states) {
    if (states.empty()) throw domain_error("modality " + id + " has no internal states");
    for (const Modality& other : modalities_)
      if (other.id == id) throw domain_error("duplicate modality id " + id);
    Modality m;
    m.id = id;
    modalities_.push_back(std::move(m));
  }
  // The starting states form a partition; a state shared by two modalities
  // is an overlap error.
  for (std::size_t i = 0; i < starting_states.size(); ++i)
    for (std::size_t j = i + 1; j < starting_states.size(); ++j)
      for (const EFormula& a : starting_states[i].second)
        for (const EFormula& b : starting_states[j].second)
          if (a == b)
            throw domain_error("modalities " + starting_states[i].first + " and " +
                               starting_states[j].first + " overlap");

  std::vector<Assembly> organisation_members;
  for (std::size_t i = 0; i < starting_states.size(); ++i) {
    Modality& m = modalities_[i];
    const auto& states = starting_states[i].second;
    const std::string key = ensure_category(states);
    m.organisation_category = categories_.at(key).category;
    for (const EFormula& s : states) {
      Element e;
      e.id = next_element_id_++;
      e.formula = s;
      e.category_key = key;
      e.compliant = is_instance(s, m.organisation_category);
      m.elements.push_back(std::move(e));
    }
    m.initial_compliant = m.compliant_count();
    organisation_members.push_back(m.organisation_category.properties.tree());
    trace_.emit(0, "init",
                {{"modality", m.id},
                 {"cat", key},
                 {"count", "+" + std::to_string(states.size())}});
  }
  organisation_ = normalize(Assembly::branch(std::move(organisation_members)));
  trace_.emit(0, "organisation", {{"render", organisation_.render()}});
  record_snapshot();
}

Modality& Engine::modality(const std::string& id) {
  for (Modality& m : modalities_)
    if (m.id == id) return m;
  throw domain_error("unknown modality " + id);
}

std::string Engine::ensure_category(const std::vector<EFormula>& instances) {
  Category cat = category(instances);
  std::string key = ensure_category_props(cat.properties);
  // Unify by canonical key; provenance of the first creation wins.
  return key;
}

std::string Engine::ensure_category_props(const EFormula& properties) {
  std::string key = properties.render();
  auto it = categories_.find(key);
  if (it == categories_.end()) {
    CategoryRecord rec;
    rec.category.properties = properties;
    // One base archetype per property, folded left into a composed nesting;
    // walking the nesting down to level 0 recovers the property list.
    std::vector<EFormula> props = properties.members();
    std::string top;
    for (std::size_t i = 0; i < props.size(); ++i) {
      const Archetype& base = archetypes_.put(Typology::AbstractBase, props[i]);
      if (i == 0) {
        top = base.name_key();
      } else {
        const Archetype& composed = archetypes_.put(
            Typology::AbstractComposed,
            paired_datum(archetypes_.get_by_name(top)->name, base.name));
        top = composed.name_key();
      }
    }
    rec.archetype_name = top;
    categories_.emplace(key, std::move(rec));
  }
  return key;
}

std::string Engine::category_archetype_name(const std::string& key) const {
  return categories_.at(key).archetype_name;
}

std::set<std::string> Engine::props_of(const std::string& category_key) const {
  return prop_set(categories_.at(category_key).category.properties);
}

std::size_t Engine::available(const std::string& category_key) const {
  std::size_t n = 0;
  for (const Modality& m : modalities_)
    for (const Element& e : m.elements)
      if (!e.compliant && e.category_key == category_key) ++n;
  return n;
}

std::optional<Engine::ElementRef> Engine::find_element(const std::string& category_key,
                                                       bool include_compliant) const {
  std::optional<ElementRef> best;
  std::uint64_t best_id = 0;
  for (std::size_t mi = 0; mi < modalities_.size(); ++mi) {
    const Modality& m = modalities_[mi];
    for (std::size_t ei = 0; ei < m.elements.size(); ++ei) {
      const Element& e = m.elements[ei];
      if (e.category_key != category_key) continue;
      if (e.compliant && !include_compliant) continue;
      if (!best || e.id < best_id) {
        best = ElementRef{mi, ei};
        best_id = e.id;
      }
    }
  }
  return best;
}

Element Engine::remove_element(const ElementRef& ref) {
  Modality& m = modalities_[ref.modality_index];
  Element out = std::move(m.elements[ref.element_index]);
  m.elements.erase(m.elements.begin() + static_cast<long>(ref.element_index));
  return out;
}

EFormula Engine::build_instance_state(const Category& cat, std::uint64_t ordinal_rank) {
  std::vector<EFormula> props = cat.properties.members();
  // The accidental member is drawn from the ordinal chain, skipping values
  // that coincide with a property; rank k takes the (k+1)-th admissible one.
  std::uint64_t seen = 0;
  for (std::uint64_t j = 0;; ++j) {
    EFormula acc = ordinal(j);
    bool collides = false;
    for (const EFormula& p : props)
      if (p == acc) { collides = true; break; }
    if (collides) continue;
    if (seen++ == ordinal_rank) {
      std::vector<Assembly> members;
      members.reserve(props.size() + 1);
      for (const EFormula& p : props) members.push_back(p.tree());
      members.push_back(acc.tree());
      return normalize(Assembly::branch(std::move(members)));
    }
  }
}

StructureView Engine::begin_tick(long clock, const std::vector<PerceptionBatch>& batches) {
  if (state_ != EngineState::Running) throw domain_error("engine is not running");
  clock_ = clock;
  tick_batches_ = batches;
  tick_perceptions_.clear();
  touched_modalities_.clear();
  behaviours_this_tick_ = 0;
  recalled_this_tick_.clear();

  StructureView view;
  view.clock = clock;
  for (const PerceptionBatch& batch : batches) {
    modality(batch.modality);  // existence check
    if (batch.instances.empty()) continue;
    const std::string key = ensure_category(batch.instances);
    for (const EFormula& x : batch.instances) archetypes_.put(Typology::Perception, x);
    const Archetype& count_arch =
        archetypes_.put(Typology::Quantity, ebinary_from_value(batch.instances.size()));
    const Archetype& sensus = archetypes_.put(
        Typology::SensusUndam,
        paired_datum(count_arch.name,
                     archetypes_.get_by_name(category_archetype_name(key))->name));
    tick_perceptions_.push_back({batch.modality, key, false});
    trace_.emit(clock_, "perceive-x",
                {{"modality", batch.modality},
                 {"cat", key},
                 {"count", "+" + std::to_string(batch.instances.size())},
                 {"archetype", sensus.name_key()}});
    std::vector<std::string> renders;
    for (const EFormula& x : batch.instances) renders.push_back(x.render());
    view.perturbations.emplace_back(batch.modality, std::move(renders));
  }
  for (const Modality& m : modalities_)
    for (const Element& e : m.elements)
      view.elements.push_back({e.id, m.id, e.formula.render(), e.category_key, e.compliant});
  return view;
}

void Engine::apply_sensory_event(const SensoryEvent& event) {
  Modality& m = modality(event.modality);
  touched_modalities_.insert(m.id);

  std::string cx_key;
  std::size_t batch_size = 0;
  for (TickPerception& p : tick_perceptions_) {
    if (p.modality == m.id && !p.linked) {
      p.linked = true;
      cx_key = p.cx_key;
      for (const PerceptionBatch& b : tick_batches_)
        if (b.modality == m.id) { batch_size = b.instances.size(); break; }
      break;
    }
  }
  const bool exogenous = !cx_key.empty();

  std::size_t removed = 0;
  std::vector<EFormula> removed_formulas;
  for (std::uint64_t id : event.removed_ids) {
    auto it = std::find_if(m.elements.begin(), m.elements.end(),
                           [&](const Element& e) { return e.id == id; });
    if (it == m.elements.end())
      throw domain_error("removed state " + std::to_string(id) + " not present in " + m.id);
    if (!it->compliant)
      throw domain_error("removed state " + std::to_string(id) + " is not compliant");
    removed_formulas.push_back(it->formula);
    m.elements.erase(it);
    ++removed;
  }
  const std::string cy_key = m.organisation_category.key();
  if (removed > 0) {
    ledger_.apply(cy_key, -static_cast<std::int64_t>(removed));
    trace_.emit(clock_, "remove",
                {{"modality", m.id}, {"cat", cy_key}, {"delta", "-" + std::to_string(removed)}});
  }

  std::string cz_key;
  if (!event.emergents.empty()) {
    cz_key = ensure_category(event.emergents);
    for (const EFormula& z : event.emergents) {
      Element e;
      e.id = next_element_id_++;
      e.formula = z;
      e.category_key = cz_key;
      e.compliant = is_instance(z, m.organisation_category);
      m.elements.push_back(std::move(e));
    }
    ledger_.apply(cz_key, static_cast<std::int64_t>(event.emergents.size()));
    trace_.emit(clock_, "emerge",
                {{"modality", m.id},
                 {"cat", cz_key},
                 {"delta", "+" + std::to_string(event.emergents.size())}});
  }

  if (removed == 0 && event.emergents.empty() && !exogenous) return;

  EventRecord rec;
  rec.clock = clock_;
  rec.exogenous = exogenous;
  rec.cx_key = cx_key;
  rec.cy_key = cy_key;
  rec.cz_key = cz_key;
  std::vector<EFormula> triggers;
  if (exogenous)
    for (const PerceptionBatch& b : tick_batches_)
      if (b.modality == m.id && !b.instances.empty()) { triggers = b.instances; break; }
  rec.encoded = event_formula(triggers, removed_formulas, event.emergents);
  events_.push_back(rec);

  std::vector<TraceWriter::Field> fields{{"modality", m.id},
                                         {"kind", exogenous ? "exogenous" : "endogenous"},
                                         {"removed", std::to_string(removed)},
                                         {"emerged", std::to_string(event.emergents.size())}};
  if (exogenous && !cz_key.empty()) {
    // Interpretation {{C(X),C(Y)},C(Z)} as factors + paradigma, with the
    // quantity bookkeeping of the event.
    const Archetype& factors = archetypes_.put(
        Typology::Factors,
        paired_datum(archetypes_.get_by_name(category_archetype_name(cx_key))->name,
                     archetypes_.get_by_name(category_archetype_name(cy_key))->name));
    const Archetype& paradigma = archetypes_.put(
        Typology::Paradigma,
        paired_datum(factors.name,
                     archetypes_.get_by_name(category_archetype_name(cz_key))->name));
    const Archetype& qn = archetypes_.put(Typology::Quantity, ebinary_from_value(batch_size));
    const Archetype& qm = archetypes_.put(Typology::Quantity, ebinary_from_value(removed));
    const Archetype& qpair =
        archetypes_.put(Typology::QuantityPair, paired_datum(qn.name, qm.name));
    const Archetype& ql =
        archetypes_.put(Typology::Quantity, ebinary_from_value(event.emergents.size()));
    const Archetype& qevent =
        archetypes_.put(Typology::QuantityEvent, paired_datum(qpair.name, ql.name));
    const Archetype& ev =
        archetypes_.put(Typology::Event, paired_datum(paradigma.name, qevent.name));
    fields.push_back({"paradigma", paradigma.name_key()});
    fields.push_back({"archetype", ev.name_key()});
  }
  trace_.emit(clock_, "event", std::move(fields));
}

bool Engine::classify_changes() {
  bool destroyed = false;
  for (const std::string& id : touched_modalities_) {
    Modality& m = modality(id);
    bool structural = m.compliant_count() > 0;
    trace_.emit(clock_, "classify-change",
                {{"modality", id}, {"result", structural ? "structural" : "destructive"}});
    if (!structural) destroyed = true;
  }
  return destroyed;
}

std::optional<ManipulationRecord> Engine::recall_behaviour(const Modality& m) {
  for (const BehaviourRecord& rec : behaviours_) {
    if (rec.target_modality != m.id) continue;
    auto cat_it = categories_.find(rec.perception_key);
    if (cat_it == categories_.end()) continue;
    bool matched = false;
    for (const PerceptionBatch& batch : tick_batches_) {
      if (batch.instances.empty()) continue;
      bool all = true;
      for (const EFormula& x : batch.instances)
        if (!is_instance(x, cat_it->second.category)) { all = false; break; }
      if (all) { matched = true; break; }
    }
    if (!matched) continue;
    bool stocked = true;
    for (const std::string& f : rec.factor_keys)
      if (available(f) == 0) { stocked = false; break; }
    if (!stocked) continue;

    recalled_this_tick_.insert(rec.perception_key);
    CategoryRecord& symbol = categories_.at(rec.perception_key);
    if (!symbol.perceptual) {
      symbol.perceptual = true;
      promotions_.push_back({clock_, "perceptual", rec.perception_key});
      trace_.emit(clock_, "promote-perceptual", {{"cat", rec.perception_key}});
    }
    ManipulationRecord plan;
    plan.target_key = rec.target_key;
    plan.factor_keys = rec.factor_keys;
    trace_.emit(clock_, "behave-recall",
                {{"modality", m.id},
                 {"cat", rec.target_key},
                 {"chain", join_keys(rec.factor_keys)},
                 {"via", rec.perception_key}});
    return plan;
  }
  return std::nullopt;
}

std::string Engine::record_manipulation_archetypes(const ManipulationRecord& plan,
                                                   const std::string& target_key) {
  // One factors + paradigma pair per binary step; the step outputs are real
  // stored categories.
  const std::set<std::string> target = props_of(target_key);
  std::string last_paradigma;
  std::string left_key = plan.factor_keys.at(0);
  for (std::size_t k = 1; k < plan.factor_keys.size(); ++k) {
    const std::string& right_key = plan.factor_keys[k];
    std::set<std::string> uni = props_of(left_key);
    for (const std::string& p : props_of(right_key)) uni.insert(p);
    std::set<std::string> out_props = intersect(uni, target);
    const std::string out_key = ensure_category_props(props_from_set(out_props));
    const Archetype& factors = archetypes_.put(
        Typology::Factors,
        paired_datum(archetypes_.get_by_name(category_archetype_name(left_key))->name,
                     archetypes_.get_by_name(category_archetype_name(right_key))->name));
    const Archetype& paradigma = archetypes_.put(
        Typology::Paradigma,
        paired_datum(factors.name,
                     archetypes_.get_by_name(category_archetype_name(out_key))->name));
    last_paradigma = paradigma.name_key();
    left_key = out_key;
  }
  return last_paradigma;
}

std::optional<ManipulationRecord> Engine::manipulate(const Modality& m) {
  const std::string target_key = m.organisation_category.key();

  auto stored = manipulations_.find(target_key);
  if (stored != manipulations_.end()) {
    bool stocked = true;
    for (const std::string& f : stored->second.factor_keys)
      if (available(f) == 0) { stocked = false; break; }
    if (stocked) {
      trace_.emit(clock_, "manipulate",
                  {{"modality", m.id},
                   {"cat", target_key},
                   {"chain", join_keys(stored->second.factor_keys)},
                   {"source", "stored"}});
      return stored->second;
    }
  }

  const std::set<std::string> target = props_of(target_key);
  std::vector<std::string> pool;
  for (const auto& [key, rec] : categories_)
    if (key != target_key && available(key) > 0) pool.push_back(key);

  // Bounded breadth-first search over binary factor chains; the first,
  // shortest, lexicographically earliest chain whose running property union
  // covers the target wins.
  struct State {
    std::vector<std::string> chain;
    std::set<std::string> covered;
  };
  std::deque<State> queue;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      State s;
      s.chain = {pool[i], pool[j]};
      s.covered = intersect(props_of(pool[i]), target);
      for (const std::string& p : intersect(props_of(pool[j]), target)) s.covered.insert(p);
      queue.push_back(std::move(s));
    }
  while (!queue.empty()) {
    State s = std::move(queue.front());
    queue.pop_front();
    if (s.covered == target) {
      ManipulationRecord plan;
      plan.target_key = target_key;
      plan.factor_keys = s.chain;
      plan.paradigma_names.push_back(record_manipulation_archetypes(plan, target_key));
      manipulations_[target_key] = plan;
      trace_.emit(clock_, "manipulate",
                  {{"modality", m.id},
                   {"cat", target_key},
                   {"chain", join_keys(s.chain)},
                   {"source", "fresh"},
                   {"archetype", plan.paradigma_names.back()}});
      return plan;
    }
    if (s.chain.size() >= config_.max_chain_length) continue;
    for (const std::string& next : pool) {
      if (std::find(s.chain.begin(), s.chain.end(), next) != s.chain.end()) continue;
      std::set<std::string> covered = s.covered;
      bool grew = false;
      for (const std::string& p : intersect(props_of(next), target))
        if (covered.insert(p).second) grew = true;
      if (!grew) continue;
      State ext;
      ext.chain = s.chain;
      ext.chain.push_back(next);
      ext.covered = std::move(covered);
      queue.push_back(std::move(ext));
    }
  }
  return std::nullopt;
}

std::size_t Engine::behave(Modality& m, const ManipulationRecord& plan, std::size_t want) {
  std::size_t q = want;
  for (const std::string& f : plan.factor_keys) q = std::min(q, available(f));
  if (q == 0) return 0;

  const std::string target_key = m.organisation_category.key();
  for (const std::string& f : plan.factor_keys) {
    for (std::size_t u = 0; u < q; ++u) {
      auto ref = find_element(f, /*include_compliant=*/false);
      if (!ref) throw domain_error("factor pool exhausted for " + f);
      remove_element(*ref);
    }
    ledger_.apply(f, -static_cast<std::int64_t>(q));
    trace_.emit(clock_, "behave-consume", {{"cat", f}, {"delta", "-" + std::to_string(q)}});
  }

  // Intermediate step outputs net to zero on the ledger.
  const std::set<std::string> target = prop_set(m.organisation_category.properties);
  std::string left = plan.factor_keys.at(0);
  for (std::size_t k = 1; k + 1 < plan.factor_keys.size(); ++k) {
    std::set<std::string> uni = props_of(left);
    for (const std::string& p : props_of(plan.factor_keys[k])) uni.insert(p);
    const std::string out_key = ensure_category_props(props_from_set(intersect(uni, target)));
    ledger_.apply(out_key, static_cast<std::int64_t>(q));
    ledger_.apply(out_key, -static_cast<std::int64_t>(q));
    trace_.emit(clock_, "behave-intermediate",
                {{"cat", out_key},
                 {"produced", "+" + std::to_string(q)},
                 {"consumed", "-" + std::to_string(q)}});
    left = out_key;
  }

  for (std::size_t u = 0; u < q; ++u) {
    EFormula state = build_instance_state(m.organisation_category, u);
    Element e;
    e.id = next_element_id_++;
    e.formula = state;
    e.category_key = target_key;
    e.compliant = is_instance(state, m.organisation_category);
    trace_.emit(clock_, "behave-produce",
                {{"modality", m.id},
                 {"cat", target_key},
                 {"delta", "+1"},
                 {"render", state.render()}});
    m.elements.push_back(std::move(e));
  }
  ledger_.apply(target_key, static_cast<std::int64_t>(q));

  // Per-unit quantity bookkeeping: one element per factor yields one output.
  const Archetype& q1 = archetypes_.put(Typology::Quantity, ebinary_from_value(1));
  const Archetype& q2 = archetypes_.put(Typology::Quantity, ebinary_from_value(1));
  const Archetype& qpair = archetypes_.put(Typology::QuantityPair, paired_datum(q1.name, q2.name));
  const Archetype& ql = archetypes_.put(Typology::Quantity, ebinary_from_value(1));
  const Archetype& qevent =
      archetypes_.put(Typology::QuantityEvent, paired_datum(qpair.name, ql.name));
  auto rec_it = manipulations_.find(target_key);
  if (rec_it != manipulations_.end() && !rec_it->second.paradigma_names.empty())
    archetypes_.put(Typology::Event,
                    paired_datum(archetypes_.get_by_name(rec_it->second.paradigma_names.back())->name,
                                 qevent.name));

  ++behaviours_this_tick_;
  return q;
}

void Engine::homeostatic_recursion() {
  std::set<std::string> failed;
  while (true) {
    std::vector<Modality*> candidates;
    for (Modality& m : modalities_)
      if (m.deficit() > 0 && !failed.count(m.id)) candidates.push_back(&m);
    if (candidates.empty()) break;
    std::sort(candidates.begin(), candidates.end(), [](const Modality* a, const Modality* b) {
      if (a->deficit() != b->deficit()) return a->deficit() > b->deficit();
      return a->id < b->id;
    });
    Modality& m = *candidates.front();
    trace_.emit(clock_, "select",
                {{"modality", m.id}, {"deficit", std::to_string(m.deficit())}});

    bool recalled = true;
    std::optional<ManipulationRecord> plan = recall_behaviour(m);
    if (!plan) {
      recalled = false;
      plan = manipulate(m);
    }
    if (!plan) {
      trace_.emit(clock_, "manipulate-fail",
                  {{"modality", m.id}, {"cat", m.organisation_category.key()}});
      failed.insert(m.id);
      continue;
    }
    std::size_t produced = behave(m, *plan, static_cast<std::size_t>(m.deficit()));
    if (produced == 0) {
      failed.insert(m.id);
      continue;
    }
    if (!recalled) {
      // Remember which perceived categories this behaviour answered, so
      // later instances of them can recall it without a manipulation.
      for (const TickPerception& p : tick_perceptions_) {
        bool exists = false;
        for (const BehaviourRecord& r : behaviours_)
          if (r.perception_key == p.cx_key) { exists = true; break; }
        if (!exists)
          behaviours_.push_back({p.cx_key, m.id, plan->target_key, plan->factor_keys});
      }
    }
  }
}

void Engine::genus_events() {
  while (true) {
    std::vector<std::pair<std::string, std::int64_t>> negatives;
    std::vector<std::string> positives;
    for (const auto& [key, value] : ledger_.entries()) {
      if (value < 0 && categories_.count(key)) negatives.emplace_back(key, value);
      if (value > 0 && available(key) > 0) positives.push_back(key);
    }
    std::sort(negatives.begin(), negatives.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second < b.second;
      return a.first < b.first;
    });
    bool reassigned = false;
    for (const auto& [dkey, dval] : negatives) {
      const std::set<std::string> dprops = props_of(dkey);
      for (const std::string& skey : positives) {
        const std::set<std::string> sprops = props_of(skey);
        if (!std::includes(sprops.begin(), sprops.end(), dprops.begin(), dprops.end()))
          continue;
        auto ref = find_element(skey, /*include_compliant=*/false);
        if (!ref) continue;
        Modality& host = modalities_[ref->modality_index];
        Element& e = host.elements[ref->element_index];
        e.category_key = dkey;
        e.compliant = is_instance(e.formula, host.organisation_category);
        ledger_.apply(skey, -1);
        ledger_.apply(dkey, +1);
        const Archetype& factors = archetypes_.put(
            Typology::Factors,
            paired_datum(generic_category_marker(),
                         archetypes_.get_by_name(category_archetype_name(skey))->name));
        const Archetype& paradigma = archetypes_.put(
            Typology::GenusParadigma,
            paired_datum(factors.name,
                         archetypes_.get_by_name(category_archetype_name(dkey))->name));
        trace_.emit(clock_, "genus-debit", {{"cat", skey}, {"delta", "-1"}, {"to", dkey}});
        trace_.emit(clock_, "genus-credit",
                    {{"cat", dkey},
                     {"delta", "+1"},
                     {"from", skey},
                     {"archetype", paradigma.name_key()}});
        reassigned = true;
        break;
      }
      if (reassigned) break;
    }
    if (!reassigned) break;
  }
}

std::vector<std::string> Engine::find_base_chain(const std::set<std::string>& needed,
                                                 const std::vector<std::string>& surplus) const {
  std::vector<std::string> chain;
  std::set<std::string> covered;
  for (const std::string& skey : surplus) {
    bool grew = false;
    for (const std::string& p : props_of(skey))
      if (needed.count(p) && covered.insert(p).second) grew = true;
    if (grew) chain.push_back(skey);
    if (covered == needed) return chain;
  }
  return {};
}

std::vector<std::string> Engine::find_complex_chain(const std::string& target_key,
                                                    const std::set<std::string>& needed,
                                                    const std::vector<std::string>& surplus) const {
  const std::set<std::string> tprops = props_of(target_key);
  std::vector<std::string> best;
  std::vector<std::string> chain;
  std::set<std::string> used;

  std::function<bool()> dfs = [&]() -> bool {
    if (!chain.empty()) {
      std::set<std::string> covered;
      for (const std::string& skey : chain)
        for (const std::string& p : props_of(skey))
          if (needed.count(p)) covered.insert(p);
      bool last_ok = shares_letter(props_of(chain.back()), tprops);
      bool first_ok = shares_letter(props_of(chain.front()), tprops);
      if (covered == needed && first_ok && last_ok) {
        best = chain;
        return true;
      }
    }
    if (chain.size() >= config_.max_chain_length) return false;
    for (const std::string& skey : surplus) {
      if (used.count(skey)) continue;
      if (!chain.empty() && !shares_letter(props_of(chain.back()), props_of(skey)))
        continue;  // consecutive members must intersect
      chain.push_back(skey);
      used.insert(skey);
      if (dfs()) return true;
      used.erase(skey);
      chain.pop_back();
    }
    return false;
  };
  dfs();
  return best;
}

void Engine::execute_chain(const std::string& target_key,
                           const std::vector<std::string>& chain, bool complex) {
  trace_.emit(clock_, "emotion-begin",
              {{"cat", target_key},
               {"chain", join_keys(chain)},
               {"complex", complex ? "1" : "0"}});

  // Simulation precedes execution: dry-run the drains on copies.
  bool feasible = true;
  for (const std::string& skey : chain)
    if (available(skey) == 0) { feasible = false; break; }
  trace_.emit(clock_, "emotion-sim", {{"result", feasible ? "ok" : "blocked"}});
  if (!feasible) return;

  // A chain category that is the emergent side of an event whose perceived
  // category became objective recalls that symbol as a mental image.
  for (const std::string& skey : chain) {
    for (const EventRecord& ev : events_) {
      if (ev.cz_key != skey || ev.cx_key.empty()) continue;
      auto it = categories_.find(ev.cx_key);
      if (it == categories_.end() || !it->second.objective || it->second.mental_image) continue;
      it->second.mental_image = true;
      promotions_.push_back({clock_, "image", ev.cx_key});
      trace_.emit(clock_, "promote-image", {{"cat", ev.cx_key}});
    }
  }

  const std::set<std::string> tprops = props_of(target_key);
  auto emotional = find_element(target_key, /*include_compliant=*/true);
  if (!emotional) return;
  const std::size_t host_index = emotional->modality_index;
  remove_element(*emotional);
  ledger_.apply(target_key, -1);
  trace_.emit(clock_, "emotion-consume", {{"cat", target_key}, {"delta", "-1"}});

  std::set<std::string> acc_props;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const std::string& skey = chain[k];
    auto ref = find_element(skey, /*include_compliant=*/false);
    if (!ref) throw domain_error("surplus pool exhausted for " + skey);
    remove_element(*ref);
    ledger_.apply(skey, -1);
    trace_.emit(clock_, "emotion-consume", {{"cat", skey}, {"delta", "-1"}});

    if (k + 1 < chain.size()) {
      for (const std::string& p : intersect(props_of(skey), tprops)) acc_props.insert(p);
      if (complex)
        for (const std::string& p : intersect(props_of(skey), props_of(chain[k + 1])))
          acc_props.insert(p);
      const std::string out_key = ensure_category_props(props_from_set(acc_props));
      ledger_.apply(out_key, +1);
      ledger_.apply(out_key, -1);
      trace_.emit(clock_, "emotion-intermediate",
                  {{"cat", out_key}, {"produced", "+1"}, {"consumed", "-1"}});
    } else {
      Modality& host = modalities_[host_index];
      EFormula state = build_instance_state(categories_.at(target_key).category, 0);
      Element e;
      e.id = next_element_id_++;
      e.formula = state;
      e.category_key = target_key;
      e.compliant = is_instance(state, host.organisation_category);
      trace_.emit(clock_, "emotion-produce",
                  {{"modality", host.id},
                   {"cat", target_key},
                   {"delta", "+1"},
                   {"render", state.render()}});
      host.elements.push_back(std::move(e));
      ledger_.apply(target_key, +1);
    }
  }

  if (chain.size() >= 2) {
    std::string top = category_archetype_name(chain[0]);
    for (std::size_t k = 1; k < chain.size(); ++k) {
      const Archetype& link = archetypes_.put(
          Typology::Chain,
          paired_datum(archetypes_.get_by_name(top)->name,
                       archetypes_.get_by_name(category_archetype_name(chain[k]))->name));
      top = link.name_key();
    }
  }
  chains_.push_back({target_key, chain, complex});
}

void Engine::run_emotions() {
  // Emotions dispose of leftovers after behaviours have occurred; a tick
  // without an executed behaviour does not start them.
  if (behaviours_this_tick_ == 0) return;

  bool surplus_traced = false;
  while (true) {
    std::vector<std::string> surplus;
    for (const auto& [key, value] : ledger_.entries())
      if (value > 0 && available(key) > 0) surplus.push_back(key);
    if (surplus.empty()) break;
    if (!surplus_traced) {
      for (const std::string& s : surplus)
        trace_.emit(clock_, "emotion-surplus",
                    {{"cat", s}, {"value", std::to_string(ledger_.at(s))}});
      surplus_traced = true;
    }

    std::vector<std::string> equilibrium;
    for (const auto& [key, rec] : categories_) {
      if (ledger_.at(key) != 0) continue;
      bool has_element = false;
      for (const Modality& m : modalities_) {
        for (const Element& e : m.elements)
          if (e.category_key == key) { has_element = true; break; }
        if (has_element) break;
      }
      if (has_element) equilibrium.push_back(key);
    }

    bool executed = false;
    for (const std::string& tkey : equilibrium) {
      std::set<std::string> needed;
      for (const std::string& p : props_of(tkey))
        if (p != "0") needed.insert(p);
      if (needed.empty()) continue;

      std::vector<std::string> chain = find_base_chain(needed, surplus);
      bool complex = false;
      if (chain.empty()) {
        chain = find_complex_chain(tkey, needed, surplus);
        complex = !chain.empty();
      }
      if (chain.empty()) continue;
      execute_chain(tkey, chain, complex);
      executed = true;
      break;
    }
    if (!executed) break;
  }
}

void Engine::record_snapshot() {
  StructureSnapshot snap;
  snap.clock = clock_;
  for (const Modality& m : modalities_) {
    ModalitySnapshot ms;
    ms.id = m.id;
    ms.compliant = m.compliant_count();
    ms.total = m.elements.size();
    ms.deficit = m.deficit();
    for (const Element& e : m.elements) ms.states.push_back(e.formula.render());
    trace_.emit(clock_, "snapshot",
                {{"modality", ms.id},
                 {"compliant", std::to_string(ms.compliant)},
                 {"total", std::to_string(ms.total)},
                 {"deficit", std::to_string(ms.deficit)}});
    snap.modalities.push_back(std::move(ms));
  }
  history_.push_back(std::move(snap));
  while (history_.size() > config_.history_ring) history_.pop_front();
}

void Engine::finish_tick() {
  for (const std::string& key : recalled_this_tick_) {
    auto& [last, run] = streaks_[key];
    run = (last == clock_ - 1) ? run + 1 : 1;
    last = clock_;
    if (run >= config_.coupling_threshold) {
      CategoryRecord& rec = categories_.at(key);
      if (!rec.objective) {
        rec.objective = true;
        promotions_.push_back({clock_, "objective", key});
        trace_.emit(clock_, "promote-objective",
                    {{"cat", key}, {"streak", std::to_string(run)}});
      }
    }
  }
  record_snapshot();
}

EngineState Engine::complete_tick(const std::vector<SensoryEvent>& events) {
  if (state_ != EngineState::Running) throw domain_error("engine is not running");
  for (const SensoryEvent& ev : events) apply_sensory_event(ev);
  if (classify_changes()) {
    state_ = EngineState::Destroyed;
    trace_.emit(clock_, "status", {{"status", "destroyed"}});
    return state_;
  }
  homeostatic_recursion();
  genus_events();
  run_emotions();
  finish_tick();
  return state_;
}

std::map<std::string, long> Engine::deficits() const {
  std::map<std::string, long> out;
  for (const Modality& m : modalities_) out[m.id] = m.deficit();
  return out;
}

bool Engine::all_in_equilibrium() const {
  for (const Modality& m : modalities_)
    if (m.deficit() != 0) return false;
  return true;
}

}  // namespace ego
