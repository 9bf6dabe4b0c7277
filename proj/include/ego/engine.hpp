// The homeostatic individual: organisation fixed at clock 0, a mutable
// structure of internal states, and the clock-driven recursion (perceive,
// manipulate, behave, genus reassignment, emotional chains, symbol
// promotion). Deterministic single-threaded state machine advanced by one
// tick message pair.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ego/archetype.hpp"
#include "ego/assembly.hpp"
#include "ego/categorize.hpp"
#include "ego/trace.hpp"

namespace ego {

struct EngineConfig {
  std::size_t max_chain_length = 6;
  int coupling_threshold = 2;  // consecutive recalled clocks before objective
  std::size_t history_ring = 64;  // retained structure snapshots
};

struct ModalitySnapshot {
  std::string id;
  std::size_t compliant = 0;
  std::size_t total = 0;
  long deficit = 0;
  std::vector<std::string> states;  // renders, insertion order
};

struct StructureSnapshot {
  long clock = 0;
  std::vector<ModalitySnapshot> modalities;
};

struct Element {
  std::uint64_t id = 0;
  EFormula formula;
  std::string category_key;
  bool compliant = false;
};

struct Modality {
  std::string id;
  Category organisation_category;
  std::size_t initial_compliant = 0;
  std::vector<Element> elements;

  std::size_t compliant_count() const;
  long deficit() const;
};

struct PerceptionBatch {
  std::string modality;
  std::vector<EFormula> instances;
};

struct StructureElementView {
  std::uint64_t id;
  std::string modality;
  std::string render;
  std::string category_key;
  bool compliant;
};

struct StructureView {
  long clock = 0;
  // Perturbation renders of the current tick, per modality.
  std::vector<std::pair<std::string, std::vector<std::string>>> perturbations;
  std::vector<StructureElementView> elements;
};

struct SensoryEvent {
  std::string modality;
  std::vector<std::uint64_t> removed_ids;
  std::vector<EFormula> emergents;
};

enum class EngineState { Running, Destroyed };

struct CategoryRecord {
  Category category;
  std::string archetype_name;  // top of the base/composed nesting
  bool perceptual = false;
  bool objective = false;
  bool mental_image = false;
};

struct ManipulationRecord {
  std::string target_key;
  std::vector<std::string> factor_keys;  // consumption order
  std::vector<std::string> paradigma_names;
};

struct BehaviourRecord {
  std::string perception_key;
  std::string target_modality;
  std::string target_key;
  std::vector<std::string> factor_keys;
};

struct EventRecord {
  long clock = 0;
  bool exogenous = false;
  std::string cx_key;  // empty for endogenous events
  std::string cy_key;
  std::string cz_key;
  EFormula encoded;  // {{X...},{Y...},{Z...}} with 0 for empty groups
};

// The event assembly {{triggers},{removed},{emergents}}; an empty group is
// the empty set itself.
EFormula event_formula(const std::vector<EFormula>& triggers,
                       const std::vector<EFormula>& removed,
                       const std::vector<EFormula>& emergents);

struct Promotion {
  long clock = 0;
  std::string kind;  // perceptual | objective | image
  std::string category_key;
};

struct ExecutedChain {
  std::string emotional_key;
  std::vector<std::string> chain_keys;
  bool complex = false;
};

class Engine {
 public:
  Engine(const std::vector<std::pair<std::string, std::vector<EFormula>>>& starting_states,
         TraceWriter& trace, EngineConfig config = {});

  const EFormula& organisation() const { return organisation_; }
  EngineState state() const { return state_; }
  long clock() const { return clock_; }

  StructureView begin_tick(long clock, const std::vector<PerceptionBatch>& batches);
  EngineState complete_tick(const std::vector<SensoryEvent>& events);

  const std::vector<Modality>& modalities() const { return modalities_; }
  const HomeostaticLedger& ledger() const { return ledger_; }
  const std::vector<Promotion>& promotions() const { return promotions_; }
  const std::vector<ExecutedChain>& executed_chains() const { return chains_; }
  const ArchetypeStore& archetypes() const { return archetypes_; }
  const std::map<std::string, CategoryRecord>& categories() const { return categories_; }
  const std::vector<EventRecord>& events() const { return events_; }

  std::map<std::string, long> deficits() const;
  bool all_in_equilibrium() const;

  // Bounded append-only history, oldest first; holds at most
  // config.history_ring entries.
  const std::deque<StructureSnapshot>& history() const { return history_; }

 private:
  struct ElementRef {
    std::size_t modality_index;
    std::size_t element_index;
  };

  Modality& modality(const std::string& id);
  std::string ensure_category(const std::vector<EFormula>& instances);
  std::string ensure_category_props(const EFormula& properties);
  std::string category_archetype_name(const std::string& key) const;

  void apply_sensory_event(const SensoryEvent& event);
  bool classify_changes();
  void homeostatic_recursion();
  std::optional<ManipulationRecord> recall_behaviour(const Modality& m);
  std::optional<ManipulationRecord> manipulate(const Modality& m);
  std::size_t behave(Modality& m, const ManipulationRecord& plan, std::size_t want);
  void genus_events();
  void run_emotions();
  std::vector<std::string> find_base_chain(const std::set<std::string>& needed,
                                           const std::vector<std::string>& surplus) const;
  std::vector<std::string> find_complex_chain(const std::string& target_key,
                                              const std::set<std::string>& needed,
                                              const std::vector<std::string>& surplus) const;
  void execute_chain(const std::string& target_key, const std::vector<std::string>& chain,
                     bool complex);
  void record_snapshot();
  void finish_tick();

  EFormula build_instance_state(const Category& cat, std::uint64_t ordinal_rank);
  std::size_t available(const std::string& category_key) const;
  std::optional<ElementRef> find_element(const std::string& category_key,
                                         bool include_compliant) const;
  Element remove_element(const ElementRef& ref);
  std::set<std::string> props_of(const std::string& category_key) const;
  std::string record_manipulation_archetypes(const ManipulationRecord& plan,
                                             const std::string& target_key);

  TraceWriter& trace_;
  EngineConfig config_;
  EngineState state_ = EngineState::Running;
  long clock_ = 0;
  std::uint64_t next_element_id_ = 1;

  std::vector<Modality> modalities_;
  EFormula organisation_;
  HomeostaticLedger ledger_;
  ArchetypeStore archetypes_;

  std::map<std::string, CategoryRecord> categories_;
  std::map<std::string, ManipulationRecord> manipulations_;  // by target key
  std::vector<BehaviourRecord> behaviours_;
  std::vector<EventRecord> events_;
  std::vector<Promotion> promotions_;
  std::vector<ExecutedChain> chains_;

  // per-tick state
  struct TickPerception {
    std::string modality;
    std::string cx_key;
    bool linked = false;  // consumed by an event interpretation
  };
  std::vector<PerceptionBatch> tick_batches_;
  std::vector<TickPerception> tick_perceptions_;
  std::set<std::string> touched_modalities_;
  std::size_t behaviours_this_tick_ = 0;
  std::set<std::string> recalled_this_tick_;

  // structural-coupling streaks per perception category
  std::map<std::string, std::pair<long, int>> streaks_;  // key -> (last clock, run)

  std::deque<StructureSnapshot> history_;
};

}  // namespace ego
