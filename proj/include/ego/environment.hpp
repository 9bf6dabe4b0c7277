// Deterministic environment simulator: initial loading, perturbation
// emission, sensory-event responses, and scheduled perturbation change.
// Two in-process messages per tick mirror the engine/environment contract:
// a perturbation batch in, then a response against the structure view.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ego/engine.hpp"

namespace ego {

struct ScriptEvent {
  long clock = 0;
  std::string modality;
  std::size_t perturb_count = 0;
  std::vector<std::string> perturb_letters;
  std::size_t remove_count = 0;
  std::size_t emerge_count = 0;
  std::vector<std::string> emerge_letters;
};

struct EemSpec {
  std::vector<std::string> a;  // perturbation triggers
  std::vector<std::string> b;  // selects the target and the removals
  std::vector<std::string> c;  // seeds the emergents
};

struct ModalityLoad {
  std::string id;
  std::size_t count = 0;
  std::vector<std::string> letters;  // scripted mode
  std::string bits;                  // EEM mode base token
};

struct Scenario {
  std::uint64_t seed = 0;
  std::vector<std::string> letter_names;
  std::vector<ModalityLoad> modalities;
  long budget = 0;
  long change_clock = -1;  // -1: never
  std::size_t filler_length = 4;
  std::size_t perturb_count = 2;
  std::size_t remove_count = 1;
  std::size_t emerge_count = 2;
  std::vector<ScriptEvent> script;
  std::vector<EemSpec> eems;

  bool scripted() const { return !script.empty(); }
};

// Strict sectioned key = value format; unknown sections or keys are
// rejected. See docs/scenario-format.md.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Scenario letters are realized as fixed formulas by declaration index;
// instances of a letter set are the letters plus an ordinal tag, which
// makes every batch of two or more categorize to exactly
// {letters..., 0}.
EFormula letter_formula(std::size_t index);
EFormula tagged_instance(const std::vector<EFormula>& letters, std::uint64_t tag);

class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::vector<std::pair<std::string, std::vector<EFormula>>> initial_load() = 0;
  virtual std::vector<PerceptionBatch> emit_perturbations(long clock) = 0;
  virtual std::vector<SensoryEvent> sensory_response(const StructureView& view) = 0;
};

std::unique_ptr<Environment> make_environment(const Scenario& scenario);

struct RunReport {
  std::string status;  // equilibrium | destroyed | budget-exhausted
  long final_clock = 0;
  std::vector<std::pair<long, std::map<std::string, long>>> clock_deficits;
  std::map<std::string, long> final_deficits;
  std::map<std::string, std::int64_t> residual_ledger;
  std::vector<Promotion> promotions;
};

RunReport run_scenario(const Scenario& scenario, TraceWriter& trace,
                       EngineConfig config = {});

}  // namespace ego
