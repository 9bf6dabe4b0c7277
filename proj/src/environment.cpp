#include "ego/environment.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ego/codec.hpp"

namespace ego {

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "N : w1 w2 ..." -> (N, words)
std::pair<std::size_t, std::vector<std::string>> parse_counted_list(const std::string& value,
                                                                    const std::string& where) {
  std::size_t colon = value.find(':');
  if (colon == std::string::npos)
    throw domain_error("expected 'count : items' in " + where);
  std::size_t count = 0;
  try {
    count = std::stoull(trim(value.substr(0, colon)));
  } catch (...) {
    throw domain_error("bad count in " + where);
  }
  return {count, split_words(value.substr(colon + 1))};
}

long parse_long(const std::string& value, const std::string& where) {
  try {
    return std::stol(trim(value));
  } catch (...) {
    throw domain_error("bad number in " + where);
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::string section;
  ScriptEvent* script = nullptr;
  EemSpec* eem = nullptr;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  bool have_schedule = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);

    if (line.front() == '[') {
      if (line.back() != ']') throw domain_error("unterminated section at " + where);
      section = line.substr(1, line.size() - 2);
      script = nullptr;
      eem = nullptr;
      if (section == "seed" || section == "letters" || section == "modalities" ||
          section == "schedule") {
        have_schedule |= section == "schedule";
      } else if (section.rfind("script.", 0) == 0) {
        sc.script.emplace_back();
        script = &sc.script.back();
      } else if (section.rfind("eem.", 0) == 0) {
        sc.eems.emplace_back();
        eem = &sc.eems.back();
      } else {
        throw domain_error("unknown section [" + section + "] at " + where);
      }
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw domain_error("expected key = value at " + where);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (section == "seed") {
      if (key == "value") sc.seed = static_cast<std::uint64_t>(parse_long(value, where));
      else throw domain_error("unknown key '" + key + "' in [seed] at " + where);
    } else if (section == "letters") {
      if (key == "names") sc.letter_names = split_words(value);
      else throw domain_error("unknown key '" + key + "' in [letters] at " + where);
    } else if (section == "modalities") {
      ModalityLoad load;
      load.id = key;
      auto [count, items] = parse_counted_list(value, where);
      load.count = count;
      if (items.size() >= 2 && items[0] == "bits") {
        load.bits = items[1];
      } else {
        load.letters = items;
      }
      if (load.count == 0) throw domain_error("modality " + key + " has zero states");
      if (load.letters.empty() && load.bits.empty())
        throw domain_error("modality " + key + " has no letters or bits");
      sc.modalities.push_back(std::move(load));
    } else if (section == "schedule") {
      if (key == "budget") sc.budget = parse_long(value, where);
      else if (key == "change-clock")
        sc.change_clock = value == "none" ? -1 : parse_long(value, where);
      else if (key == "filler-length")
        sc.filler_length = static_cast<std::size_t>(parse_long(value, where));
      else if (key == "perturb-count")
        sc.perturb_count = static_cast<std::size_t>(parse_long(value, where));
      else if (key == "remove-count")
        sc.remove_count = static_cast<std::size_t>(parse_long(value, where));
      else if (key == "emerge-count")
        sc.emerge_count = static_cast<std::size_t>(parse_long(value, where));
      else throw domain_error("unknown key '" + key + "' in [schedule] at " + where);
    } else if (script) {
      if (key == "clock") script->clock = parse_long(value, where);
      else if (key == "modality") script->modality = value;
      else if (key == "perturb") {
        auto [count, letters] = parse_counted_list(value, where);
        script->perturb_count = count;
        script->perturb_letters = letters;
      } else if (key == "remove") {
        script->remove_count = static_cast<std::size_t>(parse_long(value, where));
      } else if (key == "emerge") {
        auto [count, letters] = parse_counted_list(value, where);
        script->emerge_count = count;
        script->emerge_letters = letters;
      } else {
        throw domain_error("unknown key '" + key + "' in [script] at " + where);
      }
    } else if (eem) {
      if (key == "a") eem->a = split_words(value);
      else if (key == "b") eem->b = split_words(value);
      else if (key == "c") eem->c = split_words(value);
      else throw domain_error("unknown key '" + key + "' in [eem] at " + where);
    } else {
      throw domain_error("key outside any section at " + where);
    }
  }

  if (sc.modalities.empty()) throw domain_error("scenario declares no modalities");
  if (!have_schedule) throw domain_error("scenario lacks a [schedule] section");
  for (const EemSpec& e : sc.eems) {
    if (e.a.empty() || e.b.empty() || e.c.empty())
      throw domain_error("eem requires non-empty a, b and c arrays");
    if (e.b == e.c) throw domain_error("eem arrays b and c must differ");
  }
  for (const ScriptEvent& ev : sc.script) {
    if (ev.clock <= 0) throw domain_error("script event requires a positive clock");
    if (ev.modality.empty()) throw domain_error("script event requires a modality");
  }
  // Letters referenced anywhere must be declared.
  auto check_letters = [&](const std::vector<std::string>& used) {
    for (const std::string& l : used)
      if (std::find(sc.letter_names.begin(), sc.letter_names.end(), l) ==
          sc.letter_names.end())
        throw domain_error("letter '" + l + "' is not declared in [letters]");
  };
  for (const ModalityLoad& m : sc.modalities) check_letters(m.letters);
  for (const ScriptEvent& ev : sc.script) {
    check_letters(ev.perturb_letters);
    check_letters(ev.emerge_letters);
  }
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

EFormula letter_formula(std::size_t index) {
  // {ord2, nest(ord2)}: two-member shapes that never nest inside each other
  // and never coincide with an ordinal tag.
  Assembly ord2 = ordinal(2).tree();
  Assembly nest = ord2;
  for (std::size_t i = 0; i <= index; ++i) nest = Assembly::branch({nest});
  return normalize(Assembly::branch({ord2, std::move(nest)}));
}

EFormula tagged_instance(const std::vector<EFormula>& letters, std::uint64_t tag) {
  std::vector<Assembly> members;
  members.reserve(letters.size() + 1);
  for (const EFormula& l : letters) members.push_back(l.tree());
  members.push_back(ordinal(tag).tree());
  return normalize(Assembly::branch(std::move(members)));
}

namespace {

class LetterTable {
 public:
  explicit LetterTable(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (by_name_.count(names[i])) throw domain_error("duplicate letter " + names[i]);
      by_name_[names[i]] = letter_formula(i);
    }
  }

  std::vector<EFormula> lookup(const std::vector<std::string>& names) const {
    std::vector<EFormula> out;
    out.reserve(names.size());
    for (const std::string& n : names) out.push_back(by_name_.at(n));
    return out;
  }

 private:
  std::map<std::string, EFormula> by_name_;
};

std::vector<EFormula> build_instances(const std::vector<EFormula>& letters, std::size_t count) {
  std::vector<EFormula> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) out.push_back(tagged_instance(letters, j));
  return out;
}

class ScriptedEnvironment final : public Environment {
 public:
  explicit ScriptedEnvironment(const Scenario& sc) : scenario_(sc), letters_(sc.letter_names) {}

  std::vector<std::pair<std::string, std::vector<EFormula>>> initial_load() override {
    std::vector<std::pair<std::string, std::vector<EFormula>>> out;
    for (const ModalityLoad& m : scenario_.modalities) {
      if (m.letters.empty())
        throw domain_error("scripted scenario requires letter-based modalities");
      out.emplace_back(m.id, build_instances(letters_.lookup(m.letters), m.count));
    }
    return out;
  }

  std::vector<PerceptionBatch> emit_perturbations(long clock) override {
    std::vector<PerceptionBatch> out;
    for (const ScriptEvent& ev : scenario_.script) {
      if (ev.clock != clock || ev.perturb_count == 0) continue;
      PerceptionBatch batch;
      batch.modality = ev.modality;
      batch.instances = build_instances(letters_.lookup(ev.perturb_letters), ev.perturb_count);
      out.push_back(std::move(batch));
    }
    return out;
  }

  std::vector<SensoryEvent> sensory_response(const StructureView& view) override {
    std::vector<SensoryEvent> out;
    for (const ScriptEvent& ev : scenario_.script) {
      if (ev.clock != view.clock) continue;
      SensoryEvent event;
      event.modality = ev.modality;
      std::size_t taken = 0;
      for (const StructureElementView& e : view.elements) {
        if (taken >= ev.remove_count) break;
        if (e.modality == ev.modality && e.compliant) {
          event.removed_ids.push_back(e.id);
          ++taken;
        }
      }
      if (taken < ev.remove_count)
        throw domain_error("script removes more compliant states than present in " +
                           ev.modality);
      if (ev.emerge_count > 0)
        event.emergents = build_instances(letters_.lookup(ev.emerge_letters), ev.emerge_count);
      out.push_back(std::move(event));
    }
    return out;
  }

 private:
  Scenario scenario_;
  LetterTable letters_;
};

class EemEnvironment final : public Environment {
 public:
  explicit EemEnvironment(const Scenario& sc) : scenario_(sc), rng_(sc.seed) {
    if (scenario_.eems.empty()) throw domain_error("eem scenario requires [eem.N] sections");
  }

  std::vector<std::pair<std::string, std::vector<EFormula>>> initial_load() override {
    std::vector<std::pair<std::string, std::vector<EFormula>>> out;
    for (const ModalityLoad& m : scenario_.modalities) {
      if (m.bits.empty())
        throw domain_error("eem scenario requires bits-based modalities");
      std::vector<EFormula> states;
      for (std::size_t j = 0; j < m.count; ++j) states.push_back(make_instance(m.bits));
      out.emplace_back(m.id, std::move(states));
    }
    return out;
  }

  std::vector<PerceptionBatch> emit_perturbations(long clock) override {
    const EemSpec& eem = active_eem(clock);
    PerceptionBatch batch;
    batch.modality = target_modality(eem);
    for (std::size_t i = 0; i < scenario_.perturb_count; ++i)
      batch.instances.push_back(make_instance(eem.a[i % eem.a.size()]));
    if (batch.instances.empty()) return {};
    return {std::move(batch)};
  }

  std::vector<SensoryEvent> sensory_response(const StructureView& view) override {
    const EemSpec& eem = active_eem(view.clock);
    SensoryEvent event;
    event.modality = target_modality(eem);
    std::size_t taken = 0;
    for (const StructureElementView& e : view.elements) {
      if (taken >= scenario_.remove_count) break;
      if (e.modality != event.modality || !e.compliant) continue;
      auto origin = origins_.find(e.render);
      if (origin == origins_.end()) continue;
      bool matches = false;
      for (const std::string& token : eem.b)
        if (origin->second.find(token) != std::string::npos) { matches = true; break; }
      if (!matches) continue;
      event.removed_ids.push_back(e.id);
      ++taken;
    }
    if (taken > 0) {
      for (std::size_t i = 0; i < scenario_.emerge_count; ++i)
        event.emergents.push_back(make_instance(eem.c[i % eem.c.size()]));
    }
    if (taken == 0 && event.emergents.empty()) return {};
    return {std::move(event)};
  }

 private:
  const EemSpec& active_eem(long clock) const {
    bool changed = scenario_.change_clock >= 0 && clock >= scenario_.change_clock &&
                   scenario_.eems.size() > 1;
    return scenario_.eems[changed ? 1 : 0];
  }

  std::string target_modality(const EemSpec& eem) const {
    // The b array names the target: the modality whose base token occurs in
    // some b token.
    for (const ModalityLoad& m : scenario_.modalities)
      for (const std::string& token : eem.b)
        if (!m.bits.empty() && token.find(m.bits) != std::string::npos) return m.id;
    return scenario_.modalities.front().id;
  }

  std::string filler() {
    std::string bits;
    for (std::size_t i = 0; i < scenario_.filler_length; ++i)
      bits += (rng_() >> 63) ? '1' : '0';
    return bits;
  }

  EFormula make_instance(const std::string& token) {
    std::string bits = token + filler();
    EFormula f = ebinary_encode(bits);
    origins_[f.render()] = bits;
    return f;
  }

  Scenario scenario_;
  std::mt19937_64 rng_;
  std::map<std::string, std::string> origins_;  // render -> source bits
};

}  // namespace

std::unique_ptr<Environment> make_environment(const Scenario& scenario) {
  if (scenario.scripted()) return std::make_unique<ScriptedEnvironment>(scenario);
  return std::make_unique<EemEnvironment>(scenario);
}

RunReport run_scenario(const Scenario& scenario, TraceWriter& trace, EngineConfig config) {
  std::unique_ptr<Environment> env = make_environment(scenario);
  Engine engine(env->initial_load(), trace, config);

  long clock = 0;
  RunReport report;
  while (clock < scenario.budget && engine.state() == EngineState::Running) {
    ++clock;
    std::vector<PerceptionBatch> batches = env->emit_perturbations(clock);
    StructureView view = engine.begin_tick(clock, batches);
    std::vector<SensoryEvent> events = env->sensory_response(view);
    engine.complete_tick(events);
    report.clock_deficits.emplace_back(clock, engine.deficits());
  }

  report.final_clock = clock;
  report.final_deficits = engine.deficits();
  report.residual_ledger = engine.ledger().nonzero();
  report.promotions = engine.promotions();
  if (engine.state() == EngineState::Destroyed) {
    report.status = "destroyed";
  } else if (clock > 0 && engine.all_in_equilibrium()) {
    report.status = "equilibrium";
  } else {
    report.status = "budget-exhausted";
  }
  if (report.status != "destroyed")
    trace.emit(clock, "status", {{"status", report.status}});
  for (const auto& [key, value] : report.residual_ledger)
    trace.emit(clock, "residual", {{"cat", key}, {"value", std::to_string(value)}});
  return report;
}

}  // namespace ego
