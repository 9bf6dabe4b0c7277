#include <set>

#include "doctest.h"
#include "ego/codec.hpp"
#include "ego/environment.hpp"

using namespace ego;

namespace {

const char* kScripted = R"(
# two modalities, one scripted clock
[seed]
value = 3

[letters]
names = A B X Y Z

[modalities]
Ma = 3 : A B
Mb = 2 : X Y

[schedule]
budget = 2

[script.1]
clock = 1
modality = Ma
perturb = 2 : X Z
remove = 1
emerge = 2 : Y Z
)";

const char* kEem = R"(
[seed]
value = 9

[modalities]
M1 = 4 : bits 1100
M2 = 3 : bits 0011

[schedule]
budget = 3
change-clock = 2
filler-length = 4
perturb-count = 2
remove-count = 1
emerge-count = 2

[eem.1]
a = 101 110
b = 1100
c = 111

[eem.2]
a = 0110
b = 0011
c = 10001
)";

}  // namespace

TEST_CASE("scenario parsing accepts the documented schema") {
  Scenario sc = parse_scenario(kScripted);
  CHECK(sc.seed == 3);
  CHECK(sc.letter_names.size() == 5);
  REQUIRE(sc.modalities.size() == 2);
  CHECK(sc.modalities[0].id == "Ma");
  CHECK(sc.modalities[0].count == 3);
  CHECK(sc.modalities[0].letters == std::vector<std::string>{"A", "B"});
  CHECK(sc.budget == 2);
  REQUIRE(sc.script.size() == 1);
  CHECK(sc.script[0].perturb_count == 2);
  CHECK(sc.script[0].remove_count == 1);
  CHECK(sc.script[0].emerge_letters == std::vector<std::string>{"Y", "Z"});
  CHECK(sc.scripted());

  Scenario eem = parse_scenario(kEem);
  CHECK_FALSE(eem.scripted());
  CHECK(eem.change_clock == 2);
  REQUIRE(eem.eems.size() == 2);
  CHECK(eem.eems[0].a == std::vector<std::string>{"101", "110"});
}

TEST_CASE("scenario parsing rejects unknown keys and sections") {
  CHECK_THROWS_AS(parse_scenario("[bogus]\nx = 1\n"), domain_error);
  CHECK_THROWS_AS(parse_scenario("[schedule]\nbudget = 1\nwhatever = 2\n"), domain_error);
  CHECK_THROWS_AS(parse_scenario("[seed]\nvalue = 1\n"), domain_error);  // no modalities
  CHECK_THROWS_AS(parse_scenario("x = 1\n"), domain_error);              // outside section
  // undeclared letter
  CHECK_THROWS_AS(parse_scenario("[letters]\nnames = A\n[modalities]\nM = 2 : A B\n"
                                 "[schedule]\nbudget = 1\n"),
                  domain_error);
  // b and c must differ
  CHECK_THROWS_AS(parse_scenario("[modalities]\nM = 2 : bits 11\n[schedule]\nbudget = 1\n"
                                 "[eem.1]\na = 1\nb = 11\nc = 11\n"),
                  domain_error);
}

TEST_CASE("initial load is deterministic") {
  Scenario sc = parse_scenario(kScripted);
  auto a = make_environment(sc)->initial_load();
  auto b = make_environment(sc)->initial_load();
  REQUIRE(a.size() == 2);
  CHECK(a[0].second.size() == 3);
  for (std::size_t m = 0; m < a.size(); ++m)
    for (std::size_t i = 0; i < a[m].second.size(); ++i)
      CHECK(a[m].second[i] == b[m].second[i]);
}

TEST_CASE("the scripted environment follows its script") {
  Scenario sc = parse_scenario(kScripted);
  auto env = make_environment(sc);
  TraceWriter trace;
  Engine engine(env->initial_load(), trace);

  auto batches = env->emit_perturbations(1);
  REQUIRE(batches.size() == 1);
  CHECK(batches[0].modality == "Ma");
  CHECK(batches[0].instances.size() == 2);

  StructureView view = engine.begin_tick(1, batches);
  auto events = env->sensory_response(view);
  REQUIRE(events.size() == 1);
  CHECK(events[0].removed_ids.size() == 1);
  CHECK(events[0].emergents.size() == 2);

  CHECK(env->emit_perturbations(2).empty());  // quiescent clock
}

TEST_CASE("scripted runs reach a terminal report") {
  Scenario sc = parse_scenario(kScripted);
  TraceWriter trace;
  RunReport report = run_scenario(sc, trace);
  CHECK(report.final_clock == 2);
  CHECK(report.status == "budget-exhausted");  // the single removal is never recomposed
  CHECK(report.final_deficits.at("Ma") == 1);
  CHECK(trace.lines() > 0);
}

TEST_CASE("a zero budget exhausts immediately") {
  Scenario sc = parse_scenario(kScripted);
  sc.budget = 0;
  TraceWriter trace;
  RunReport report = run_scenario(sc, trace);
  CHECK(report.status == "budget-exhausted");
  CHECK(report.final_clock == 0);
}

TEST_CASE("identical seeds give byte-identical traces and runs") {
  Scenario sc = parse_scenario(kEem);
  TraceWriter t1, t2;
  run_scenario(sc, t1);
  run_scenario(sc, t2);
  CHECK(t1.text() == t2.text());
}

TEST_CASE("changing the seed changes the filler content") {
  Scenario sc = parse_scenario(kEem);
  TraceWriter t1, t2;
  run_scenario(sc, t1);
  sc.seed = 10;
  run_scenario(sc, t2);
  CHECK_FALSE(t1.text() == t2.text());
}

TEST_CASE("eem instances decode to their token plus filler") {
  Scenario sc = parse_scenario(kEem);
  auto env = make_environment(sc);
  auto load = env->initial_load();
  REQUIRE(load.size() == 2);
  for (const EFormula& f : load[0].second) {
    std::uint64_t value = ebinary_decode(f);
    // token 1100 followed by 4 filler bits: value in [11000000b, 11001111b]
    CHECK(value >= 0b11000000);
    CHECK(value <= 0b11001111);
  }
}

TEST_CASE("the perturbation change forces a new category") {
  Scenario sc = parse_scenario(kEem);
  auto env = make_environment(sc);
  TraceWriter trace;
  Engine engine(env->initial_load(), trace);

  auto before = env->emit_perturbations(1);
  auto after = env->emit_perturbations(2);  // change-clock = 2
  REQUIRE_FALSE(before.empty());
  REQUIRE_FALSE(after.empty());
  // after the change the batches categorize under a fresh key, so the
  // engine is forced to open a new category
  Category cat_before = category(before[0].instances);
  Category cat_after = category(after[0].instances);
  CHECK_FALSE(cat_before.key() == cat_after.key());
}

TEST_CASE("eem sensory responses remove matching states and emerge c instances") {
  Scenario sc = parse_scenario(kEem);
  auto env = make_environment(sc);
  TraceWriter trace;
  Engine engine(env->initial_load(), trace);
  auto batches = env->emit_perturbations(1);
  StructureView view = engine.begin_tick(1, batches);
  auto events = env->sensory_response(view);
  REQUIRE(events.size() == 1);
  CHECK(events[0].modality == "M1");  // b = 1100 matches M1's token
  CHECK(events[0].removed_ids.size() == 1);
  CHECK(events[0].emergents.size() == 2);
  CHECK(engine.complete_tick(events) == EngineState::Running);
}

TEST_CASE("letters produce structurally distinct formulas") {
  std::set<std::string> renders;
  for (std::size_t i = 0; i < 20; ++i) CHECK(renders.insert(letter_formula(i).render()).second);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::uint64_t t = 0; t < 3; ++t)
      CHECK_FALSE(letter_formula(i) == ordinal(t));
}
