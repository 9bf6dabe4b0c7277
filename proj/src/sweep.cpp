#include "ego/sweep.hpp"

#include <algorithm>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ego/categorize.hpp"
#include "ego/codec.hpp"
#include "ego/engine.hpp"
#include "ego/environment.hpp"
#include "ego/evaluator.hpp"
#include "ego/lineage.hpp"

namespace ego {

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

std::vector<EFormula> enumerate_eformulas_max_nodes(std::size_t max_nodes) {
  // Global list kept in canonical order (node count, then render), which is
  // exactly the canonical child order: picking children by increasing index
  // yields an already-canonical branch.
  std::vector<EFormula> all;
  std::vector<std::uint64_t> sizes;
  if (max_nodes == 0) return all;
  all.emplace_back();
  sizes.push_back(1);
  for (std::size_t count = 2; count <= max_nodes; ++count) {
    std::vector<EFormula> batch;
    std::vector<Assembly> chosen;
    std::function<void(std::size_t, std::uint64_t)> pick = [&](std::size_t start,
                                                               std::uint64_t remaining) {
      if (remaining == 0) {
        if (!chosen.empty()) batch.push_back(normalize(Assembly::branch(chosen)));
        return;
      }
      for (std::size_t i = start; i < all.size(); ++i) {
        if (sizes[i] > remaining) break;  // sizes are non-decreasing
        chosen.push_back(all[i].tree());
        pick(i + 1, remaining - sizes[i]);
        chosen.pop_back();
      }
    };
    pick(0, count - 1);
    std::sort(batch.begin(), batch.end());
    for (EFormula& f : batch) {
      sizes.push_back(f.node_count());
      all.push_back(std::move(f));
    }
  }
  return all;
}

std::vector<EFormula> enumerate_eformulas_bounded(std::size_t max_width, std::size_t max_depth) {
  std::vector<EFormula> level{EFormula{}};
  for (std::size_t d = 1; d <= max_depth; ++d) {
    std::vector<EFormula> next = level;
    std::vector<Assembly> chosen;
    std::function<void(std::size_t)> pick = [&](std::size_t start) {
      if (!chosen.empty() && chosen.size() <= max_width)
        next.push_back(normalize(Assembly::branch(chosen)));
      if (chosen.size() >= max_width) return;
      for (std::size_t i = start; i < level.size(); ++i) {
        chosen.push_back(level[i].tree());
        pick(i + 1);
        chosen.pop_back();
      }
    };
    pick(0);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }
  return level;
}

namespace {

Assembly random_tree(std::mt19937_64& rng, int depth_left, int max_width) {
  if (depth_left <= 0 || rng() % 4 == 0) return Assembly::leaf();
  std::size_t width = 1 + rng() % static_cast<std::uint64_t>(max_width);
  std::vector<Assembly> children;
  children.reserve(width);
  for (std::size_t i = 0; i < width; ++i)
    children.push_back(random_tree(rng, depth_left - 1, max_width));
  return Assembly::branch(std::move(children));
}

}  // namespace

Assembly random_raw_assembly(std::mt19937_64& rng, int max_depth, int max_width) {
  return random_tree(rng, max_depth, max_width);
}

EFormula random_eformula(std::mt19937_64& rng, int max_depth, int max_width) {
  return normalize(random_tree(rng, max_depth, max_width));
}

Assembly shuffled_duplicate_variant(const EFormula& f, std::mt19937_64& rng) {
  std::function<Assembly(const Assembly&)> rebuild = [&](const Assembly& node) -> Assembly {
    if (node.is_leaf()) return node;
    std::vector<Assembly> children;
    for (const Assembly& c : node.children()) {
      Assembly v = rebuild(c);
      children.push_back(v);
      if (rng() % 3 == 0) children.push_back(v);  // duplicate member
    }
    for (std::size_t i = children.size(); i > 1; --i)
      std::swap(children[i - 1], children[rng() % i]);
    return Assembly::branch(std::move(children));
  };
  return rebuild(f.tree());
}

namespace {

// Runs `check` over [0, total) and collects failure strings in index order,
// identically for the serial and parallel paths.
SweepOutcome run_grid(std::uint64_t total,
                      const std::function<std::string(std::uint64_t)>& check, bool parallel) {
  std::vector<std::pair<std::uint64_t, std::string>> failures;
  if (parallel && openmp_enabled()) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (long long t = 0; t < static_cast<long long>(total); ++t) {
      std::string fail = check(static_cast<std::uint64_t>(t));
      if (!fail.empty()) {
#pragma omp critical
        failures.emplace_back(static_cast<std::uint64_t>(t), std::move(fail));
      }
    }
#endif
  } else {
    for (std::uint64_t t = 0; t < total; ++t) {
      std::string fail = check(t);
      if (!fail.empty()) failures.emplace_back(t, std::move(fail));
    }
  }
  std::sort(failures.begin(), failures.end());
  SweepOutcome out;
  out.checked = total;
  for (auto& [idx, text] : failures) out.failures.push_back(std::move(text));
  return out;
}

// Rebuilds the tree with nodes private to the caller. Checks run on clones
// so that concurrent sweeps never touch the shared corpus refcounts.
Assembly clone_tree(const Assembly& a) {
  if (a.is_leaf()) return a;
  std::vector<Assembly> kids;
  kids.reserve(a.children().size());
  for (const Assembly& c : a.children()) kids.push_back(clone_tree(c));
  return Assembly::branch(std::move(kids));
}

std::string check_selfref_pair(const EFormula& x_shared, const EFormula& y_shared) {
  EFormula x = normalize(clone_tree(x_shared.tree()));
  EFormula y = normalize(clone_tree(y_shared.tree()));
  bool equal = x == y;
  SentenceClass cls = classify(equality_evaluator(x, y));
  bool ok = equal ? cls == SentenceClass::Tautology : cls == SentenceClass::Contradiction;
  if (ok) return "";
  return "selfref failed for " + x.render() + " vs " + y.render() + " -> " + to_string(cls);
}

}  // namespace

SweepOutcome selfref_pair_sweep(const std::vector<EFormula>& corpus, bool parallel) {
  const std::uint64_t n = corpus.size();
  return run_grid(n * n,
                  [&](std::uint64_t t) {
                    return check_selfref_pair(corpus[t / n], corpus[t % n]);
                  },
                  parallel);
}

SweepOutcome selfref_random_sweep(std::uint64_t seed, std::size_t pair_count, int max_depth,
                                  bool parallel) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<EFormula, EFormula>> pairs;
  pairs.reserve(pair_count);
  for (std::size_t k = 0; k < pair_count; ++k) {
    EFormula x = random_eformula(rng, max_depth, 3);
    if (k % 2 == 0) {
      pairs.emplace_back(x, normalize(shuffled_duplicate_variant(x, rng)));
    } else {
      pairs.emplace_back(x, random_eformula(rng, max_depth, 3));
    }
  }
  return run_grid(pairs.size(),
                  [&](std::uint64_t t) {
                    return check_selfref_pair(pairs[t].first, pairs[t].second);
                  },
                  parallel);
}

SweepOutcome lineage_pair_sweep(const std::vector<EFormula>& corpus, bool parallel) {
  const std::uint64_t n = corpus.size();
  return run_grid(n * n,
                  [&](std::uint64_t t) -> std::string {
                    const EFormula& x = corpus[t / n];
                    const EFormula& y = corpus[t % n];
                    bool reference = set_equal(x.tree(), y.tree());
                    bool lineages = fast_equal(x, y);
                    bool canonical = x == y;
                    if (reference == lineages && reference == canonical) return "";
                    return "lineage disagreement for " + x.render() + " vs " + y.render();
                  },
                  parallel);
}

namespace {

struct ExampleCheck {
  std::string name;
  std::function<bool()> run;
};

EFormula ef(const std::string& text) { return normalize(parse(text)); }

std::vector<ExampleCheck> example_checks() {
  std::vector<ExampleCheck> checks;
  auto add = [&](std::string name, std::function<bool()> run) {
    checks.push_back({std::move(name), std::move(run)});
  };

  add("wff parse {0,{0}}", [] {
    Assembly a = parse("{0,{0}}");
    return a.children().size() == 2 && a.children()[0].is_leaf();
  });
  add("set equality of permuted duplicates", [] {
    return set_equal(parse("{0,{0},{0,{0}}}"), parse("{{{0},0},0,{0},0}"));
  });
  add("set inequality {0} vs {0,{0}}", [] {
    return !set_equal(parse("{0}"), parse("{0,{0}}"));
  });
  add("duplicate members collapse", [] { return ef("{0,0}").render() == "{0}"; });
  add("membership of {0} in {0,{0}}", [] {
    return is_member(parse("{0}"), parse("{0,{0}}")) && !is_member(parse("0"), parse("0"));
  });
  add("negation truth table", [] {
    return eval_truth(parse("{0}"), TruthValue::T) == TruthValue::F &&
           eval_truth(parse("{0}"), TruthValue::F) == TruthValue::T;
  });
  add("equivalence classifications", [] {
    EFormula zero;
    EFormula taut = desugar(Connective::Equiv, {zero, zero});
    EFormula contra = desugar(Connective::Equiv, {zero, ef("{0}")});
    return classify(taut) == SentenceClass::Tautology &&
           classify(contra) == SentenceClass::Contradiction;
  });
  add("disjunction brace form", [] {
    return desugar(Connective::Or, {ef("0"), ef("{0}")}) == ef("{{0},{{0}}}");
  });
  add("containers of 0 and {0} coincide", [] {
    return container(EFormula{}) == ef("{0}") && container(ef("{0}")) == ef("{0}") &&
           container(ef("{0,{0}}")) == ef("{0,{0}}");
  });
  add("pairing of {{0}} with {0,{{0}}}", [] {
    PairingEnumeration e = enumerate_pairings(ef("{{0}}"), ef("{0,{{0}}}"));
    if (e.pairings.size() != 1 || e.pairings[0].pairs.size() != 2) return false;
    for (const auto& [w, z] : e.pairings[0].pairs)
      if (!(w == ef("{0}"))) return false;
    return true;
  });
  add("evaluator of 0 vs {0}", [] {
    return equality_evaluator(EFormula{}, ef("{0}")) ==
           desugar(Connective::Equiv, {EFormula{}, ef("{0}")});
  });
  add("worked evaluator expansion", [] {
    EFormula zero;
    EFormula x = ef("{0}");
    EFormula y = ef("{0,{0}}");
    EFormula inner = desugar(
        Connective::And,
        {desugar(Connective::Equiv, {zero, zero}), desugar(Connective::Equiv, {zero, x})});
    EFormula expected =
        desugar(Connective::And, {desugar(Connective::Equiv, {x, y}), inner});
    EFormula got = equality_evaluator(x, y);
    return got == expected && classify(got) == SentenceClass::Contradiction;
  });
  add("membership evaluator tautology", [] {
    EFormula e = membership_evaluator(ef("{0}"), ef("{0,{0}}"));
    return classify(e) == SentenceClass::Tautology;
  });
  add("descendant sums", [] {
    return desc(parse("{0,{0}}")) == 4 && desc(parse("0")) == 1 &&
           desc(parse("{0,{{0}},{0,{0}}}")) == 9;
  });
  add("four lineages of {0,{{0}},{0,{0}}}", [] {
    LineageSet s = lineage_set(parse("{0,{{0}},{0,{0}}}"));
    std::vector<Lineage> expected{{9, 1}, {9, 3, 2, 1}, {9, 4, 1}, {9, 4, 2, 1}};
    std::sort(expected.begin(), expected.end());
    return s.lineages == expected;
  });
  add("lineage separation of equal-desc trees", [] {
    LineageSet a = lineage_set(parse("{{{0}}}"));
    LineageSet b = lineage_set(parse("{0,{0}}"));
    return a.lineages == std::vector<Lineage>{{4, 3, 2, 1}} && !(a == b);
  });
  add("node code of first-born and second-borns", [] {
    return first_born_code(NodeCode{"012004"}).digits == "0120004" &&
           later_born_code(NodeCode{"012004"}, 1).digits == "01200401" &&
           later_born_code(NodeCode{"012004"}, 2).digits == "01200402";
  });
  add("ordered pair of 0 and {0}", [] {
    return ordered_pair(EFormula{}, ef("{0}")) == ef("{{0},{0,{0}}}");
  });
  add("attractor encoding of the two-maxima distribution", [] {
    EFormula zero;
    EFormula x2 = ordered_pair(ef("{0}"), zero);
    EFormula x3 = ordered_pair(ordered_pair(x2, zero), ordered_pair(zero, ef("{0}")));
    EFormula x5 = ordered_pair(zero, ef("{0}"));
    EFormula expected = ordered_pair(x3, x5);
    return attractor_encode({{1, 4, 5, 2, 3, 1}}) == expected;
  });
  add("binary 101 decodes to 5", [] {
    return ebinary_decode(ebinary_encode("101")) == 5 && ebinary_decode(ebinary_encode("0")) == 0;
  });
  add("category of the worked pair excludes {0}", [] {
    Category c = category({ef("{0,{{0}},{0,{{0}}}}"), ef("{{0},{{0}}}")});
    return c.properties == ef("{0,{{0}}}");
  });
  add("homeostatic arithmetic of the third clock", [] {
    HomeostaticLedger ledger;
    ledger.apply("k", 10);
    ledger.apply("k", -5);
    ledger.apply("k", -4);
    return ledger.at("k") == 1;
  });
  add("a memberless side pairs with the atom", [] {
    PairingEnumeration e = enumerate_pairings(ef("{0}"), ef("0"));
    return e.pairings.size() == 1 && e.pairings[0].pairs.size() == 1 &&
           e.pairings[0].pairs[0].first == ef("0") && e.pairings[0].pairs[0].second == ef("0");
  });
  add("node codes address the shared subassembly", [] {
    NodeCodeMap u(parse("{0,{{0}},{0,{{0}}}}"));
    NodeCodeMap v(parse("{{0},{{0}}}"));
    return render(u.subtree_at(NodeCode{"02"})) == "{{0}}" &&
           render(v.subtree_at(NodeCode{"02"})) == "{{0}}" &&
           render(u.subtree_at(NodeCode{"0"})) == "{0,{{0}},{0,{{0}}}}";
  });
  add("the third position of 100 wraps its digit twice", [] {
    EFormula e = ebinary_encode("100");
    EFormula wrapped = normalize(
        Assembly::branch({Assembly::branch({ebinary_one_atom().tree()})}));
    for (const EFormula& m : e.members())
      if (m == wrapped) return ebinary_decode(e) == 4;
    return false;
  });
  add("two-step recomposition through an intermediate category", [] {
    // C(J) = {P,Q,R,S,T} from C(A) = {P,L,M}, C(B) = {Q,R,W}, C(C) = {S,T,Z}
    // via C(K) = {P,Q,R}.
    std::vector<std::string> names{"P", "L", "M", "Q", "R", "W", "S", "T", "Z"};
    auto letters = [&](std::vector<std::size_t> idx) {
      std::vector<EFormula> out;
      for (std::size_t i : idx) out.push_back(letter_formula(i));
      return out;
    };
    std::vector<EFormula> j_letters = letters({0, 3, 4, 6, 7});
    TraceWriter trace;
    Engine engine({{"J", {tagged_instance(j_letters, 0), tagged_instance(j_letters, 1)}}},
                  trace);
    std::vector<PerceptionBatch> batches{{"J", {tagged_instance(letters({1}), 0),
                                                tagged_instance(letters({1}), 1)}}};
    StructureView view = engine.begin_tick(1, batches);
    SensoryEvent ev;
    ev.modality = "J";
    ev.removed_ids = {view.elements.front().id};
    for (std::uint64_t t = 0; t < 2; ++t) {
      ev.emergents.push_back(tagged_instance(letters({0, 1, 2}), t));
    }
    SensoryEvent ev_b;
    ev_b.modality = "J";
    for (std::uint64_t t = 0; t < 2; ++t)
      ev_b.emergents.push_back(tagged_instance(letters({3, 4, 5}), t));
    SensoryEvent ev_c;
    ev_c.modality = "J";
    for (std::uint64_t t = 0; t < 2; ++t)
      ev_c.emergents.push_back(tagged_instance(letters({6, 7, 8}), t));
    engine.complete_tick({ev, ev_b, ev_c});

    // The intermediate {0,P,Q,R} category must now be registered and the
    // modality restored.
    std::vector<EFormula> k_letters = letters({0, 3, 4});
    std::vector<Assembly> props{Assembly::leaf()};
    for (const EFormula& l : k_letters) props.push_back(l.tree());
    std::string k_key = normalize(Assembly::branch(props)).render();
    return engine.categories().count(k_key) == 1 && engine.deficits().at("J") == 0;
  });
  add("the three-clock recursion restores every modality", [] {
    Scenario sc = parse_scenario(R"(
[seed]
value = 1
[letters]
names = A B C D E F G K O P Q R S T U V
[modalities]
Ma = 10 : A B C
Mb = 11 : D E
Mc = 8 : F G
[schedule]
budget = 3
[script.1]
clock = 1
modality = Ma
perturb = 4 : O P
remove = 5
emerge = 10 : C G K
[script.2]
clock = 2
modality = Mb
perturb = 8 : Q R S
remove = 3
emerge = 12 : A E F P
[script.3]
clock = 3
modality = Mc
perturb = 4 : T U
remove = 4
emerge = 11 : B D V
)");
    TraceWriter trace;
    RunReport report = run_scenario(sc, trace);
    if (report.status != "equilibrium" || report.final_clock != 3) return false;
    for (const auto& [id, deficit] : report.final_deficits)
      if (deficit != 0) return false;
    // residual indices 1 and 3; the third worked category nets to zero
    std::vector<std::int64_t> residuals;
    for (const auto& [key, value] : report.residual_ledger) residuals.push_back(value);
    std::sort(residuals.begin(), residuals.end());
    std::size_t a = trace.text().find("clock=3 op=select modality=Ma deficit=5");
    std::size_t c = trace.text().find("clock=3 op=select modality=Mc deficit=4");
    std::size_t b = trace.text().find("clock=3 op=select modality=Mb deficit=3");
    return residuals == std::vector<std::int64_t>{1, 3} && a < c && c < b &&
           a != std::string::npos;
  });
  add("surplus reassigns to an included deficit category", [] {
    // surplus {L,M,N,O} against deficit {L,O}
    auto letters = [](std::vector<std::size_t> idx) {
      std::vector<EFormula> out;
      for (std::size_t i : idx) out.push_back(letter_formula(i));
      return out;
    };
    std::vector<EFormula> lo = letters({0, 3});
    TraceWriter trace;
    Engine engine({{"Ma", {tagged_instance(lo, 0), tagged_instance(lo, 1)}},
                   {"Mb", {tagged_instance(letters({6, 7}), 0),
                           tagged_instance(letters({6, 7}), 1)}}},
                  trace);
    StructureView view = engine.begin_tick(1, {});
    SensoryEvent ev_a;
    ev_a.modality = "Ma";
    for (const StructureElementView& e : view.elements)
      if (e.modality == "Ma" && e.compliant && ev_a.removed_ids.empty())
        ev_a.removed_ids.push_back(e.id);
    SensoryEvent ev_b;
    ev_b.modality = "Mb";
    for (std::uint64_t t = 0; t < 2; ++t)
      ev_b.emergents.push_back(tagged_instance(letters({0, 1, 2, 3}), t));
    engine.complete_tick({ev_a, ev_b});
    return trace.text().find("op=genus-credit") != std::string::npos &&
           engine.archetypes().find_by_typology(Typology::GenusParadigma).size() == 1;
  });
  add("recurring perturbations promote through recall and coupling", [] {
    auto letters = [](std::vector<std::size_t> idx) {
      std::vector<EFormula> out;
      for (std::size_t i : idx) out.push_back(letter_formula(i));
      return out;
    };
    auto instances = [&](std::vector<std::size_t> idx, std::size_t n) {
      std::vector<EFormula> out;
      for (std::uint64_t t = 0; t < n; ++t) out.push_back(tagged_instance(letters(idx), t));
      return out;
    };
    TraceWriter trace;
    Engine engine({{"M", instances({0, 1}, 4)}}, trace);
    for (long clock = 1; clock <= 3; ++clock) {
      StructureView view = engine.begin_tick(clock, {{"M", instances({8, 9}, 2)}});
      SensoryEvent ev_a;
      ev_a.modality = "M";
      std::size_t taken = 0;
      for (const StructureElementView& e : view.elements)
        if (e.modality == "M" && e.compliant && taken < 2) {
          ev_a.removed_ids.push_back(e.id);
          ++taken;
        }
      ev_a.emergents = instances({0, 5}, 3);
      SensoryEvent ev_b;
      ev_b.modality = "M";
      ev_b.emergents = instances({1, 6}, 3);
      engine.complete_tick({ev_a, ev_b});
    }
    bool perceptual = false, objective = false, chain = false;
    for (const Promotion& p : engine.promotions()) {
      if (p.kind == "perceptual" && p.clock == 2) perceptual = true;
      if (p.kind == "objective" && p.clock == 3) objective = true;
    }
    chain = !engine.executed_chains().empty();
    return perceptual && objective && chain;
  });
  add("changed perturbations force a fresh category", [] {
    Scenario sc = parse_scenario(R"(
[seed]
value = 9
[modalities]
M1 = 4 : bits 1100
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
b = 1100
c = 10001
)");
    auto env = make_environment(sc);
    env->initial_load();
    auto before = env->emit_perturbations(1);
    auto after = env->emit_perturbations(2);
    if (before.empty() || after.empty()) return false;
    return category(before[0].instances).key() != category(after[0].instances).key();
  });

  return checks;
}

}  // namespace

SweepOutcome examples_suite() {
  SweepOutcome out;
  for (const ExampleCheck& check : example_checks()) {
    ++out.checked;
    bool ok = false;
    try {
      ok = check.run();
    } catch (const std::exception& e) {
      out.failures.push_back(check.name + ": " + e.what());
      continue;
    }
    if (!ok) out.failures.push_back(check.name);
  }
  return out;
}

}  // namespace ego
