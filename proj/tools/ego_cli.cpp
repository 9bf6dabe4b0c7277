// Command-line entry point: run scenarios, verify the theorem properties,
// and evaluate set relations between formulas.
//
// Exit codes: 0 success/equilibrium, 1 verification failure, 2 usage error,
// 3 destructive change, 4 resource limit.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ego/environment.hpp"
#include "ego/evaluator.hpp"
#include "ego/sweep.hpp"

namespace {

enum class LogLevel { Error = 0, Info = 1, Debug = 2, Trace = 3 };

LogLevel log_level() {
  const char* env = std::getenv("EGO_LOG_LEVEL");
  if (!env) return LogLevel::Info;
  std::string v(env);
  if (v == "error") return LogLevel::Error;
  if (v == "info") return LogLevel::Info;
  if (v == "debug") return LogLevel::Debug;
  if (v == "trace") return LogLevel::Trace;
  return LogLevel::Info;
}

void log(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) <= static_cast<int>(log_level()))
    std::cerr << message << "\n";
}

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDestroyed = 3;
constexpr int kExitResource = 4;

int cmd_run(const std::string& scenario_path, const std::string& trace_path, long budget,
            long seed, std::size_t chain_limit) {
  ego::Scenario scenario = ego::load_scenario_file(scenario_path);
  if (budget >= 0) scenario.budget = budget;
  if (seed >= 0) scenario.seed = static_cast<std::uint64_t>(seed);

  ego::EngineConfig config;
  config.max_chain_length = chain_limit;

  ego::TraceWriter trace;
  ego::RunReport report = ego::run_scenario(scenario, trace, config);

  std::ofstream out(trace_path, std::ios::binary);
  if (!out) throw ego::domain_error("cannot write trace file " + trace_path);
  out << trace.text();
  out.close();

  std::cout << "status=" << report.status << " clock=" << report.final_clock << "\n";
  for (const auto& [clock, deficits] : report.clock_deficits)
    for (const auto& [modality, deficit] : deficits)
      std::cout << "deficit clock=" << clock << " modality=" << modality
                << " value=" << deficit << "\n";
  for (const auto& [key, value] : report.residual_ledger)
    std::cout << "residual cat=" << key << " value=" << value << "\n";
  for (const ego::Promotion& p : report.promotions)
    std::cout << "promotion clock=" << p.clock << " kind=" << p.kind
              << " cat=" << p.category_key << "\n";
  std::cout << "trace=" << trace_path << "\n";
  return report.status == "destroyed" ? kExitDestroyed : kExitOk;
}

int report_sweep(const std::string& name, const ego::SweepOutcome& outcome) {
  std::cout << "suite=" << name << " checked=" << outcome.checked
            << " failures=" << outcome.failures.size()
            << (outcome.ok() ? " PASS" : " FAIL") << "\n";
  for (std::size_t i = 0; i < outcome.failures.size() && i < 10; ++i)
    std::cout << "  " << outcome.failures[i] << "\n";
  return outcome.ok() ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const std::string& suite, std::size_t max_nodes, int max_depth,
               std::size_t max_width, std::size_t samples, long seed, bool serial) {
  const bool parallel = !serial;
  auto started = std::chrono::steady_clock::now();
  int rc = kExitOk;
  if (suite == "selfref") {
    std::vector<ego::EFormula> corpus = ego::enumerate_eformulas_max_nodes(max_nodes);
    log(LogLevel::Debug, "corpus size " + std::to_string(corpus.size()));
    rc = std::max(rc, report_sweep("selfref-exhaustive",
                                   ego::selfref_pair_sweep(corpus, parallel)));
    rc = std::max(rc, report_sweep("selfref-random",
                                   ego::selfref_random_sweep(
                                       static_cast<std::uint64_t>(seed), samples, max_depth,
                                       parallel)));
  } else if (suite == "lineage") {
    std::vector<ego::EFormula> corpus = ego::enumerate_eformulas_max_nodes(max_nodes);
    rc = std::max(rc, report_sweep("lineage-exhaustive",
                                   ego::lineage_pair_sweep(corpus, parallel)));
    std::vector<ego::EFormula> bounded = ego::enumerate_eformulas_bounded(max_width, 3);
    rc = std::max(rc, report_sweep("lineage-bounded",
                                   ego::lineage_pair_sweep(bounded, parallel)));
  } else if (suite == "examples") {
    rc = std::max(rc, report_sweep("examples", ego::examples_suite()));
  } else {
    std::cerr << "unknown suite '" << suite << "' (expected selfref|lineage|examples)\n";
    return kExitUsage;
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  log(LogLevel::Info, "verify " + suite + " took " + std::to_string(elapsed) + " ms");
  return rc;
}

int cmd_eval(const std::string& relation, const std::string& lhs_text,
             const std::string& rhs_text, bool show_expansion, const ego::Limits& limits,
             std::size_t pairing_limit) {
  ego::EFormula lhs = ego::normalize(ego::parse(lhs_text, limits));
  ego::EFormula rhs = ego::normalize(ego::parse(rhs_text, limits));
  if (relation == "eq" || relation == "in" || relation == "subset") {
    ego::EFormula evaluator =
        relation == "eq"    ? ego::equality_evaluator(lhs, rhs, pairing_limit)
        : relation == "in"  ? ego::membership_evaluator(lhs, rhs, pairing_limit)
                            : ego::subset_evaluator(lhs, rhs, pairing_limit);
    if (show_expansion) std::cout << "expansion=" << evaluator.render() << "\n";
    std::cout << "class=" << ego::to_string(ego::classify(evaluator)) << "\n";
    return kExitOk;
  }
  ego::SetOpResult result = relation == "cap" ? ego::intersection(lhs, rhs, show_expansion)
                                              : ego::set_union(lhs, rhs, show_expansion);
  std::cout << "result=" << result.value.render() << "\n";
  if (relation == "cap") std::cout << "disjoint=" << (result.disjoint ? 1 : 0) << "\n";
  if (result.verification) {
    std::cout << "verification=" << result.verification->render() << "\n";
    std::cout << "class=" << ego::to_string(ego::classify(*result.verification)) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"E-language kernel and homeostatic cognition simulator"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path;
  long budget = -1, run_seed = -1;
  std::size_t chain_limit = 6;
  CLI::App* run = app.add_subcommand("run", "execute a scenario clock loop");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--trace", trace_path, "trace output file")->required();
  run->add_option("--budget", budget, "override the scenario clock budget");
  run->add_option("--seed", run_seed, "override the scenario seed");
  run->add_option("--max-chain", chain_limit, "manipulation chain length limit");

  std::string suite;
  std::size_t max_nodes = 9, max_width = 4, samples = 1000;
  int max_depth = 4;
  long verify_seed = 20240901;
  bool serial = false;
  CLI::App* verify = app.add_subcommand("verify", "run theorem property suites");
  verify->add_option("--suite", suite, "selfref|lineage|examples")->required();
  verify->add_option("--max-nodes", max_nodes, "exhaustive corpus node bound");
  verify->add_option("--max-depth", max_depth, "random formula depth bound");
  verify->add_option("--max-width", max_width, "bounded corpus width");
  verify->add_option("--samples", samples, "random pair count");
  verify->add_option("--seed", verify_seed, "random sweep seed");
  verify->add_flag("--serial", serial, "disable the parallel sweep path");

  std::string lhs, rhs;
  bool rel_eq = false, rel_in = false, rel_subset = false, rel_cap = false, rel_cup = false;
  bool show_expansion = false;
  CLI::App* eval = app.add_subcommand("eval", "build and classify a relational evaluator");
  eval->add_flag("--eq", rel_eq, "equality evaluator");
  eval->add_flag("--in", rel_in, "membership evaluator");
  eval->add_flag("--subset", rel_subset, "subset evaluator");
  eval->add_flag("--cap", rel_cap, "intersection");
  eval->add_flag("--cup", rel_cup, "union");
  eval->add_flag("--show-expansion", show_expansion, "print the constructed formula");
  eval->add_option("lhs", lhs, "left formula")->required();
  eval->add_option("rhs", rhs, "right formula")->required();
  ego::Limits limits;
  std::size_t eval_pairing_limit = 10000;
  eval->add_option("--max-depth", limits.max_depth, "formula depth limit");
  eval->add_option("--max-width", limits.max_width, "formula width limit");
  eval->add_option("--pairing-limit", eval_pairing_limit, "surjection enumeration limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed())
      return cmd_run(scenario_path, trace_path, budget, run_seed, chain_limit);
    if (verify->parsed())
      return cmd_verify(suite, max_nodes, max_depth, max_width, samples, verify_seed, serial);
    if (eval->parsed()) {
      int picked = rel_eq + rel_in + rel_subset + rel_cap + rel_cup;
      if (picked != 1) {
        std::cerr << "choose exactly one of --eq --in --subset --cap --cup\n";
        return kExitUsage;
      }
      std::string relation = rel_eq ? "eq" : rel_in ? "in" : rel_subset ? "subset"
                             : rel_cap ? "cap" : "cup";
      return cmd_eval(relation, lhs, rhs, show_expansion, limits, eval_pairing_limit);
    }
  } catch (const ego::resource_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const ego::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ego::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
