#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "perfrepair/exec/classify.hpp"
#include "perfrepair/harness/analysis.hpp"
#include "perfrepair/harness/config.hpp"
#include "perfrepair/harness/report.hpp"
#include "perfrepair/invariants/report.hpp"

namespace perfrepair::harness {

/// A suite that cannot drive the requested command.
class SuiteError : public Error {
 public:
  using Error::Error;
};

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline AnalysisOptions analysis_options(const Config& cfg) {
  return {cfg.falsification_budget, cfg.min_support, cfg.workers};
}

/// Full repair: analyze, localize, search, validate; a rejected patch is
/// excluded and the search repeated, up to cfg.max_attempts searches.
inline CommandResult cmd_repair(const Config& cfg) {
  const auto p = load_program(cfg.program);
  const auto suite = load_suite(cfg.suite);
  check_suite_against(suite, p);
  const auto a = analyze(p, suite, analysis_options(cfg));
  if (a.passing.empty()) throw SuiteError("no case is fast on the original program");
  if (a.failing.empty()) throw SuiteError("no case is slow on the original program");
  const auto ranking = repair::localize(a.spec, p);

  json report;
  report["command"] = "repair";
  report["program"] = p.name;
  report["analysis"] = analysis_to_json(a, cfg.falsification_budget);
  report["ranking"] = ranking_to_json(ranking, p);
  report["search"] = {{"seed", cfg.search.seed},
                      {"population", cfg.search.population},
                      {"generations", cfg.search.generations},
                      {"mutation_rate", cfg.search.mutation_rate},
                      {"max_mutations", cfg.search.max_mutations},
                      {"max_attempts", cfg.max_attempts}};

  const validate::PipelineOptions po{suite.budget, cfg.workers};
  std::set<std::string> rejected;
  json attempts = json::array();
  std::optional<repair::Patch> accepted;
  std::optional<validate::Verdict> final_verdict;
  for (std::size_t k = 0; k < cfg.max_attempts; ++k) {
    const auto r = repair::search(p, suite.cases, a.spec, cfg.search, rejected);
    json at;
    at["outcome"] = repair::to_string(r.outcome);
    at["generations"] = r.generations;
    at["evaluations"] = r.evaluations;
    at["fitness"] = {{"passed", r.fitness.passed}, {"steps", r.fitness.steps}};
    if (!r.diagnostic.empty()) at["diagnostic"] = r.diagnostic;
    if (!r.patch) {
      attempts.push_back(at);
      break;
    }
    at["patch"] = patch_to_json(*r.patch);
    auto v = validate::pipeline(p, r.patch->program, suite.cases, a.spec, a.regions, po, &a.suite_invariants);
    at["verdict"] = verdict_to_json(v);
    attempts.push_back(at);
    final_verdict = v;
    if (v.valid()) {
      accepted = r.patch;
      break;
    }
    if (r.outcome == repair::SearchOutcome::AlreadyFast) break;
    rejected.insert(lang::pretty_print(r.patch->program));
  }
  report["attempts"] = attempts;
  report["result"] = accepted ? "Valid" : "Fail";
  if (accepted) {
    report["patch"] = patch_to_json(*accepted);
    report["patched_program"] = lang::pretty_print(accepted->program);
  } else {
    report["patch"] = nullptr;
    report["patched_program"] = nullptr;
  }
  report["verdict"] = final_verdict ? verdict_to_json(*final_verdict) : json(nullptr);
  return {accepted ? 0 : 1, dump(report)};
}

/// Validates an externally supplied patch with the spec derived from the
/// original program and suite.
inline CommandResult cmd_validate(const Config& cfg, const PatchFile& patch) {
  const auto p = load_program(cfg.program);
  const auto suite = load_suite(cfg.suite);
  check_suite_against(suite, p);
  const auto pt = apply(patch, p);
  const auto a = analyze(p, suite, analysis_options(cfg));
  const validate::PipelineOptions po{suite.budget, cfg.workers};
  const auto v = validate::pipeline(p, pt, suite.cases, a.spec, a.regions, po, &a.suite_invariants);
  json report;
  report["command"] = "validate";
  report["program"] = p.name;
  report["analysis"] = analysis_to_json(a, cfg.falsification_budget);
  report["patch"] = patch_to_json(repair::make_patch(p, patch.mutations, pt));
  report["patched_program"] = lang::pretty_print(pt);
  report["verdict"] = verdict_to_json(v);
  return {v.valid() ? 0 : 1, dump(report)};
}

/// Invariants of `p` over every normally terminating suite case, in the
/// line-oriented report format.
inline CommandResult cmd_infer(const lang::Program& p, const TestSuite& suite, std::size_t workers) {
  validate::PipelineOptions po{suite.budget, workers};
  auto s = validate::reinfer(p, suite.cases, po);
  return {0, invariants::write_report(s)};
}

/// Trace dumps of the instrumented program, one block per case.
inline CommandResult cmd_trace(const lang::Program& p, const TestSuite& suite, const std::string& only = "") {
  const auto inst = exec::instrument(p);
  std::ostringstream os;
  bool any = false;
  for (const auto& t : suite.cases) {
    if (!only.empty() && t.id != only) continue;
    any = true;
    const auto r = exec::run(inst, t.input, suite.budget);
    os << "# case " << t.id << " status=" << exec::to_string(r.status) << " steps=" << r.steps << "\n";
    os << exec::dump(r.trace);
  }
  if (!any) throw SuiteError("no case with id '" + only + "'");
  return {0, os.str()};
}

/// Steps and class of every case, for setting thresholds.
inline CommandResult cmd_bench(const lang::Program& p, const TestSuite& suite, std::size_t workers) {
  const exec::CompiledProgram cp(p);
  std::vector<exec::RunResult> runs(suite.cases.size());
  parallel_for(suite.cases.size(), workers,
               [&](std::size_t i) { runs[i] = cp.run(suite.cases[i].input, suite.budget); });
  std::ostringstream os;
  os << "id\tstatus\tsteps\tthreshold\tclass\toutputs\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& t = suite.cases[i];
    const auto c = exec::classify(runs[i], t.expected, t.threshold);
    os << t.id << '\t' << exec::to_string(runs[i].status) << '\t' << runs[i].steps << '\t' << t.threshold << '\t'
       << exec::to_string(c.cls) << '\t' << (exec::outputs_match(runs[i], t.expected) ? "ok" : "wrong") << '\n';
  }
  return {0, os.str()};
}

}  // namespace perfrepair::harness
