#pragma once

#include <string>
#include <vector>

#include "perfrepair/exec/instrument.hpp"
#include "perfrepair/exec/testcase.hpp"
#include "perfrepair/harness/suite.hpp"
#include "perfrepair/invariants/infer.hpp"
#include "perfrepair/invariants/refine.hpp"
#include "perfrepair/invariants/spec.hpp"
#include "perfrepair/parallel.hpp"
#include "perfrepair/validate/check.hpp"

namespace perfrepair::harness {

using invariants::InvariantSet;

struct AnalysisOptions {
  std::size_t falsification_budget = 200;
  std::uint64_t min_support = 2;
  std::size_t workers = 1;
};

struct CaseRun {
  std::string id;
  exec::Status status = exec::Status::Completed;
  std::uint64_t steps = 0;
  std::uint64_t threshold = 0;
  exec::RunClass cls = exec::RunClass::Slow;
};

/// Everything derived from the original program and its suite before any
/// patch is considered.
struct Analysis {
  std::vector<CaseRun> cases;
  std::vector<std::string> passing;  // ids of fast cases
  std::vector<std::string> failing;
  InvariantSet suite_invariants;  // all normally terminated cases together
  InvariantSet good;              // refined, from fast runs
  InvariantSet mix;               // refined, from slow runs
  invariants::Spec spec;
  validate::Regions regions;
  std::size_t generated = 0;
  std::size_t generated_fast = 0;
  std::size_t generated_slow = 0;
};

inline bool terminated(exec::Status s) { return s == exec::Status::Completed || s == exec::Status::InputExhausted; }

/// Runs the instrumented original over the suite and the falsification
/// inputs, infers good and mixed invariants, refines them on the generated
/// inputs of the matching class, and builds the specification.
inline Analysis analyze(const lang::Program& p, const TestSuite& suite, const AnalysisOptions& opt) {
  Analysis a;
  const exec::CompiledProgram inst(exec::instrument(p));
  const auto& tests = suite.cases;

  std::vector<invariants::SampleSummary> parts(tests.size());
  a.cases.resize(tests.size());
  parallel_for(tests.size(), opt.workers, [&](std::size_t i) {
    invariants::SummarySink sink;
    const auto r = inst.run(tests[i].input, suite.budget, &sink);
    const auto c = exec::classify(r, tests[i].expected, tests[i].threshold);
    a.cases[i] = {tests[i].id, r.status, r.steps, tests[i].threshold, c.cls};
    if (terminated(r.status)) parts[i] = std::move(sink.summary);
  });
  invariants::SampleSummary good_s, mix_s, all_s;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const bool fast = a.cases[i].cls == exec::RunClass::Fast;
    (fast ? a.passing : a.failing).push_back(tests[i].id);
    (fast ? good_s : mix_s).merge(parts[i]);
    all_s.merge(parts[i]);
    (fast ? a.regions.passing : a.regions.failing).push_back({tests[i].input, tests[i].threshold, tests[i].id});
  }
  a.suite_invariants = invariants::infer(all_s, invariants::Provenance::Combined);
  const auto good0 = invariants::infer(good_s, invariants::Provenance::FromPassing);
  const auto mix0 = invariants::infer(mix_s, invariants::Provenance::FromFailing);

  // generated inputs take the class the original gives them
  const auto gen = make_generator(suite);
  const auto inputs = gen->generate(opt.falsification_budget);
  a.generated = inputs.size();
  std::vector<invariants::SampleSummary> gparts(inputs.size());
  std::vector<int> gclass(inputs.size(), -1);  // 1 fast, 0 slow, -1 dropped
  parallel_for(inputs.size(), opt.workers, [&](std::size_t i) {
    invariants::SummarySink sink;
    const auto r = inst.run(inputs[i].input, suite.budget, &sink);
    if (!terminated(r.status)) return;
    gclass[i] = !inputs[i].threshold || r.steps <= *inputs[i].threshold ? 1 : 0;
    gparts[i] = std::move(sink.summary);
  });
  invariants::SampleSummary gfast, gslow;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (gclass[i] < 0) continue;
    if (gclass[i] == 1) {
      ++a.generated_fast;
      gfast.merge(gparts[i]);
      a.regions.passing.push_back(inputs[i]);
    } else {
      ++a.generated_slow;
      gslow.merge(gparts[i]);
      a.regions.failing.push_back(inputs[i]);
    }
  }
  a.good = invariants::apply_counterexamples(good0, gfast);
  a.mix = invariants::apply_counterexamples(mix0, gslow);

  invariants::SpecOptions so;
  so.min_support = opt.min_support;
  so.efficiency_only = true;
  a.spec = invariants::build_spec(a.good, a.mix, invariants::param_names(p), so);
  return a;
}

}  // namespace perfrepair::harness
