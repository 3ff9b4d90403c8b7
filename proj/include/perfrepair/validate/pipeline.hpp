#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perfrepair/exec/instrument.hpp"
#include "perfrepair/exec/testcase.hpp"
#include "perfrepair/invariants/infer.hpp"
#include "perfrepair/invariants/refine.hpp"
#include "perfrepair/validate/check.hpp"
#include "perfrepair/validate/compare.hpp"

namespace perfrepair::validate {

enum class Stage { FailedTests, FailedViolatedCheck, FailedCorrectCheck, FailedSemaEq, FailedPredSm, Valid };

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::FailedTests: return "FailedTests";
    case Stage::FailedViolatedCheck: return "FailedViolatedCheck";
    case Stage::FailedCorrectCheck: return "FailedCorrectCheck";
    case Stage::FailedSemaEq: return "FailedSemaEq";
    case Stage::FailedPredSm: return "FailedPredSm";
    case Stage::Valid: return "Valid";
  }
  return "?";
}

struct TestRow {
  std::string id;
  exec::Status status = exec::Status::Completed;
  std::uint64_t steps = 0;
  std::uint64_t threshold = 0;
  bool passed = false;
};

struct BoundRow {
  std::optional<Value> original;
  std::optional<Value> patched;
};

/// Stage 4 material: both programs re-inferred on the suite.
struct Comparison {
  InvariantSet original_functional;
  InvariantSet patched_functional;
  std::vector<Invariant> only_original;  // not implied by the patched set
  std::vector<Invariant> only_patched;
  bool sema_eq = false;
  std::map<std::string, BoundRow> bounds;  // exit counter bounds
  bool pred_sm = false;
  std::string error;  // PointMismatch / MissingCounter text
};

struct Verdict {
  Stage stage = Stage::Valid;
  std::vector<std::string> evidence;
  std::vector<TestRow> tests;
  /// Absent when the tests already failed.
  std::optional<std::vector<InvariantCheck>> violated;
  std::optional<std::vector<InvariantCheck>> correct;
  std::vector<std::string> abnormal;
  std::optional<Comparison> comparison;
  std::size_t passing_inputs = 0;
  std::size_t failing_inputs = 0;

  bool valid() const { return stage == Stage::Valid; }
};

struct PipelineOptions {
  std::uint64_t budget = 100'000'000;  // per run, for invariant checks and re-inference
  std::size_t workers = 1;
};

inline std::vector<GeneratedInput> suite_inputs(const std::vector<exec::TestCase>& tests) {
  std::vector<GeneratedInput> out;
  for (const auto& t : tests) out.push_back({t.input, t.threshold, t.id});
  return out;
}

/// Re-infers every invariant of `p` over the suite, as in the stage 4 check.
inline InvariantSet reinfer(const lang::Program& p, const std::vector<exec::TestCase>& tests,
                            const PipelineOptions& opt) {
  const exec::CompiledProgram cp(exec::instrument(p));
  invariants::SamplingOptions so;
  so.step_budget = opt.budget;
  so.workers = opt.workers;
  return invariants::infer(invariants::sample(cp, suite_inputs(tests), so).summary, invariants::Provenance::Combined);
}

namespace detail {

inline std::string describe_bound(const std::optional<Value>& v) { return v ? std::to_string(*v) : "-"; }

inline Comparison compare(const InvariantSet& original, const InvariantSet& patched) {
  Comparison c;
  c.original_functional = functional_part(original);
  c.patched_functional = functional_part(patched);
  try {
    c.sema_eq = sema_eq(c.original_functional, c.patched_functional);
  } catch (const PointMismatch& e) {
    c.error = e.what();
    return c;
  }
  c.only_original = not_implied(c.original_functional, c.patched_functional);
  c.only_patched = not_implied(c.patched_functional, c.original_functional);
  for (const auto& [name, b] : counter_bounds(original)) c.bounds[name].original = b;
  for (const auto& [name, b] : counter_bounds(patched)) c.bounds[name].patched = b;
  try {
    c.pred_sm = pred_sm(patched, original);
  } catch (const MissingCounter& e) {
    c.error = e.what();
  }
  return c;
}

}  // namespace detail

/// Stage 1 tests, stage 2 violated check over the failing region, stage 3
/// correct check over the passing region, stage 4 sema_eq and pred_sm on
/// re-inferred invariants. Stops at the first failing stage.
/// `original_invariants`, when given, must be reinfer(original, tests, opt).
inline Verdict pipeline(const lang::Program& original, const lang::Program& patched,
                        const std::vector<exec::TestCase>& tests, const invariants::Spec& spec,
                        const Regions& regions, const PipelineOptions& opt = {},
                        const InvariantSet* original_invariants = nullptr) {
  Verdict v;
  v.passing_inputs = regions.passing.size();
  v.failing_inputs = regions.failing.size();

  const exec::CompiledProgram plain(patched);
  v.tests.resize(tests.size());
  parallel_for(tests.size(), opt.workers, [&](std::size_t i) {
    const auto o = exec::run_test(plain, tests[i]);
    v.tests[i] = {tests[i].id, o.run.status, o.run.steps, tests[i].threshold, o.passed()};
  });
  for (const auto& row : v.tests)
    if (!row.passed) v.evidence.push_back(row.id + ": " + exec::to_string(row.status) + " after " +
                                          std::to_string(row.steps) + " steps");
  if (!v.evidence.empty()) {
    v.stage = Stage::FailedTests;
    return v;
  }

  const exec::CompiledProgram inst(exec::instrument(patched));
  v.violated = check_violated(inst, spec, regions.failing, opt.budget, opt.workers);
  for (const auto& c : *v.violated)
    if (c.holds) v.evidence.push_back("still holds: " + describe(c.inv));
  if (!v.evidence.empty()) {
    v.stage = Stage::FailedViolatedCheck;
    return v;
  }

  v.correct = check_correct(inst, spec, regions.passing, opt.budget, opt.workers, &v.abnormal);
  for (const auto& a : v.abnormal) v.evidence.push_back("abnormal run " + a);
  for (const auto& c : *v.correct)
    if (!c.holds) v.evidence.push_back("falsified: " + describe(c.inv));
  if (!v.evidence.empty()) {
    v.stage = Stage::FailedCorrectCheck;
    return v;
  }

  const auto before = original_invariants ? *original_invariants : reinfer(original, tests, opt);
  v.comparison = detail::compare(before, reinfer(patched, tests, opt));
  const auto& c = *v.comparison;
  if (!c.sema_eq) {
    v.stage = Stage::FailedSemaEq;
    if (!c.error.empty()) v.evidence.push_back(c.error);
    for (const auto& inv : c.only_original) v.evidence.push_back("lost: " + describe(inv));
    for (const auto& inv : c.only_patched) v.evidence.push_back("gained: " + describe(inv));
    return v;
  }
  if (!c.pred_sm) {
    v.stage = Stage::FailedPredSm;
    if (!c.error.empty()) v.evidence.push_back(c.error);
    for (const auto& [name, row] : c.bounds)
      if (row.patched.value_or(0) >= row.original.value_or(0) || !row.original)
        v.evidence.push_back(name + ": " + detail::describe_bound(row.original) + " -> " +
                             detail::describe_bound(row.patched));
    if (v.evidence.empty()) v.evidence.push_back("no counter bound improved");
    return v;
  }
  v.stage = Stage::Valid;
  return v;
}

}  // namespace perfrepair::validate
