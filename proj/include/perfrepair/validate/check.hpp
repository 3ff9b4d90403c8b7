#pragma once

#include <string>
#include <vector>

#include "perfrepair/exec/interpreter.hpp"
#include "perfrepair/invariants/generator.hpp"
#include "perfrepair/invariants/spec.hpp"
#include "perfrepair/invariants/summary.hpp"
#include "perfrepair/parallel.hpp"

namespace perfrepair::validate {

using invariants::GeneratedInput;
using invariants::Invariant;

/// Samples of a program over a set of inputs. Runs that stop early still
/// contribute the points they reached.
struct Observation {
  invariants::SampleSummary summary;
  std::vector<exec::Status> statuses;  // per input, in input order
  std::vector<std::uint64_t> steps;
};

inline Observation observe(const exec::CompiledProgram& p, const std::vector<GeneratedInput>& inputs,
                           std::uint64_t budget, std::size_t workers) {
  std::vector<invariants::SampleSummary> parts(inputs.size());
  Observation out;
  out.statuses.resize(inputs.size());
  out.steps.resize(inputs.size());
  parallel_for(inputs.size(), workers, [&](std::size_t i) {
    invariants::SummarySink sink;
    const auto r = p.run(inputs[i].input, budget, &sink);
    parts[i] = std::move(sink.summary);
    out.statuses[i] = r.status;
    out.steps[i] = r.steps;
  });
  for (const auto& s : parts) out.summary.merge(s);
  return out;
}

/// Outcome of checking one invariant against a program's samples.
struct InvariantCheck {
  Invariant inv;
  bool holds = false;
  /// The point was never reached, or a variable of the invariant is not
  /// always present there.
  bool vacuous = false;
};

inline InvariantCheck check_one(const Invariant& inv, const invariants::SampleSummary& s) {
  InvariantCheck c{inv, false, false};
  const auto* st = s.at(inv.point);
  if (!st || st->samples == 0) {
    c.vacuous = true;
    return c;
  }
  for (const auto& v : inv.variables())
    if (!st->always_present(st->index_of(v))) c.vacuous = true;
  c.holds = !c.vacuous && invariants::holds(inv, *st);
  return c;
}

/// The part of the correct specification a faster program must keep: every
/// functional invariant, and constant upper bounds on counters.
inline bool preserved(const Invariant& inv) {
  if (!inv.mentions_counter()) return true;
  return !invariants::is_binary(inv.form) && inv.form == invariants::Form::LeConst;
}

/// Inputs split by how the original program behaves on them.
struct Regions {
  std::vector<GeneratedInput> passing;  // fast on the original
  std::vector<GeneratedInput> failing;  // slow on the original
};

struct ValidityCheck {
  /// One entry per violated invariant; passes when none holds.
  std::vector<InvariantCheck> violated;
  /// One entry per preserved correct invariant; passes when all hold.
  std::vector<InvariantCheck> correct;
  /// Passing-region inputs on which the patched program did not terminate
  /// normally, as "origin: status".
  std::vector<std::string> abnormal;

  bool violated_ok() const {
    for (const auto& c : violated)
      if (c.holds) return false;
    return true;
  }
  bool correct_ok() const {
    if (!abnormal.empty()) return false;
    for (const auto& c : correct)
      if (!c.holds) return false;
    return true;
  }
  bool valid() const { return violated_ok() && correct_ok(); }
};

/// The violated check: each violated invariant must fail on some run of the
/// patched program over the failing region. An unreached point or a missing
/// variable counts as a failure and is flagged as vacuous.
inline std::vector<InvariantCheck> check_violated(const exec::CompiledProgram& pt, const invariants::Spec& spec,
                                                  const std::vector<GeneratedInput>& failing,
                                                  std::uint64_t budget, std::size_t workers) {
  const auto obs = observe(pt, failing, budget, workers);
  std::vector<InvariantCheck> out;
  for (const auto& inv : spec.violated.members()) out.push_back(check_one(inv, obs.summary));
  return out;
}

/// The correct check: every preserved invariant must hold on all runs over
/// the passing region. Unreached points hold vacuously; a variable missing
/// at a reached point falsifies.
inline std::vector<InvariantCheck> check_correct(const exec::CompiledProgram& pt, const invariants::Spec& spec,
                                                 const std::vector<GeneratedInput>& passing, std::uint64_t budget,
                                                 std::size_t workers, std::vector<std::string>* abnormal = nullptr) {
  const auto obs = observe(pt, passing, budget, workers);
  if (abnormal) {
    for (std::size_t i = 0; i < passing.size(); ++i) {
      const auto st = obs.statuses[i];
      if (st != exec::Status::Completed && st != exec::Status::InputExhausted)
        abnormal->push_back(passing[i].origin + ": " + exec::to_string(st));
    }
  }
  std::vector<InvariantCheck> out;
  for (const auto& inv : spec.correct.members()) {
    if (!preserved(inv)) continue;
    auto c = check_one(inv, obs.summary);
    const auto* st = obs.summary.at(inv.point);
    if (!st || st->samples == 0) c.holds = true;  // vacuous but not a counterexample
    out.push_back(c);
  }
  return out;
}

/// Both halves of the validity condition on the instrumented patched program.
inline ValidityCheck check_validity(const lang::Program& pt_instrumented, const invariants::Spec& spec,
                                    const Regions& regions, std::uint64_t budget, std::size_t workers = 1) {
  const exec::CompiledProgram cp(pt_instrumented);
  ValidityCheck out;
  out.violated = check_violated(cp, spec, regions.failing, budget, workers);
  out.correct = check_correct(cp, spec, regions.passing, budget, workers, &out.abnormal);
  return out;
}

}  // namespace perfrepair::validate
