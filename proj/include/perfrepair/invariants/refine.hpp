#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "perfrepair/exec/interpreter.hpp"
#include "perfrepair/invariants/generator.hpp"
#include "perfrepair/invariants/infer.hpp"
#include "perfrepair/parallel.hpp"

namespace perfrepair::invariants {

/// Decides whether a generated run contributes samples.
using RunFilter = std::function<bool(const exec::RunResult&, const GeneratedInput&)>;

struct SamplingOptions {
  std::uint64_t step_budget = 100'000'000;
  std::size_t workers = 1;
  RunFilter accept;  // empty: accept every normally-terminated run
};

struct SamplingResult {
  SampleSummary summary;
  std::size_t runs = 0;      // inputs executed
  std::size_t accepted = 0;  // runs whose samples were kept
};

/// Runs `program` on each input and folds the samples of accepted runs.
/// Runs that crash or exhaust the step budget never contribute samples.
/// Per-run summaries are merged in input order, so the result does not
/// depend on `workers`.
inline SamplingResult sample(const exec::CompiledProgram& program,
                             const std::vector<GeneratedInput>& inputs,
                             const SamplingOptions& opt) {
  std::vector<SampleSummary> per(inputs.size());
  std::vector<std::uint8_t> keep(inputs.size(), 0);
  parallel_for(inputs.size(), opt.workers, [&](std::size_t i) {
    SummarySink sink;
    const auto r = program.run(inputs[i].input, opt.step_budget, &sink);
    const bool normal =
        r.status == exec::Status::Completed || r.status == exec::Status::InputExhausted;
    if (normal && (!opt.accept || opt.accept(r, inputs[i]))) {
      per[i] = std::move(sink.summary);
      keep[i] = 1;
    }
  });
  SamplingResult out;
  out.runs = inputs.size();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!keep[i]) continue;
    out.summary.merge(per[i]);
    ++out.accepted;
  }
  return out;
}

/// Applies counterexamples from `generated` to `s`: a falsified constant
/// bound is relaxed to the new extreme, any other falsified invariant is
/// dropped. Everything returned holds on the original and generated samples.
inline InvariantSet apply_counterexamples(const InvariantSet& s, const SampleSummary& generated) {
  InvariantSet out(Provenance::Refined);
  for (const auto& p : s.points()) out.add_point(p);
  for (const auto& inv : s.members()) {
    const PointStats* st = generated.at(inv.point);
    if (!st || st->samples == 0) {
      out.insert(inv);
      continue;
    }
    Invariant next = inv;
    next.support += st->samples;
    if (holds(inv, *st)) {
      out.insert(std::move(next));
      continue;
    }
    const int v = st->index_of(inv.lhs);
    if (!st->always_present(v)) continue;
    const auto vi = static_cast<std::size_t>(v);
    if (inv.form == Form::LeConst) {
      next.constant = std::max(inv.constant, st->max[vi]);
      out.insert(std::move(next));
    } else if (inv.form == Form::GeConst) {
      next.constant = std::min(inv.constant, st->min[vi]);
      out.insert(std::move(next));
    }
  }
  return out;
}

/// Falsification-based refinement: runs the instrumented program on up to
/// `budget` generated inputs and weakens or drops whatever they contradict.
inline InvariantSet refine(const lang::Program& instrumented, const InvariantSet& s,
                           const InputGenerator& gen, std::size_t budget,
                           const SamplingOptions& opt = {}) {
  if (budget == 0) return s;
  exec::CompiledProgram cp(instrumented);
  const auto inputs = gen.generate(budget);
  const auto result = sample(cp, inputs, opt);
  return apply_counterexamples(s, result.summary);
}

}  // namespace perfrepair::invariants
