#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "perfrepair/exec/classify.hpp"
#include "perfrepair/exec/interpreter.hpp"

namespace perfrepair::exec {

/// One suite entry: an input, the outputs it must produce, and the step
/// count above which the run counts as slow.
struct TestCase {
  std::string id;
  TestInput input;
  std::map<std::string, Value> expected;
  std::uint64_t threshold = 0;
};

struct TestOutcome {
  RunResult run;
  Classification classification;
  bool passed() const { return classification.cls == RunClass::Fast; }
};

/// Runs `t` with a budget of threshold + 1, which is enough to decide the
/// class without finishing a slow run.
inline TestOutcome run_test(const CompiledProgram& p, const TestCase& t, TraceSink* sink = nullptr) {
  TestOutcome o;
  o.run = p.run(t.input, t.threshold + 1, sink);
  o.classification = classify(o.run, t.expected, t.threshold);
  return o;
}

}  // namespace perfrepair::exec
