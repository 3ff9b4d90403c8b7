#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "perfrepair/exec/classify.hpp"
#include "perfrepair/exec/instrument.hpp"
#include "perfrepair/exec/interpreter.hpp"
#include "perfrepair/lang/check.hpp"
#include "perfrepair/lang/printer.hpp"
#include "support/random_program.hpp"
#include "support/reference_eval.hpp"

using namespace perfrepair;
using exec::Status;
using exec::TestInput;

namespace {

const char* kToy = "program toy(n) returns (x) { x := 0; while (x < n) { x := x + 1 } }";

TestInput scalars(std::map<std::string, exec::Value> m) {
  TestInput in;
  in.scalars = std::move(m);
  return in;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Head/tail query: `t` sits at index `at` of a source grown from the stream.
TestInput strsearch_input(int at) {
  TestInput in;
  const int len = at + 2;
  in.scalars = {{"sourceLen", 1}, {"targetLen", 1}, {"cap", len}};
  in.arrays["source"] = {at == 0 ? 116 : 120};
  in.arrays["target"] = {116};
  for (int k = 1; k < len; ++k) in.stream.push_back(k == at ? 116 : 120);
  return in;
}

}  // namespace

TEST(Run, ToyStepCount) {
  auto r = exec::run(lang::parse_checked(kToy), scalars({{"n", 3}}), 1'000'000);
  EXPECT_EQ(r.status, Status::Completed);
  EXPECT_EQ(r.outputs.at("x"), 3);
  EXPECT_EQ(r.steps, 8u);  // 1 init + 4 guards + 3 body assignments
}

TEST(Run, BudgetExhausted) {
  auto r = exec::run(lang::parse_checked(kToy), scalars({{"n", 3}}), 5);
  EXPECT_EQ(r.status, Status::BudgetExhausted);
  EXPECT_EQ(r.steps, 5u);
  // exactly enough budget
  EXPECT_EQ(exec::run(lang::parse_checked(kToy), scalars({{"n", 3}}), 8).status, Status::Completed);
}

TEST(Run, RuntimeErrors) {
  auto err = [](const char* src, TestInput in) {
    auto r = exec::run(lang::parse_checked(src), in, 1000);
    EXPECT_EQ(r.status, Status::RuntimeError) << src;
    EXPECT_FALSE(r.error.empty());
  };
  err("program f(n) returns (x) { x := 10 / n; }", scalars({{"n", 0}}));
  err("program f(n, a[n]) returns (x) { x := a[n]; }", scalars({{"n", 2}}));
  err("program f(n) returns (x) { x := n * n; }", scalars({{"n", 4'000'000'000LL}}));
  err("program f(n) returns (x) { if (n > 0) { y := 1; } x := y; }", scalars({{"n", 0}}));
  err("program f(n) returns (x) { x := n; }", {});
  TestInput longer = scalars({{"n", 1}});
  longer.arrays["a"] = {1, 2};
  err("program f(n, a[n]) returns (x) { x := a[0]; }", longer);
}

TEST(Run, ShortArraysAreZeroPadded) {
  TestInput in = scalars({{"n", 3}});
  in.arrays["a"] = {7};
  auto r = exec::run(lang::parse_checked("program f(n, a[n]) returns (x) { x := a[0] + a[2]; }"),
                     in, 100);
  EXPECT_EQ(r.status, Status::Completed);
  EXPECT_EQ(r.outputs.at("x"), 7);
}

TEST(Run, InputExhaustionEndsRunNormally) {
  auto p = lang::parse_checked(
      "program f() returns (s) { s := 0; while (1 == 1) { v := input(); s := s + v; } }");
  TestInput in;
  in.stream = {1, 2, 3};
  auto r = exec::run(p, in, 1000);
  EXPECT_EQ(r.status, Status::InputExhausted);
  EXPECT_EQ(r.outputs.at("s"), 6);
  ASSERT_FALSE(r.trace.points.empty());
  EXPECT_EQ(r.trace.points.back().point, "exit");
}

TEST(Run, TracePoints) {
  auto r = exec::run(lang::parse_checked(kToy), scalars({{"n", 3}}), 100);
  ASSERT_EQ(r.trace.points.size(), 3u);
  EXPECT_EQ(r.trace.points[0].point, "entry");
  EXPECT_EQ(r.trace.points[1].point, "after:L1");
  EXPECT_EQ(r.trace.points[2].point, "exit");
  EXPECT_EQ(exec::dump(r.trace), "entry\tn=3\nafter:L1\tn=3\tx=3\nexit\tn=3\tx=3\n");
}

TEST(Run, StrsearchHeadFasterThanTail) {
  auto p = exec::instrument(
      lang::parse_checked(slurp(std::string(PERFREPAIR_CORPUS_DIR) + "/strsearch/strsearch.prog")));
  auto head = exec::run(p, strsearch_input(0), 100'000'000);
  auto tail = exec::run(p, strsearch_input(1000), 100'000'000);
  EXPECT_EQ(head.outputs.at("found"), 0);
  EXPECT_EQ(tail.outputs.at("found"), 1000);
  EXPECT_GT(tail.steps, 1000 * head.steps);
}

TEST(Instrument, ToyCounters) {
  auto p = exec::instrument(lang::parse_checked(kToy));
  EXPECT_EQ(lang::pretty_print(p),
            "program toy(n) returns (x) {\n"
            "  cnt_1 := 0;\n"
            "  x := 0;\n"
            "  L1: while (x < n) {\n"
            "    cnt_1 := cnt_1 + 1;\n"
            "    x := x + 1;\n"
            "  }\n"
            "}\n");
  EXPECT_TRUE(lang::check(p).empty());
}

TEST(Instrument, StrsearchHasFourCounters) {
  auto p = lang::parse_checked(slurp(std::string(PERFREPAIR_CORPUS_DIR) + "/strsearch/strsearch.prog"));
  auto cs = exec::counters(p);
  std::vector<std::string> names;
  for (const auto& [_, c] : cs) names.push_back(c);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"cnt_15", "cnt_2", "cnt_6", "cnt_9"}));
  EXPECT_TRUE(lang::check(exec::instrument(p)).empty());
}

TEST(Instrument, LoopFreeIsIdentity) {
  auto p = lang::parse_checked("program f(n) returns (x) { x := n + 1; }");
  EXPECT_EQ(exec::instrument(p), p);
}

TEST(Instrument, CounterStatementsAreNotSteps) {
  auto p = lang::parse_checked(kToy);
  auto a = exec::run(p, scalars({{"n", 5}}), 1000);
  auto b = exec::run(exec::instrument(p), scalars({{"n", 5}}), 1000);
  EXPECT_EQ(a.steps, b.steps);
}

TEST(Classify, Examples) {
  exec::RunResult r;
  r.outputs = {{"x", 3}};
  r.steps = 8;
  EXPECT_EQ(exec::classify(r, {{"x", 3}}, 100).cls, exec::RunClass::Fast);
  r.steps = 100'000;
  auto slow = exec::classify(r, {{"x", 3}}, 1000);
  EXPECT_EQ(slow.cls, exec::RunClass::Slow);
  EXPECT_FALSE(slow.functional_failure);
  r.steps = 8;
  auto wrong = exec::classify(r, {{"x", 4}}, 100);
  EXPECT_EQ(wrong.cls, exec::RunClass::Slow);
  EXPECT_TRUE(wrong.functional_failure);
  r.status = Status::RuntimeError;
  EXPECT_TRUE(exec::classify(r, {{"x", 3}}, 100).functional_failure);
  r.status = Status::BudgetExhausted;
  EXPECT_FALSE(exec::classify(r, {{"x", 3}}, 100).functional_failure);
}

TEST(Classify, BuggyStrsearchTailIsSlowAgainstHeadThreshold) {
  auto p = lang::parse_checked(slurp(std::string(PERFREPAIR_CORPUS_DIR) + "/strsearch/strsearch.prog"));
  auto head = exec::run(p, strsearch_input(0), 1'000'000);
  const auto threshold = 3 * head.steps;
  auto tail = exec::run(p, strsearch_input(300), 10'000'000);
  EXPECT_EQ(exec::classify(head, {{"found", 0}}, threshold).cls, exec::RunClass::Fast);
  EXPECT_EQ(exec::classify(tail, {{"found", 300}}, threshold).cls, exec::RunClass::Slow);
}

// Properties over random programs: non-interference, determinism, counter
// monotonicity, and exit counters equal to reference iteration counts.
TEST(Properties, RandomPrograms) {
  testsupport::RandomProgram gen(7);
  testsupport::ReferenceEval ref;
  for (int k = 0; k < 300; ++k) {
    const auto src = gen.generate();
    auto p = lang::parse_checked(src);
    auto q = exec::instrument(p);
    for (int a = -5; a <= 5; a += 2) {
      auto in = scalars({{"a", a}});
      auto plain = exec::run(p, in, 100'000);
      auto inst = exec::run(q, in, 100'000);
      ASSERT_EQ(plain.status, Status::Completed) << src;
      EXPECT_EQ(plain.outputs, inst.outputs) << src;
      EXPECT_EQ(plain.steps, inst.steps) << src;
      EXPECT_EQ(exec::functional_projection(inst.trace), plain.trace) << src;
      EXPECT_EQ(exec::run(q, in, 100'000).trace, inst.trace);

      std::map<std::string, exec::Value> last;
      for (const auto& tp : inst.trace.points)
        for (const auto& [n, v] : tp.values)
          if (lang::is_counter_name(n)) {
            EXPECT_GE(v, last[n]) << src;
            last[n] = v;
          }

      const auto want = ref.run(p, {{"a", a}});
      EXPECT_EQ(plain.outputs.at("b"), want.vars.at("b")) << src;
      EXPECT_EQ(plain.outputs.at("c"), want.vars.at("c")) << src;
      const auto& exit = inst.trace.points.back().values;
      for (const auto& [label, count] : want.iterations) {
        const auto name = lang::counter_for_label(label);
        auto it = std::find_if(exit.begin(), exit.end(), [&](auto& kv) { return kv.first == name; });
        ASSERT_NE(it, exit.end()) << src;
        EXPECT_EQ(it->second, count) << src;
      }
    }
  }
}
