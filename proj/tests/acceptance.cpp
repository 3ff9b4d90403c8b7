// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "perfrepair/perfrepair.hpp"
#include "support/oracles.hpp"
#include "support/random_program.hpp"

using namespace perfrepair;
namespace fs = std::filesystem;
using harness::json;

namespace {

fs::path corpus(const std::string& name) { return fs::path(PERFREPAIR_CORPUS_DIR) / name; }

const std::vector<std::string> kCorpus = {"strsearch", "toy-count", "accum-loop"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Shared between criteria 1 and 8 so the long repair runs once per setting.
std::optional<harness::CommandResult> g_repair_config_workers;

harness::CommandResult repair_strsearch(std::optional<std::size_t> workers) {
  auto cfg = harness::load_config(corpus("strsearch") / "config.json");
  if (workers) {
    cfg.workers = *workers;
    cfg.search.workers = *workers;
  }
  return harness::cmd_repair(cfg);
}

// ---- criterion 1 -----------------------------------------------------------

std::vector<lang::Stmt>* find_block_with_label(std::vector<lang::Stmt>& stmts, const std::string& label,
                                               std::size_t& index) {
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    auto& s = stmts[i];
    if (s.label == label) {
      index = i;
      return &stmts;
    }
    for (auto* child : {&s.init, &s.update, &s.body, &s.orelse})
      if (auto* r = find_block_with_label(*child, label, index)) return r;
  }
  return nullptr;
}

bool is_zero_init_of_i(const lang::Stmt& s) {
  return s.kind == lang::StmtKind::Assign && s.target == "i" && !s.index && s.value &&
         lang::to_string(*s.value) == "0";
}

// Strips the effect of "initialize i once before the search loop": the
// single top-level `i := 0` ahead of L2 is removed and L6 must have no init.
// Returns nullopt when the program does not have that shape.
std::optional<lang::Program> strip_hoisted_init(lang::Program p) {
  std::size_t l2 = 0;
  if (find_block_with_label(p.body, "L2", l2) != &p.body) return std::nullopt;
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < l2; ++i)
    if (is_zero_init_of_i(p.body[i])) hits.push_back(i);
  if (hits.size() != 1) return std::nullopt;
  p.body.erase(p.body.begin() + static_cast<std::ptrdiff_t>(hits.front()));
  std::size_t l6 = 0;
  auto* block = find_block_with_label(p.body, "L6", l6);
  if (!block || (*block)[l6].kind != lang::StmtKind::For || !(*block)[l6].init.empty()) return std::nullopt;
  lang::renumber(p);
  return p;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  g_repair_config_workers = repair_strsearch(std::nullopt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& r = *g_repair_config_workers;
  std::ostringstream d;
  d << "exit " << r.exit_code << ", " << static_cast<long>(secs) << " s";
  if (r.exit_code != 0 || secs >= 300) return {false, d.str()};

  const auto report = json::parse(r.output);
  const auto repaired = lang::parse_checked(report["patched_program"].get<std::string>());
  const auto original = harness::load_program(corpus("strsearch") / "strsearch.prog");
  const auto developer = harness::apply(harness::load_patch(corpus("strsearch") / "developer.patch.json"), original);
  d << ", patch";
  for (const auto& m : report["patch"]["mutations"]) d << " [" << m.dump() << "]";
  const auto a = strip_hoisted_init(repaired);
  const auto b = strip_hoisted_init(developer);
  if (!b) return {false, d.str() + ", developer patch lacks the hoisted init"};
  if (strip_hoisted_init(original)) return {false, d.str() + ", checker accepts the buggy program"};
  if (!a) return {false, d.str() + ", i's init is not hoisted out of L2"};
  if (!(*a == *b)) {
    d << ", differs from developer patch:\n"
      << repair::unified_diff(lang::pretty_print(developer), lang::pretty_print(repaired), "developer", "repaired");
    return {false, d.str()};
  }
  return {true, d.str() + ", matches developer patch structurally"};
}

// ---- criterion 2 -----------------------------------------------------------

std::map<std::string, invariants::Value> infer_bounds(const lang::Program& p, const harness::TestSuite& s) {
  const auto r = harness::cmd_infer(p, s, 1);
  return validate::counter_bounds(invariants::read_report(r.output));
}

Outcome criterion2() {
  const auto cfg = harness::load_config(corpus("strsearch") / "config.json");
  const auto suite = harness::load_suite(cfg.suite);
  const auto buggy = harness::load_program(cfg.program);
  const auto patched = harness::apply(harness::load_patch(corpus("strsearch") / "developer.patch.json"), buggy);
  const auto b = infer_bounds(buggy, suite);
  const auto p = infer_bounds(patched, suite);
  auto get = [](const auto& m, const char* k) -> std::optional<invariants::Value> {
    auto it = m.find(k);
    return it == m.end() ? std::nullopt : std::optional(it->second);
  };
  const auto b9 = get(b, "cnt_9"), p9 = get(p, "cnt_9"), b6 = get(b, "cnt_6"), p6 = get(p, "cnt_6");
  auto show = [](const std::optional<invariants::Value>& v) { return v ? std::to_string(*v) : "none"; };
  std::ostringstream d;
  d << "cnt_9 buggy " << show(b9) << " patched " << show(p9) << ", cnt_6 buggy " << show(b6) << " patched "
    << show(p6);
  if (!b9 || !p9 || !b6 || !p6 || *b6 == 0) return {false, d.str()};
  const double ratio = static_cast<double>(*p6) / static_cast<double>(*b6);
  d << ", ratio " << ratio;
  return {*p9 == 0 && *b9 > 0 && ratio <= 0.6, d.str()};
}

// ---- criterion 3 -----------------------------------------------------------

Outcome criterion3() {
  int rejected = 0;
  std::ostringstream d;
  for (const auto& name : kCorpus) {
    const auto cfg = harness::load_config(corpus(name) / "config.json");
    const auto r = harness::cmd_validate(cfg, harness::load_patch(corpus(name) / "overfit.patch.json"));
    const auto v = json::parse(r.output)["verdict"];
    bool tests_pass = true;
    for (const auto& t : v["tests"]) tests_pass = tests_pass && t["passed"].get<bool>();
    const auto stage = v["stage"].get<std::string>();
    const bool ok = tests_pass && (stage == "FailedSemaEq" || stage == "FailedCorrectCheck") && r.exit_code == 1;
    rejected += ok;
    d << (d.tellp() ? ", " : "") << name << " " << stage << (tests_pass ? "" : " (tests failed)");
  }
  d << "; " << rejected << "/" << kCorpus.size();
  return {rejected == static_cast<int>(kCorpus.size()), d.str()};
}

// ---- criterion 4 -----------------------------------------------------------

Outcome criterion4() {
  testsupport::RandomProgram gen(2024);
  std::size_t discrepancies = 0, points = 0;
  for (int k = 0; k < 200; ++k) {
    const auto p = lang::parse_checked(gen.generate());
    std::vector<exec::Trace> traces;
    for (int a = -5; a <= 5; ++a) {
      exec::TestInput in;
      in.scalars["a"] = a;
      traces.push_back(exec::run(p, in, 100'000).trace);
    }
    const auto s = invariants::infer(traces);
    std::map<std::string, std::vector<testsupport::Sample>> samples;
    for (const auto& t : traces)
      for (const auto& tp : t.points) {
        testsupport::Sample smp;
        for (const auto& [n, v] : tp.values) smp[n] = v;
        samples[tp.point].push_back(smp);
      }
    for (const auto& [pt, xs] : samples) {
      ++points;
      std::set<testsupport::Key> got;
      for (const auto& inv : s.at(pt)) got.insert(testsupport::key_of(inv));
      if (got != testsupport::enumerate_grammar(xs, 5)) ++discrepancies;
    }
  }
  return {discrepancies == 0,
          "200 programs, " + std::to_string(points) + " points, " + std::to_string(discrepancies) + " discrepancies"};
}

// ---- criterion 5 -----------------------------------------------------------

Outcome criterion5() {
  std::mt19937_64 rng(99);
  const std::vector<std::string> vars = {"x", "y", "z"};
  std::size_t discrepancies = 0, implied = 0;
  for (int round = 0; round < 1000; ++round) {
    std::vector<invariants::Invariant> hyp;
    for (auto n = rng() % 4; n > 0; --n) hyp.push_back(testsupport::random_invariant(rng, vars));
    const auto concl = testsupport::random_invariant(rng, vars);
    const bool got = invariants::implies(hyp, concl);
    implied += got;
    if (got != testsupport::implies_by_enumeration(hyp, concl, 30)) ++discrepancies;
  }
  return {discrepancies == 0, "1000 pairs (" + std::to_string(implied) + " implied), " +
                                  std::to_string(discrepancies) + " discrepancies"};
}

// ---- criterion 6 -----------------------------------------------------------

invariants::InvariantSet exit_bounds(const std::map<std::string, invariants::Value>& b) {
  invariants::InvariantSet s;
  s.add_point(std::string(exec::kExitPoint));
  for (const auto& [n, c] : b) s.insert(invariants::le_const(std::string(exec::kExitPoint), n, c));
  return s;
}

Outcome criterion6() {
  std::mt19937_64 rng(6);
  const std::vector<std::string> names = {"cnt_2", "cnt_6", "cnt_9"};
  std::size_t reflexive = 0, both = 0, strict = 0;
  for (int round = 0; round < 5000; ++round) {
    std::map<std::string, invariants::Value> a, b;
    for (const auto& n : names) {
      const auto x = static_cast<invariants::Value>(rng() % 1002);
      a[n] = x;
      b[n] = rng() % 3 ? x : static_cast<invariants::Value>(rng() % 1002);
    }
    const auto sa = exit_bounds(a), sb = exit_bounds(b);
    reflexive += validate::pred_sm(sa, sa);
    const bool ab = validate::pred_sm(sa, sb), ba = validate::pred_sm(sb, sa);
    both += ab && ba;
    strict += ab || ba;
  }
  const bool fwd = validate::pred_sm(exit_bounds({{"cnt_6", 501}}), exit_bounds({{"cnt_6", 1001}}));
  const bool rev = validate::pred_sm(exit_bounds({{"cnt_6", 1001}}), exit_bounds({{"cnt_6", 501}}));
  std::ostringstream d;
  d << "5000 pairs: pred_sm(a,a) true " << reflexive << "x, both directions " << both << "x, one direction " << strict
    << "x; ({cnt<=501},{cnt<=1001}) " << fwd << ", reversed " << rev;
  return {reflexive == 0 && both == 0 && fwd && !rev, d.str()};
}

// ---- criterion 7 -----------------------------------------------------------

// Order-independent view of the functional projection of a trace: names
// sorted, counters dropped. Large traces are folded into a 128-bit digest
// instead of being stored.
class ProjectionSink final : public exec::TraceSink {
 public:
  explicit ProjectionSink(bool keep) : keep_(keep) {}

  void on_point(const exec::CompiledProgram& program, int point, std::span<const exec::Value> values,
                std::span<const std::uint8_t> present) override {
    if (order_.empty()) {
      const auto& names = program.slot_names();
      for (std::size_t i = 0; i < names.size(); ++i)
        if (!lang::is_counter_name(names[i])) order_.push_back(i);
      std::sort(order_.begin(), order_.end(), [&](auto x, auto y) { return names[x] < names[y]; });
    }
    const auto& names = program.slot_names();
    exec::TracePoint tp;
    tp.point = program.point_names()[static_cast<std::size_t>(point)];
    mix(tp.point);
    for (auto i : order_) {
      if (!present[i]) continue;
      mix(names[i]);
      mix(std::to_string(values[i]));
      if (keep_) tp.values.emplace_back(names[i], values[i]);
    }
    mix("\n");
    ++count;
    if (keep_ && trace.points.size() < kKeepLimit) trace.points.push_back(std::move(tp));
  }

  static constexpr std::size_t kKeepLimit = 200'000;
  std::uint64_t fnv = 1469598103934665603ull;
  std::uint64_t poly = 0;
  std::uint64_t count = 0;
  exec::Trace trace;

 private:
  void mix(const std::string& s) {
    for (unsigned char c : s) {
      fnv = (fnv ^ c) * 1099511628211ull;
      poly = poly * 0x9E3779B97F4A7C15ull + c + 1;
    }
    fnv = (fnv ^ 0xFF) * 1099511628211ull;
    poly = poly * 0x9E3779B97F4A7C15ull + 0x100;
  }
  bool keep_;
  std::vector<std::size_t> order_;
};

Outcome criterion7() {
  std::size_t runs = 0, diffs = 0;
  std::ostringstream d;
  for (const auto& name : kCorpus) {
    const auto cfg = harness::load_config(corpus(name) / "config.json");
    const auto suite = harness::load_suite(cfg.suite);
    const auto original = harness::load_program(cfg.program);
    std::vector<std::pair<std::string, lang::Program>> versions = {{"original", original}};
    for (const auto* patch : {"developer", "overfit"})
      versions.emplace_back(patch,
                            harness::apply(harness::load_patch(corpus(name) / (std::string(patch) + ".patch.json")),
                                           original));
    for (const auto& [vname, p] : versions) {
      const exec::CompiledProgram plain(p), inst(exec::instrument(p));
      for (const auto& t : suite.cases) {
        ProjectionSink a(true), b(true);
        const auto ra = plain.run(t.input, suite.budget, &a);
        const auto rb = inst.run(t.input, suite.budget, &b);
        ++runs;
        const bool same = ra.status == rb.status && ra.outputs == rb.outputs && ra.steps == rb.steps &&
                          a.count == b.count && a.fnv == b.fnv && a.poly == b.poly && a.trace == b.trace;
        if (!same) {
          ++diffs;
          d << " " << name << "/" << vname << "/" << t.id;
        }
      }
    }
  }
  return {diffs == 0, std::to_string(runs) + " runs, " + std::to_string(diffs) + " diffs" + d.str()};
}

// ---- criterion 8 -----------------------------------------------------------

Outcome criterion8() {
  if (!g_repair_config_workers) g_repair_config_workers = repair_strsearch(std::nullopt);
  const auto four = repair_strsearch(4);
  const auto one = repair_strsearch(1);
  const auto& first = *g_repair_config_workers;
  const bool same4 = first.output == four.output && first.exit_code == four.exit_code;
  const bool same1 = first.output == one.output && first.exit_code == one.exit_code;
  std::ostringstream d;
  d << "report " << first.output.size() << " bytes; rerun at 4 workers " << (same4 ? "identical" : "differs")
    << ", at 1 worker " << (same1 ? "identical" : "differs");
  return {same4 && same1, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 strsearch repair", criterion1},        {"2 efficiency bounds", criterion2},
      {"3 overfit rejection", criterion3},       {"4 inference oracle", criterion4},
      {"5 implication oracle", criterion5},      {"6 pred_sm properties", criterion6},
      {"7 non-interference", criterion7},        {"8 repair determinism", criterion8},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << " ("
              << std::fixed << std::setprecision(1) << secs << " s)" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
