#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "perfrepair/perfrepair.hpp"

using namespace perfrepair;
using harness::json;

namespace fs = std::filesystem;

namespace {

fs::path corpus(const std::string& name) { return fs::path(PERFREPAIR_CORPUS_DIR) / name; }

// Scratch directory per test, removed on destruction.
struct Scratch {
  fs::path dir;
  Scratch() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / ("perfrepair-" + std::string(info->test_suite_name()) + "-" + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
};

std::string path_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const harness::SchemaError& e) {
    return e.path();
  }
  return "<no error>";
}

json toy_suite() {
  return json::parse(R"({
    "program": "toy.prog",
    "cases": [
      {"id": "a", "params": {"n": 2}, "expected": {"x": 2}, "threshold": 100},
      {"id": "b", "params": {"n": 3}, "expected": {"x": 3}, "threshold": 100}
    ]})");
}

int cli(const std::string& args) {
  const auto cmd = std::string(PERFREPAIR_CLI) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

harness::Config corpus_config(const std::string& name) { return harness::load_config(corpus(name) / "config.json"); }

}  // namespace

TEST(LoadSuite, StrsearchCorpus) {
  const auto s = harness::load_suite(corpus("strsearch") / "suite.json");
  ASSERT_EQ(s.cases.size(), 12u);
  EXPECT_EQ(s.program, corpus("strsearch") / "strsearch.prog");
  for (const auto& t : s.cases) EXPECT_GE(t.threshold, 1u);
  EXPECT_EQ(s.cases.front().id, "fast-0");
  EXPECT_EQ(s.cases.back().expected.at("found"), 10000);
}

TEST(LoadSuite, MissingExpectedNamesTheCase) {
  auto doc = toy_suite();
  doc["cases"][1].erase("expected");
  EXPECT_EQ(path_of([&] { harness::parse_suite(doc); }), "cases[1].expected");
}

TEST(LoadSuite, EmptyCases) {
  auto doc = toy_suite();
  doc["cases"] = json::array();
  EXPECT_EQ(path_of([&] { harness::parse_suite(doc); }), "cases");
}

TEST(LoadSuite, DuplicateId) {
  auto doc = toy_suite();
  doc["cases"][1]["id"] = "a";
  EXPECT_THROW(harness::parse_suite(doc), harness::DuplicateTestId);
}

TEST(LoadSuite, FieldErrors) {
  auto doc = toy_suite();
  doc["cases"][0]["threshold"] = 0;
  EXPECT_EQ(path_of([&] { harness::parse_suite(doc); }), "cases[0].threshold");
  doc = toy_suite();
  doc["cases"][0]["params"]["n"] = "two";
  EXPECT_EQ(path_of([&] { harness::parse_suite(doc); }), "cases[0].params.n");
  doc = toy_suite();
  doc["generator"] = {{"kind", "random"}};
  EXPECT_EQ(path_of([&] { harness::parse_suite(doc); }), "generator.kind");
  doc = toy_suite();
  doc["generator"] = {{"kind", "domain"}, {"scalars", {{"n", {5, 1}}}}};
  EXPECT_EQ(path_of([&] { harness::parse_suite(doc); }), "generator.scalars.n");
  EXPECT_THROW(harness::parse_json("{", "suite"), harness::SchemaError);
  EXPECT_THROW(harness::load_suite("/nonexistent/suite.json"), harness::FileError);
}

TEST(LoadSuite, CheckedAgainstProgram) {
  const auto p = lang::parse_checked("program toy(n) returns (x) { x := n }");
  auto doc = toy_suite();
  EXPECT_NO_THROW(harness::check_suite_against(harness::parse_suite(doc), p));
  doc["cases"][1]["params"].erase("n");
  EXPECT_EQ(path_of([&] { harness::check_suite_against(harness::parse_suite(doc), p); }), "cases[1].params.n");
  doc = toy_suite();
  doc["cases"][0]["expected"] = {{"y", 1}};
  EXPECT_EQ(path_of([&] { harness::check_suite_against(harness::parse_suite(doc), p); }), "cases[0].expected.x");
}

TEST(Config, ResolvesPathsAndReadsSearch) {
  const auto c = corpus_config("strsearch");
  EXPECT_EQ(c.program, corpus("strsearch") / "strsearch.prog");
  EXPECT_EQ(c.suite, corpus("strsearch") / "suite.json");
  EXPECT_EQ(c.search.seed, 1u);
  EXPECT_EQ(c.search.population, 40u);
  EXPECT_LE(c.search.generations, 50u);
  EXPECT_EQ(c.search.workers, c.workers);
}

TEST(Config, Errors) {
  EXPECT_EQ(path_of([] { harness::parse_config(json::parse(R"({"suite": "s"})")); }), "program");
  EXPECT_EQ(path_of([] {
              harness::parse_config(json::parse(R"({"program": "p", "suite": "s", "search": {"mutation_rate": 2}})"));
            }),
            "search.mutation_rate");
  EXPECT_EQ(path_of([] { harness::parse_config(json::parse(R"({"program": "p", "suite": "s", "workers": 0})")); }),
            "workers");
}

TEST(Patch, MutationsRoundTrip) {
  const auto doc = json::parse(R"({"mutations": [
      {"kind": "move", "stmt": 5, "other": 1, "position": "before"},
      {"kind": "swap", "stmt": 2, "other": 3},
      {"kind": "delete", "stmt": 4},
      {"kind": "insert", "stmt": 1, "other": 0, "position": "after"}]})");
  const auto p = harness::parse_patch(doc);
  ASSERT_EQ(p.mutations.size(), 4u);
  EXPECT_FALSE(p.program);
  json back = json::array();
  for (const auto& m : p.mutations) back.push_back(harness::mutation_to_json(m));
  EXPECT_EQ(back, doc["mutations"]);
}

TEST(Patch, Errors) {
  EXPECT_EQ(path_of([] { harness::parse_patch(json::parse(R"({"mutations": [{"kind": "grow", "stmt": 1}]})")); }),
            "mutations[0].kind");
  EXPECT_EQ(path_of([] {
              harness::parse_patch(json::parse(R"({"mutations": [{"kind": "move", "stmt": 1, "other": 2}]})"));
            }),
            "mutations[0].position");
  EXPECT_EQ(path_of([] {
              harness::parse_patch(json::parse(R"({"program": "program t() returns () { }", "program_file": "x"})"));
            }),
            "program");
  EXPECT_EQ(path_of([] { harness::parse_patch(json::parse("{}")); }), "mutations");
}

TEST(Patch, ApplyReportsTheFailingMutation) {
  const auto p = harness::load_program(corpus("toy-count") / "toy-count.prog");
  const auto bad = harness::parse_patch(json::parse(
      R"({"mutations": [{"kind": "delete", "stmt": 5}, {"kind": "delete", "stmt": 99}]})"));
  EXPECT_EQ(path_of([&] { harness::apply(bad, p); }), "mutations[1]");
  const auto replaced = harness::load_patch(corpus("toy-count") / "overfit.patch.json");
  ASSERT_TRUE(replaced.program);
  EXPECT_EQ(lang::pretty_print(harness::apply(replaced, p)), lang::pretty_print(*replaced.program));
}

TEST(CorpusFiles, EveryProgramShipsBothPatches) {
  for (const auto* name : {"strsearch", "toy-count", "accum-loop"}) {
    const auto cfg = corpus_config(name);
    const auto p = harness::load_program(cfg.program);
    const auto s = harness::load_suite(cfg.suite);
    EXPECT_NO_THROW(harness::check_suite_against(s, p)) << name;
    for (const auto* patch : {"developer.patch.json", "overfit.patch.json"}) {
      const auto pt = harness::apply(harness::load_patch(corpus(name) / patch), p);
      const exec::CompiledProgram cp(pt);
      for (const auto& t : s.cases) EXPECT_TRUE(exec::run_test(cp, t).passed()) << name << " " << patch << " " << t.id;
    }
  }
}

TEST(Commands, RepairToyCount) {
  const auto r = harness::cmd_repair(corpus_config("toy-count"));
  EXPECT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.output);
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "program", "analysis", "ranking", "search", "attempts", "result",
                                            "patch", "patched_program", "verdict"}));
  EXPECT_EQ(j["result"], "Valid");
  EXPECT_EQ(j["verdict"]["stage"], "Valid");
  EXPECT_FALSE(j["patch"]["diff"].get<std::string>().empty());
}

TEST(Commands, ZeroGenerationsFails) {
  auto cfg = corpus_config("toy-count");
  cfg.search.generations = 0;
  const auto r = harness::cmd_repair(cfg);
  EXPECT_EQ(r.exit_code, 1);
  const auto j = json::parse(r.output);
  EXPECT_EQ(j["result"], "Fail");
  EXPECT_EQ(j["attempts"][0]["outcome"], "Fail");
  EXPECT_TRUE(j["patch"].is_null());
}

TEST(Commands, RepairNeedsFastAndSlowCases) {
  auto cfg = corpus_config("toy-count");
  Scratch s;
  auto doc = json::parse(harness::read_file(cfg.suite));
  json fast = json::array();
  for (const auto& c : doc["cases"])
    if (c["id"].get<std::string>().starts_with("fast")) fast.push_back(c);
  doc["cases"] = fast;
  doc["program"] = cfg.program.string();
  cfg.suite = s.write("suite.json", doc.dump());
  EXPECT_THROW(harness::cmd_repair(cfg), harness::SuiteError);
}

TEST(Commands, ValidateCorpusPatches) {
  for (const auto* name : {"toy-count", "accum-loop"}) {
    const auto cfg = corpus_config(name);
    const auto dev = harness::cmd_validate(cfg, harness::load_patch(corpus(name) / "developer.patch.json"));
    EXPECT_EQ(dev.exit_code, 0) << name;
    const auto over = harness::cmd_validate(cfg, harness::load_patch(corpus(name) / "overfit.patch.json"));
    EXPECT_EQ(over.exit_code, 1) << name;
    EXPECT_NE(json::parse(over.output)["verdict"]["stage"], "Valid");
  }
}

TEST(Commands, FailedTestsReportHasNoComparison) {
  const auto cfg = corpus_config("toy-count");
  const auto patch = harness::parse_patch(json::parse(R"({"mutations": [{"kind": "delete", "stmt": 2}]})"));
  const auto r = harness::cmd_validate(cfg, patch);
  EXPECT_EQ(r.exit_code, 1);
  const auto v = json::parse(r.output)["verdict"];
  EXPECT_EQ(v["stage"], "FailedTests");
  EXPECT_FALSE(v.contains("comparison"));
  EXPECT_FALSE(v.contains("violated_check"));
}

TEST(Commands, InferToyCount) {
  const auto cfg = corpus_config("toy-count");
  const auto r = harness::cmd_infer(harness::load_program(cfg.program), harness::load_suite(cfg.suite), 1);
  EXPECT_EQ(r.exit_code, 0);
  const auto s = invariants::read_report(r.output);
  EXPECT_TRUE(s.contains(invariants::eq_var("exit", "n", "x")));
  EXPECT_TRUE(s.contains(invariants::eq_var("exit", "cnt_outer", "n")));
}

TEST(Commands, TraceToyHasEveryPointKind) {
  const auto p = lang::parse_checked(
      "program toy(n) returns (x) { x := 0; L1: while (x < n) { x := x + 1 } }");
  auto suite = harness::parse_suite(json::parse(R"({"program": "toy.prog", "cases": [
      {"id": "n3", "params": {"n": 3}, "expected": {"x": 3}, "threshold": 100},
      {"id": "n1", "params": {"n": 1}, "expected": {"x": 1}, "threshold": 100}]})"));
  const auto out = harness::cmd_trace(p, suite, "n3").output;
  EXPECT_NE(out.find("# case n3 status=Completed"), std::string::npos);
  EXPECT_EQ(out.find("# case n1"), std::string::npos);
  for (const auto* pt : {"entry", "after:L1", "exit"}) EXPECT_NE(out.find(pt), std::string::npos) << pt;
  EXPECT_THROW(harness::cmd_trace(p, suite, "nope"), harness::SuiteError);
}

TEST(Commands, BenchTable) {
  const auto cfg = corpus_config("toy-count");
  const auto out = harness::cmd_bench(harness::load_program(cfg.program), harness::load_suite(cfg.suite), 1).output;
  EXPECT_EQ(out.substr(0, out.find('\n')), "id\tstatus\tsteps\tthreshold\tclass\toutputs");
  EXPECT_NE(out.find("fast-1\tCompleted\t8\t24\tFast\tok"), std::string::npos);
  EXPECT_NE(out.find("slow-80\tCompleted"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto toy = corpus("toy-count");
  EXPECT_EQ(cli("repair -c " + (toy / "config.json").string()), 0);
  EXPECT_EQ(cli("validate -c " + (toy / "config.json").string() + " --patch " + (toy / "overfit.patch.json").string()),
            1);
  EXPECT_EQ(cli("bench -c " + (toy / "config.json").string()), 0);
  EXPECT_EQ(cli("infer --program /nonexistent.prog --suite " + (toy / "suite.json").string()), 2);
  EXPECT_EQ(cli("repair"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
}

TEST(Cli, MissingProgramAndZeroGenerations) {
  Scratch s;
  const auto toy = corpus("toy-count");
  auto doc = json::parse(harness::read_file(toy / "config.json"));
  doc["suite"] = (toy / "suite.json").string();
  doc["program"] = "/nonexistent/toy.prog";
  EXPECT_EQ(cli("repair -c " + s.write("missing.json", doc.dump()).string()), 2);
  doc["program"] = (toy / "toy-count.prog").string();
  doc["search"]["generations"] = 0;
  const auto out = s.dir / "report.json";
  EXPECT_EQ(cli("repair -c " + s.write("zero.json", doc.dump()).string() + " -o " + out.string()), 1);
  EXPECT_EQ(json::parse(harness::read_file(out))["result"], "Fail");
}
