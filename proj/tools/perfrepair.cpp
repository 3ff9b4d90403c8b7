// perfrepair command line: repair, validate, infer, trace, bench.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "perfrepair/perfrepair.hpp"

namespace fs = std::filesystem;
using namespace perfrepair;

namespace {

struct Inputs {
  std::string config;
  std::string program;
  std::string suite;
  std::string patch;
  std::string out;
  std::size_t workers = 0;  // 0: keep the config value
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> falsification;
};

void add_common(CLI::App* cmd, Inputs& in) {
  cmd->add_option("-o,--out", in.out, "write the report here instead of stdout");
  cmd->add_option("-w,--workers", in.workers, "worker threads")->check(CLI::PositiveNumber);
}

void add_sources(CLI::App* cmd, Inputs& in) {
  cmd->add_option("-c,--config", in.config, "config file (program and suite paths)");
  cmd->add_option("--program", in.program, "program file, overrides the config");
  cmd->add_option("--suite", in.suite, "suite file, overrides the config");
  cmd->add_option("--patch", in.patch, "patch file applied before running");
}

harness::Config resolve_config(const Inputs& in) {
  harness::Config cfg;
  if (!in.config.empty()) cfg = harness::load_config(in.config);
  if (!in.program.empty()) cfg.program = in.program;
  if (!in.suite.empty()) cfg.suite = in.suite;
  if (cfg.program.empty() || cfg.suite.empty()) throw harness::SchemaError("", "need --config or both --program and --suite");
  if (in.workers) {
    cfg.workers = in.workers;
    cfg.search.workers = in.workers;
  }
  if (in.seed) cfg.search.seed = *in.seed;
  if (in.falsification) cfg.falsification_budget = *in.falsification;
  return cfg;
}

lang::Program target_program(const harness::Config& cfg, const Inputs& in) {
  auto p = harness::load_program(cfg.program);
  if (in.patch.empty()) return p;
  return harness::apply(harness::load_patch(in.patch), p);
}

int emit(const harness::CommandResult& r, const Inputs& in) {
  if (in.out.empty()) {
    std::cout << r.output;
  } else {
    std::ofstream f(in.out, std::ios::binary);
    if (!f) throw harness::FileError("cannot write " + in.out);
    f << r.output;
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant-guided repair of performance bugs"};
  app.require_subcommand(1);
  Inputs in;

  auto* repair = app.add_subcommand("repair", "infer, localize, search and validate a patch");
  repair->add_option("-c,--config", in.config, "config file")->required();
  repair->add_option("--seed", in.seed, "search seed, overrides the config");
  repair->add_option("--falsification-budget", in.falsification, "generated inputs for refinement");
  add_common(repair, in);

  auto* validate = app.add_subcommand("validate", "run the validation stages on a given patch");
  validate->add_option("-c,--config", in.config, "config file")->required();
  validate->add_option("--patch", in.patch, "patch file")->required();
  validate->add_option("--falsification-budget", in.falsification, "generated inputs for refinement");
  add_common(validate, in);

  auto* infer = app.add_subcommand("infer", "print the invariants of a program over a suite");
  add_sources(infer, in);
  add_common(infer, in);

  std::string only;
  auto* trace = app.add_subcommand("trace", "print trace dumps of the instrumented program");
  add_sources(trace, in);
  trace->add_option("--case", only, "only this case id");
  add_common(trace, in);

  auto* bench = app.add_subcommand("bench", "steps and class of every case");
  add_sources(bench, in);
  add_common(bench, in);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto cfg = resolve_config(in);
    if (repair->parsed()) return emit(harness::cmd_repair(cfg), in);
    if (validate->parsed()) return emit(harness::cmd_validate(cfg, harness::load_patch(in.patch)), in);
    const auto suite = harness::load_suite(cfg.suite);
    const auto p = target_program(cfg, in);
    harness::check_suite_against(suite, p);
    if (infer->parsed()) return emit(harness::cmd_infer(p, suite, cfg.workers), in);
    if (trace->parsed()) return emit(harness::cmd_trace(p, suite, only), in);
    return emit(harness::cmd_bench(p, suite, cfg.workers), in);
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << format(d) << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
