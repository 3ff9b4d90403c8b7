#pragma once

#include <string>
#include <vector>

#include "perfrepair/harness/analysis.hpp"
#include "perfrepair/harness/config.hpp"
#include "perfrepair/lang/printer.hpp"
#include "perfrepair/repair/localize.hpp"
#include "perfrepair/repair/search.hpp"
#include "perfrepair/validate/pipeline.hpp"

namespace perfrepair::harness {

inline json strings(const std::vector<std::string>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x);
  return out;
}

inline json invariant_list(const std::vector<invariants::Invariant>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(validate::describe(x));
  return out;
}

inline json invariant_list(const InvariantSet& s) { return invariant_list(s.members()); }

inline json analysis_to_json(const Analysis& a, std::size_t falsification_budget) {
  json j;
  json cases = json::array();
  for (const auto& c : a.cases) {
    json r;
    r["id"] = c.id;
    r["status"] = exec::to_string(c.status);
    r["steps"] = c.steps;
    r["threshold"] = c.threshold;
    r["class"] = exec::to_string(c.cls);
    cases.push_back(r);
  }
  j["cases"] = cases;
  j["falsification"] = {{"budget", falsification_budget},
                        {"generated", a.generated},
                        {"fast", a.generated_fast},
                        {"slow", a.generated_slow}};
  j["spec"] = {{"correct_count", a.spec.correct.size()},
               {"violated_count", a.spec.violated.size()},
               {"violated", invariant_list(a.spec.violated)},
               {"correct", invariant_list(a.spec.correct)}};
  return j;
}

inline json ranking_to_json(const repair::SuspiciousnessRanking& r, const lang::Program& p) {
  json out = json::array();
  for (const auto& s : r) {
    const auto* stmt = lang::find_stmt(p, s.id);
    out.push_back({{"stmt", s.id.value},
                   {"text", stmt ? lang::summarize(*stmt) : ""},
                   {"hits", s.hits},
                   {"total", s.total}});
  }
  return out;
}

inline json patch_to_json(const repair::Patch& p) {
  json ms = json::array();
  for (const auto& m : p.mutations) ms.push_back(mutation_to_json(m));
  json j;
  j["mutations"] = ms;
  j["diff"] = p.diff;
  return j;
}

inline json checks_to_json(const std::vector<validate::InvariantCheck>& cs, bool list_all) {
  json rows = json::array();
  std::size_t held = 0, vacuous = 0;
  for (const auto& c : cs) {
    held += c.holds;
    vacuous += c.vacuous;
    if (list_all || !c.holds)
      rows.push_back({{"invariant", validate::describe(c.inv)}, {"holds", c.holds}, {"vacuous", c.vacuous}});
  }
  return {{"checked", cs.size()}, {"held", held}, {"vacuous", vacuous}, {list_all ? "rows" : "falsified", rows}};
}

inline json verdict_to_json(const validate::Verdict& v) {
  json j;
  j["stage"] = validate::to_string(v.stage);
  j["evidence"] = strings(v.evidence);
  json tests = json::array();
  for (const auto& t : v.tests)
    tests.push_back({{"id", t.id},
                     {"status", exec::to_string(t.status)},
                     {"steps", t.steps},
                     {"threshold", t.threshold},
                     {"passed", t.passed}});
  j["tests"] = tests;
  if (v.stage == validate::Stage::FailedTests) return j;
  j["regions"] = {{"passing_inputs", v.passing_inputs}, {"failing_inputs", v.failing_inputs}};
  if (v.violated) j["violated_check"] = checks_to_json(*v.violated, true);
  if (v.correct) {
    j["correct_check"] = checks_to_json(*v.correct, false);
    j["correct_check"]["abnormal"] = strings(v.abnormal);
  }
  if (v.comparison) {
    const auto& c = *v.comparison;
    json counters = json::array();
    for (const auto& [name, row] : c.bounds) {
      json r;
      r["counter"] = name;
      r["original"] = row.original ? json(*row.original) : json(nullptr);
      r["patched"] = row.patched ? json(*row.patched) : json(nullptr);
      counters.push_back(r);
    }
    j["comparison"] = {{"functional",
                        {{"original", invariant_list(c.original_functional)},
                         {"patched", invariant_list(c.patched_functional)},
                         {"lost", invariant_list(c.only_original)},
                         {"gained", invariant_list(c.only_patched)},
                         {"sema_eq", c.sema_eq}}},
                       {"counters", counters},
                       {"pred_sm", c.pred_sm}};
    if (!c.error.empty()) j["comparison"]["error"] = c.error;
  }
  return j;
}

}  // namespace perfrepair::harness
