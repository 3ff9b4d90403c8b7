#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "perfrepair/error.hpp"
#include "perfrepair/exec/testcase.hpp"
#include "perfrepair/invariants/spec.hpp"
#include "perfrepair/lang/printer.hpp"
#include "perfrepair/parallel.hpp"
#include "perfrepair/repair/diff.hpp"
#include "perfrepair/repair/localize.hpp"
#include "perfrepair/repair/mutation.hpp"

namespace perfrepair::repair {

struct SearchConfig {
  std::uint64_t seed = 1;
  std::size_t population = 40;
  std::size_t generations = 50;
  /// Chance that an offspring gets one extra mutation, in [0, 1].
  double mutation_rate = 0.5;
  std::size_t max_mutations = 4;
  std::size_t workers = 1;
  /// Attempts at drawing a well-formed mutation before giving up on a slot.
  std::size_t retries = 32;
};

/// The search needs at least one fast test to tell a fix from a break.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// More passing tests first, then fewer steps spent on them.
struct Fitness {
  std::size_t passed = 0;
  std::uint64_t steps = 0;

  friend bool operator==(const Fitness&, const Fitness&) = default;
  bool better_than(const Fitness& o) const {
    if (passed != o.passed) return passed > o.passed;
    return steps < o.steps;
  }
};

struct Patch {
  std::vector<Mutation> mutations;
  lang::Program program;
  std::string diff;
};

inline Patch make_patch(const lang::Program& original, std::vector<Mutation> ms, lang::Program patched) {
  Patch p;
  p.mutations = std::move(ms);
  p.diff = unified_diff(lang::pretty_print(original), lang::pretty_print(patched));
  p.program = std::move(patched);
  return p;
}

enum class SearchOutcome {
  Found,        // a plausible patch
  AlreadyFast,  // every test passes unpatched; the patch is empty
  Fail,
};

inline const char* to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Found: return "Found";
    case SearchOutcome::AlreadyFast: return "AlreadyFast";
    case SearchOutcome::Fail: return "Fail";
  }
  return "?";
}

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Fail;
  std::optional<Patch> patch;
  Fitness fitness;
  std::size_t generations = 0;   // generations evaluated
  std::size_t evaluations = 0;   // distinct programs run against the suite
  std::string diagnostic;
};

/// Runs every test and scores the program. Tests pass when they are fast.
inline Fitness evaluate(const lang::Program& p, const std::vector<exec::TestCase>& tests) {
  const exec::CompiledProgram cp(p);
  Fitness f;
  for (const auto& t : tests) {
    const auto o = exec::run_test(cp, t);
    if (o.passed()) {
      ++f.passed;
      f.steps += o.run.steps;
    }
  }
  return f;
}

namespace detail {

struct Candidate {
  std::vector<Mutation> mutations;
  lang::Program program;
  std::string text;
  Fitness fitness;
};

inline bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.fitness.better_than(b.fitness)) return true;
  if (b.fitness.better_than(a.fitness)) return false;
  if (a.mutations.size() != b.mutations.size()) return a.mutations.size() < b.mutations.size();
  return a.text < b.text;
}

class Searcher {
 public:
  Searcher(const lang::Program& original, const std::vector<exec::TestCase>& tests,
           const invariants::Spec& spec, const SearchConfig& cfg, const std::set<std::string>& excluded)
      : original_(original), tests_(tests), spec_(spec), cfg_(cfg), excluded_(excluded), rng_(cfg.seed) {}

  SearchResult run() {
    SearchResult out;
    if (cfg_.generations == 0 || cfg_.population == 0) {
      out.diagnostic = "search budget is empty";
      return out;
    }
    std::vector<Candidate> pop;
    for (std::size_t k = 0; k < cfg_.population; ++k) {
      Candidate c;
      c.program = original_;
      if (extend(c)) pop.push_back(std::move(c));
    }
    for (std::size_t g = 0; g < cfg_.generations; ++g) {
      evaluate_all(pop);
      out.generations = g + 1;
      out.evaluations = cache_.size();
      const Candidate* best = nullptr;
      for (const auto& c : pop) {
        if (c.fitness.passed != tests_.size() || excluded_.count(c.text)) continue;
        if (!best || plausible_before(c, *best)) best = &c;
      }
      if (best) {
        auto found = minimize(*best);
        out.outcome = SearchOutcome::Found;
        out.fitness = found.fitness;
        out.evaluations = cache_.size();
        out.patch = make_patch(original_, found.mutations, found.program);
        return out;
      }
      if (g + 1 < cfg_.generations) pop = next_generation(std::move(pop));
    }
    out.diagnostic = "no plausible patch within " + std::to_string(cfg_.generations) + " generations";
    return out;
  }

 private:
  const lang::Program& original_;
  const std::vector<exec::TestCase>& tests_;
  const invariants::Spec& spec_;
  SearchConfig cfg_;
  const std::set<std::string>& excluded_;
  std::mt19937_64 rng_;
  std::map<std::string, Fitness> cache_;

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  bool chance(double p) { return static_cast<double>(rng_() % 1'000'000) < p * 1'000'000.0; }

  static bool plausible_before(const Candidate& a, const Candidate& b) {
    if (a.fitness.steps != b.fitness.steps) return a.fitness.steps < b.fitness.steps;
    if (a.mutations.size() != b.mutations.size()) return a.mutations.size() < b.mutations.size();
    return a.text < b.text;
  }

  static StmtId weighted(const SuspiciousnessRanking& r, std::uint64_t draw) {
    for (const auto& s : r) {
      if (draw < s.weight()) return s.id;
      draw -= s.weight();
    }
    return r.back().id;
  }

  std::optional<Mutation> draw_mutation(const lang::Program& p) {
    const auto ranking = localize(spec_, p);
    if (ranking.empty()) return std::nullopt;
    std::uint64_t total = 0;
    for (const auto& s : ranking) total += s.weight();
    // The edited location follows the ranking; the destination of a move,
    // the donor of an insert and the swap partner are drawn uniformly.
    Mutation m;
    m.kind = static_cast<MutationKind>(pick(4));
    const StmtId located = weighted(ranking, rng_() % total);
    const StmtId uniform = ranking[pick(ranking.size())].id;
    m.stmt = m.kind == MutationKind::Insert ? uniform : located;
    m.other = m.kind == MutationKind::Insert ? located : uniform;
    m.position = pick(2) == 0 ? Position::Before : Position::After;
    if (m.kind == MutationKind::Delete) {
      m.other = {};
      m.position = Position::Before;
    } else if (m.kind == MutationKind::Swap) {
      m.position = Position::Before;
    }
    return m;
  }

  // Appends one well-formed mutation to `c`. False when every attempt failed.
  bool extend(Candidate& c) {
    for (std::size_t attempt = 0; attempt < cfg_.retries; ++attempt) {
      auto m = draw_mutation(c.program);
      if (!m) return false;
      try {
        auto r = apply_mutation(c.program, *m);
        if (!r.ok()) continue;
        c.mutations.push_back(*m);
        c.program = std::move(r.program);
        c.text.clear();
        return true;
      } catch (const IllFormedResult&) {
      }
    }
    return false;
  }

  // Drops mutations one at a time, first to last, while every test still
  // passes; ids of the later mutations are kept as they are.
  Candidate minimize(Candidate c) {
    bool changed = true;
    while (changed && c.mutations.size() > 1) {
      changed = false;
      for (std::size_t i = 0; i < c.mutations.size(); ++i) {
        Candidate t;
        t.mutations = c.mutations;
        t.mutations.erase(t.mutations.begin() + static_cast<std::ptrdiff_t>(i));
        try {
          auto r = apply_patch(original_, t.mutations);
          if (!r.ok()) continue;
          t.program = std::move(r.program);
        } catch (const Error&) {
          continue;
        }
        std::vector<Candidate> one{std::move(t)};
        evaluate_all(one);
        if (one[0].fitness.passed == tests_.size() && !excluded_.count(one[0].text)) {
          c = std::move(one[0]);
          changed = true;
          break;
        }
      }
    }
    return c;
  }

  void evaluate_all(std::vector<Candidate>& pop) {
    for (auto& c : pop)
      if (c.text.empty()) c.text = lang::pretty_print(c.program);
    std::vector<std::size_t> fresh;
    std::set<std::string> queued;
    for (std::size_t i = 0; i < pop.size(); ++i)
      if (!cache_.count(pop[i].text) && queued.insert(pop[i].text).second) fresh.push_back(i);
    std::vector<Fitness> scores(fresh.size());
    parallel_for(fresh.size(), cfg_.workers,
                 [&](std::size_t k) { scores[k] = repair::evaluate(pop[fresh[k]].program, tests_); });
    for (std::size_t k = 0; k < fresh.size(); ++k) cache_.emplace(pop[fresh[k]].text, scores[k]);
    for (auto& c : pop) c.fitness = cache_.at(c.text);
  }

  const Candidate& tournament(const std::vector<Candidate>& pop) {
    const auto& a = pop[pick(pop.size())];
    const auto& b = pop[pick(pop.size())];
    return ranks_before(b, a) ? b : a;
  }

  std::optional<Candidate> offspring(const std::vector<Candidate>& pop) {
    const auto& a = tournament(pop);
    const auto& b = tournament(pop);
    const auto cut_a = pick(a.mutations.size() + 1);
    const auto cut_b = pick(b.mutations.size() + 1);
    Candidate child;
    child.mutations.assign(a.mutations.begin(), a.mutations.begin() + static_cast<std::ptrdiff_t>(cut_a));
    child.mutations.insert(child.mutations.end(), b.mutations.begin() + static_cast<std::ptrdiff_t>(cut_b),
                           b.mutations.end());
    if (child.mutations.size() > cfg_.max_mutations) child.mutations.resize(cfg_.max_mutations);
    MutationResult r;
    try {
      r = apply_patch(original_, child.mutations);
    } catch (const Error&) {
      return std::nullopt;  // spliced ids no longer fit
    }
    if (!r.ok()) return std::nullopt;
    child.program = std::move(r.program);
    const bool grow = child.mutations.empty() || chance(cfg_.mutation_rate);
    if (grow && child.mutations.size() < cfg_.max_mutations && !extend(child)) return std::nullopt;
    if (child.mutations.empty()) return std::nullopt;
    return child;
  }

  std::vector<Candidate> next_generation(std::vector<Candidate> pop) {
    std::sort(pop.begin(), pop.end(), ranks_before);
    if (pop.empty()) {
      // nothing survived; restart from single mutations
      std::vector<Candidate> fresh;
      for (std::size_t k = 0; k < cfg_.population; ++k) {
        Candidate c;
        c.program = original_;
        if (extend(c)) fresh.push_back(std::move(c));
      }
      return fresh;
    }
    std::vector<Candidate> next(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>((pop.size() + 1) / 2));
    std::set<std::string> seen;
    for (const auto& c : next) seen.insert(c.text);
    const auto attempts = cfg_.population * cfg_.retries;
    for (std::size_t k = 0; next.size() < cfg_.population && k < attempts; ++k) {
      auto c = offspring(pop);
      if (!c) continue;
      c->text = lang::pretty_print(c->program);
      if (seen.insert(c->text).second) next.push_back(std::move(*c));
    }
    return next;
  }
};

inline bool contradictory(const std::vector<exec::TestCase>& tests, std::string& which) {
  for (std::size_t i = 0; i < tests.size(); ++i)
    for (std::size_t j = i + 1; j < tests.size(); ++j)
      if (tests[i].input == tests[j].input && tests[i].expected != tests[j].expected) {
        which = tests[i].id + " and " + tests[j].id;
        return true;
      }
  return false;
}

}  // namespace detail

/// Genetic search for a mutation sequence that makes every test fast.
/// Programs whose pretty-printed text is in `excluded` are never returned.
/// Throws PreconditionError when no test is fast on the original.
inline SearchResult search(const lang::Program& original, const std::vector<exec::TestCase>& tests,
                           const invariants::Spec& spec, const SearchConfig& cfg,
                           const std::set<std::string>& excluded = {}) {
  SearchResult out;
  std::string which;
  if (detail::contradictory(tests, which)) {
    out.diagnostic = "tests " + which + " expect different outputs for the same input";
    return out;
  }
  const auto base = evaluate(original, tests);
  if (base.passed == 0) throw PreconditionError("no test is fast on the original program");
  if (base.passed == tests.size()) {
    out.outcome = SearchOutcome::AlreadyFast;
    out.fitness = base;
    out.patch = make_patch(original, {}, original);
    return out;
  }
  return detail::Searcher(original, tests, spec, cfg, excluded).run();
}

}  // namespace perfrepair::repair
