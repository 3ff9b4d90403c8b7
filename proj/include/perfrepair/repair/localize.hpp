#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "perfrepair/invariants/spec.hpp"
#include "perfrepair/lang/ast.hpp"

namespace perfrepair::repair {

struct Suspicion {
  lang::StmtId id;
  /// score = hits / total, kept exact. total is 0 for an empty spec.
  std::uint64_t hits = 0;
  std::uint64_t total = 0;

  double score() const { return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total); }

  /// Sampling weight in thousandths, floored at 50 so no statement is ever
  /// out of reach.
  std::uint64_t weight() const {
    const std::uint64_t w = total == 0 ? 0 : hits * 1000 / total;
    return std::max<std::uint64_t>(w, 50);
  }
};

/// Non-increasing score, ties by StmtId.
using SuspiciousnessRanking = std::vector<Suspicion>;

namespace detail {

struct StmtFacts {
  lang::StmtId id;
  std::set<std::string> writes;    // assigned anywhere in the subtree
  std::set<std::string> counters;  // counters of related loops
};

inline void collect_writes(const lang::Stmt& s, std::set<std::string>& out) {
  if (s.kind == lang::StmtKind::Assign || s.kind == lang::StmtKind::Read) out.insert(s.target);
  lang::for_each_child_list(s, [&](const std::vector<lang::Stmt>& list) {
    for (const auto& c : list) collect_writes(c, out);
  });
}

inline void collect_loop_counters(const std::vector<lang::Stmt>& list, std::set<std::string>& out) {
  lang::walk(list, [&](const lang::Stmt& s, int) {
    if (s.is_loop()) out.insert(lang::counter_for_label(s.label));
  });
}

// `enclosing` holds the labels of loops around the list, innermost last.
inline void gather(const std::vector<lang::Stmt>& list, std::vector<const lang::Stmt*>& enclosing,
                   std::vector<StmtFacts>& out) {
  for (const auto& s : list) {
    if (lang::is_counter_name(s.target) && !s.index) continue;  // counter bookkeeping
    StmtFacts f;
    f.id = s.id;
    collect_writes(s, f.writes);
    if (s.is_loop()) enclosing.push_back(&s);
    for (const auto* l : enclosing) f.counters.insert(lang::counter_for_label(l->label));
    if (!enclosing.empty()) {
      const auto* inner = enclosing.back();
      std::set<std::string> nested;
      lang::for_each_child_list(*inner, [&](const std::vector<lang::Stmt>& c) { collect_loop_counters(c, nested); });
      f.counters.insert(nested.begin(), nested.end());
    }
    out.push_back(std::move(f));
    // init and update belong to the for loop itself
    if (s.is_loop()) {
      gather(s.init, enclosing, out);
      gather(s.update, enclosing, out);
      gather(s.body, enclosing, out);
      enclosing.pop_back();
    } else {
      gather(s.body, enclosing, out);
      gather(s.orelse, enclosing, out);
    }
  }
}

}  // namespace detail

/// Ranks statements of `p` by the share of violated invariants they touch:
/// an invariant touches a statement when it mentions a variable the
/// statement (or its subtree) writes, or a counter of a loop enclosing the
/// statement or nested in the statement's innermost loop. Counter
/// bookkeeping statements are not ranked. With no violated invariants every
/// score is 0 and the order is by id.
inline SuspiciousnessRanking localize(const invariants::Spec& spec, const lang::Program& p) {
  std::vector<detail::StmtFacts> facts;
  std::vector<const lang::Stmt*> enclosing;
  detail::gather(p.body, enclosing, facts);
  const auto& violated = spec.violated.members();
  SuspiciousnessRanking out;
  out.reserve(facts.size());
  for (const auto& f : facts) {
    Suspicion s{f.id, 0, violated.size()};
    for (const auto& inv : violated) {
      bool touches = false;
      for (const auto& v : inv.variables())
        touches = touches || f.writes.count(v) || f.counters.count(v);
      if (touches) ++s.hits;
    }
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const Suspicion& a, const Suspicion& b) {
    // hits_a / total > hits_b / total, same total for all entries
    if (a.hits != b.hits) return a.hits > b.hits;
    return a.id < b.id;
  });
  return out;
}

}  // namespace perfrepair::repair
