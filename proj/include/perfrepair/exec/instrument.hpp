#pragma once

#include <map>
#include <string>
#include <vector>

#include "perfrepair/lang/ast.hpp"

namespace perfrepair::exec {

/// loop label -> counter variable
using CounterSet = std::map<std::string, std::string>;

inline CounterSet counters(const lang::Program& p) {
  CounterSet out;
  for (const auto* loop : lang::loops(p)) out.emplace(loop->label, lang::counter_for_label(loop->label));
  return out;
}

namespace detail {

inline lang::Stmt counter_assign(const std::string& name, lang::ExprPtr value, int line) {
  lang::Stmt s;
  s.kind = lang::StmtKind::Assign;
  s.target = name;
  s.value = std::move(value);
  s.line = line;
  return s;
}

inline void add_increments(std::vector<lang::Stmt>& stmts) {
  for (auto& s : stmts) {
    if (s.is_loop()) {
      const auto name = lang::counter_for_label(s.label);
      auto inc = counter_assign(
          name, lang::Expr::binary(lang::BinOp::Add, lang::Expr::var(name), lang::Expr::integer(1)),
          s.line);
      s.body.insert(s.body.begin(), std::move(inc));
    }
    add_increments(s.body);
    add_increments(s.orelse);
  }
}

}  // namespace detail

/// Adds one iteration counter per loop. Every counter is zeroed at program
/// start, so its exit value is the loop's total iteration count over the run,
/// and bumped as the first statement of each iteration.
inline lang::Program instrument(const lang::Program& p) {
  const auto loops = lang::loops(p);
  if (loops.empty()) return p;
  lang::Program out = p;
  detail::add_increments(out.body);
  std::vector<lang::Stmt> prologue;
  for (const auto* loop : loops) {
    prologue.push_back(
        detail::counter_assign(lang::counter_for_label(loop->label), lang::Expr::integer(0), 0));
  }
  out.body.insert(out.body.begin(), prologue.begin(), prologue.end());
  lang::renumber(out);
  return out;
}

}  // namespace perfrepair::exec
