#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace perfrepair::lang {

/// Pre-order index of a statement. Reassigned after every structural edit.
struct StmtId {
  int value = -1;
  friend auto operator<=>(const StmtId&, const StmtId&) = default;
};

enum class BinOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Neg, Not };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Subtrees are shared between program copies.
struct Expr {
  enum class Kind { Int, Var, Index, Unary, Binary };

  Kind kind = Kind::Int;
  std::int64_t value = 0;  // Int
  std::string name;        // Var, Index
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  ExprPtr lhs;  // Index: subscript; Unary: operand; Binary: left
  ExprPtr rhs;  // Binary: right

  static ExprPtr integer(std::int64_t v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Int;
    e->value = v;
    return e;
  }
  static ExprPtr var(std::string n) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->name = std::move(n);
    return e;
  }
  static ExprPtr index(std::string n, ExprPtr subscript) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Index;
    e->name = std::move(n);
    e->lhs = std::move(subscript);
    return e;
  }
  static ExprPtr unary(UnOp op, ExprPtr operand) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->unop = op;
    e->lhs = std::move(operand);
    return e;
  }
  static ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->binop = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }
};

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Int:
      return a->value == b->value;
    case Expr::Kind::Var:
      return a->name == b->name;
    case Expr::Kind::Index:
      return a->name == b->name && equal(a->lhs, b->lhs);
    case Expr::Kind::Unary:
      return a->unop == b->unop && equal(a->lhs, b->lhs);
    case Expr::Kind::Binary:
      return a->binop == b->binop && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

enum class StmtKind { Assign, If, While, For, Read, Break, Skip };

/// Statement node. `For` keeps its init and update assignments as separate
/// statements so each can be targeted by a mutation.
struct Stmt {
  StmtId id;
  StmtKind kind = StmtKind::Skip;
  int line = 0;  // source line, informational only

  // Assign / Read: `target[index] := value` or `target := input()`.
  std::string target;
  ExprPtr index;
  ExprPtr value;

  // If / While / For
  ExprPtr cond;
  std::vector<Stmt> body;    // then-branch or loop body
  std::vector<Stmt> orelse;  // If only
  std::vector<Stmt> init;    // For only
  std::vector<Stmt> update;  // For only
  std::string label;         // While / For

  bool is_loop() const { return kind == StmtKind::While || kind == StmtKind::For; }
};

inline constexpr std::string_view kCounterPrefix = "cnt_";

inline bool is_counter_name(std::string_view name) {
  return name.substr(0, kCounterPrefix.size()) == kCounterPrefix;
}

/// Counter variable that tracks iterations of the loop labelled `label`.
/// `L6` maps to `cnt_6`; other labels keep their spelling.
inline std::string counter_for_label(std::string_view label) {
  std::string_view tail = label;
  if (tail.size() > 1 && tail.front() == 'L') {
    bool digits = true;
    for (char c : tail.substr(1)) digits = digits && c >= '0' && c <= '9';
    if (digits) tail.remove_prefix(1);
  }
  return std::string(kCounterPrefix) + std::string(tail);
}

struct Param {
  std::string name;
  bool is_array = false;
  ExprPtr length;  // arrays only; over earlier scalar params and literals
};

struct Program {
  std::string name;
  std::vector<Param> params;
  std::vector<std::string> outputs;
  std::vector<Stmt> body;

  const Param* find_param(std::string_view n) const {
    for (const auto& p : params)
      if (p.name == n) return &p;
    return nullptr;
  }
};

bool equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b);

inline bool equal(const Stmt& a, const Stmt& b) {
  return a.id == b.id && a.kind == b.kind && a.target == b.target && equal(a.index, b.index) &&
         equal(a.value, b.value) && equal(a.cond, b.cond) && a.label == b.label &&
         equal(a.body, b.body) && equal(a.orelse, b.orelse) && equal(a.init, b.init) &&
         equal(a.update, b.update);
}

inline bool equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

/// Structural equality, including statement ids and loop labels.
inline bool operator==(const Program& a, const Program& b) {
  if (a.name != b.name || a.outputs != b.outputs || a.params.size() != b.params.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const auto& x = a.params[i];
    const auto& y = b.params[i];
    if (x.name != y.name || x.is_array != y.is_array || !equal(x.length, y.length)) return false;
  }
  return equal(a.body, b.body);
}

// Child lists in pre-order visiting order.
template <typename S, typename F>
void for_each_child_list(S& s, F&& f) {
  f(s.init);
  f(s.update);
  f(s.body);
  f(s.orelse);
}

/// Pre-order walk. `f(stmt, depth)`.
template <typename F>
void walk(const std::vector<Stmt>& stmts, F&& f, int depth = 0) {
  for (const auto& s : stmts) {
    f(s, depth);
    for_each_child_list(s, [&](const std::vector<Stmt>& list) { walk(list, f, depth + 1); });
  }
}

template <typename F>
void walk_mut(std::vector<Stmt>& stmts, F&& f) {
  for (auto& s : stmts) {
    f(s);
    for_each_child_list(s, [&](std::vector<Stmt>& list) { walk_mut(list, f); });
  }
}

/// Assigns dense pre-order ids starting at 0.
inline void renumber(Program& p) {
  int next = 0;
  walk_mut(p.body, [&](Stmt& s) { s.id = StmtId{next++}; });
}

inline std::size_t statement_count(const Program& p) {
  std::size_t n = 0;
  walk(p.body, [&](const Stmt&, int) { ++n; });
  return n;
}

inline const Stmt* find_stmt(const std::vector<Stmt>& stmts, StmtId id) {
  for (const auto& s : stmts) {
    if (s.id == id) return &s;
    const Stmt* hit = nullptr;
    for_each_child_list(s, [&](const std::vector<Stmt>& list) {
      if (!hit) hit = find_stmt(list, id);
    });
    if (hit) return hit;
  }
  return nullptr;
}

inline const Stmt* find_stmt(const Program& p, StmtId id) { return find_stmt(p.body, id); }

/// Loops in pre-order.
inline std::vector<const Stmt*> loops(const Program& p) {
  std::vector<const Stmt*> out;
  walk(p.body, [&](const Stmt& s, int) {
    if (s.is_loop()) out.push_back(&s);
  });
  return out;
}

}  // namespace perfrepair::lang
