#pragma once

#include <string>
#include <vector>

#include "perfrepair/error.hpp"
#include "perfrepair/lang/ast.hpp"
#include "perfrepair/lang/check.hpp"

namespace perfrepair::repair {

using lang::Program;
using lang::Stmt;
using lang::StmtId;

enum class MutationKind { Move, Swap, Delete, Insert };
enum class Position { Before, After };

inline const char* to_string(MutationKind k) {
  switch (k) {
    case MutationKind::Move: return "move";
    case MutationKind::Swap: return "swap";
    case MutationKind::Delete: return "delete";
    case MutationKind::Insert: return "insert";
  }
  return "?";
}

inline const char* to_string(Position p) { return p == Position::Before ? "before" : "after"; }

/// One statement-level edit. `stmt` is the statement moved, deleted, or
/// copied (Insert) or the first swap operand; `other` is the anchor for
/// Move/Insert and the second swap operand. Ids refer to the program the
/// mutation is applied to.
struct Mutation {
  MutationKind kind = MutationKind::Delete;
  StmtId stmt;
  StmtId other;
  Position position = Position::Before;

  friend bool operator==(const Mutation&, const Mutation&) = default;
};

inline std::string to_string(const Mutation& m) {
  const auto s = std::to_string(m.stmt.value);
  const auto o = std::to_string(m.other.value);
  switch (m.kind) {
    case MutationKind::Move: return "move " + s + " " + to_string(m.position) + " " + o;
    case MutationKind::Swap: return "swap " + s + " " + o;
    case MutationKind::Delete: return "delete " + s;
    case MutationKind::Insert: return "insert copy of " + s + " " + to_string(m.position) + " " + o;
  }
  return "?";
}

class InvalidOperand : public Error {
 public:
  using Error::Error;
};

class IllFormedResult : public Error {
 public:
  using Error::Error;
};

/// The mutated program, renumbered, with whatever check() reports on it.
struct MutationResult {
  Program program;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

namespace detail {

struct Location {
  std::vector<Stmt>* list = nullptr;
  std::size_t index = 0;
  Stmt& get() const { return (*list)[index]; }
};

inline bool locate(std::vector<Stmt>& list, StmtId id, Location& out) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].id == id) {
      out = {&list, i};
      return true;
    }
    bool found = false;
    lang::for_each_child_list(list[i], [&](std::vector<Stmt>& child) {
      if (!found) found = locate(child, id, out);
    });
    if (found) return true;
  }
  return false;
}

inline Location require(Program& p, StmtId id) {
  Location loc;
  if (!locate(p.body, id, loc))
    throw InvalidOperand("no statement with id " + std::to_string(id.value));
  return loc;
}

inline bool contains(const Stmt& root, StmtId id) {
  if (root.id == id) return true;
  bool found = false;
  lang::for_each_child_list(root, [&](const std::vector<Stmt>& child) {
    if (!found && lang::find_stmt(child, id)) found = true;
  });
  return found;
}

inline void insert_at(Program& p, StmtId anchor, Position pos, Stmt s) {
  auto loc = require(p, anchor);
  const auto at = loc.index + (pos == Position::After ? 1 : 0);
  loc.list->insert(loc.list->begin() + static_cast<std::ptrdiff_t>(at), std::move(s));
}

}  // namespace detail

/// Applies `m` to a copy of `p`. Throws InvalidOperand for unknown ids and
/// IllFormedResult when the edit would nest a statement inside itself.
inline MutationResult apply_mutation(const Program& p, const Mutation& m) {
  Program out = p;
  switch (m.kind) {
    case MutationKind::Delete: {
      auto loc = detail::require(out, m.stmt);
      loc.list->erase(loc.list->begin() + static_cast<std::ptrdiff_t>(loc.index));
      break;
    }
    case MutationKind::Move: {
      auto loc = detail::require(out, m.stmt);
      detail::require(out, m.other);
      if (m.stmt == m.other) break;
      if (detail::contains(loc.get(), m.other))
        throw IllFormedResult("cannot move statement " + std::to_string(m.stmt.value) +
                              " into its own body");
      Stmt moved = std::move(loc.get());
      loc.list->erase(loc.list->begin() + static_cast<std::ptrdiff_t>(loc.index));
      detail::insert_at(out, m.other, m.position, std::move(moved));
      break;
    }
    case MutationKind::Insert: {
      const Stmt copy = detail::require(out, m.stmt).get();
      detail::require(out, m.other);
      detail::insert_at(out, m.other, m.position, copy);
      break;
    }
    case MutationKind::Swap: {
      auto a = detail::require(out, m.stmt);
      auto b = detail::require(out, m.other);
      if (m.stmt == m.other) break;
      if (detail::contains(a.get(), m.other) || detail::contains(b.get(), m.stmt))
        throw IllFormedResult("cannot swap nested statements " + std::to_string(m.stmt.value) +
                              " and " + std::to_string(m.other.value));
      std::swap(a.get(), b.get());
      break;
    }
  }
  lang::renumber(out);
  MutationResult r;
  r.diagnostics = lang::check(out);
  r.program = std::move(out);
  return r;
}

/// Applies `ms` in order; each mutation's ids refer to the previous result.
/// Stops at the first mutation whose result has diagnostics.
inline MutationResult apply_patch(const Program& p, const std::vector<Mutation>& ms) {
  MutationResult r{p, lang::check(p)};
  if (!r.ok()) return r;
  for (const auto& m : ms) {
    r = apply_mutation(r.program, m);
    if (!r.ok()) break;
  }
  return r;
}

}  // namespace perfrepair::repair
