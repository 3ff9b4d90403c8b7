#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "perfrepair/error.hpp"
#include "perfrepair/lang/ast.hpp"
#include "perfrepair/lang/parser.hpp"

namespace perfrepair::lang {

namespace detail {

// Variables are function-scoped. A scalar local is declared by its first
// assignment in source order; any earlier read is a use-before-declaration.
class Checker {
 public:
  explicit Checker(const Program& p) : p_(p) {}

  std::vector<Diagnostic> run() {
    std::set<std::string> labels_all;
    walk(p_.body, [&](const Stmt& s, int) {
      collect_defs(s);
      if (s.is_loop()) {
        if (!labels_all.insert(s.label).second) {
          add(Diagnostic::Code::DuplicateLabel, "loop label '" + s.label + "' used twice", s,
              s.label);
        }
        labels_.insert(s.label);
      }
    });

    for (const auto& prm : p_.params) {
      if (is_counter_name(prm.name)) {
        add(Diagnostic::Code::ReservedName, "parameter '" + prm.name + "' uses reserved prefix",
            0, prm.name);
      }
      if (prm.is_array) {
        arrays_.insert(prm.name);
        check_length(*prm.length);
      } else {
        defined_.insert(prm.name);
        scalar_params_.insert(prm.name);
      }
    }

    block(p_.body, 0);

    for (const auto& out : p_.outputs) {
      if (arrays_.count(out)) {
        add(Diagnostic::Code::TypeMismatch, "output '" + out + "' is an array", 0, out);
      } else if (!scalar_params_.count(out) && !assigned_.count(out)) {
        add(Diagnostic::Code::UndeclaredVariable, "output '" + out + "' is never assigned", 0,
            out);
      }
    }
    return std::move(diags_);
  }

 private:
  const Program& p_;
  std::set<std::string> arrays_;
  std::set<std::string> scalar_params_;
  std::set<std::string> assigned_;  // every scalar assigned anywhere
  std::set<std::string> defined_;   // defined so far in source order
  std::set<std::string> labels_;
  std::set<std::pair<int, std::string>> reported_;
  std::vector<Diagnostic> diags_;

  void add(Diagnostic::Code code, std::string msg, int line, const std::string& subject) {
    if (!reported_.insert({static_cast<int>(code), subject}).second) return;
    diags_.push_back(Diagnostic{code, std::move(msg), line, 0, subject});
  }
  void add(Diagnostic::Code code, std::string msg, const Stmt& s, const std::string& subject) {
    add(code, std::move(msg), s.line, subject);
  }

  void collect_defs(const Stmt& s) {
    if ((s.kind == StmtKind::Assign || s.kind == StmtKind::Read) && !s.index)
      assigned_.insert(s.target);
  }

  void check_length(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Int: return;
      case Expr::Kind::Var:
        if (!defined_.count(e.name)) {
          add(Diagnostic::Code::UndeclaredVariable,
              "array length refers to '" + e.name + "', which is not an earlier scalar parameter",
              0, e.name);
        }
        return;
      case Expr::Kind::Index:
        add(Diagnostic::Code::TypeMismatch, "array length may not index arrays", 0, e.name);
        return;
      case Expr::Kind::Unary: check_length(*e.lhs); return;
      case Expr::Kind::Binary:
        check_length(*e.lhs);
        check_length(*e.rhs);
        return;
    }
  }

  void use(const Expr& e, const Stmt& at, const std::string* counter_self = nullptr) {
    switch (e.kind) {
      case Expr::Kind::Int: return;
      case Expr::Kind::Var:
        if (is_counter_name(e.name)) {
          if (!counter_self || *counter_self != e.name) {
            add(Diagnostic::Code::ReservedName,
                "counter '" + e.name + "' may not be read by program logic", at, e.name);
          }
          return;
        }
        if (arrays_.count(e.name)) {
          add(Diagnostic::Code::TypeMismatch, "array '" + e.name + "' used as a scalar", at,
              e.name);
        } else if (!defined_.count(e.name)) {
          if (assigned_.count(e.name)) {
            add(Diagnostic::Code::UseBeforeDecl, "'" + e.name + "' used before its declaration",
                at, e.name);
          } else {
            add(Diagnostic::Code::UndeclaredVariable, "undeclared variable '" + e.name + "'", at,
                e.name);
          }
        }
        return;
      case Expr::Kind::Index:
        if (!arrays_.count(e.name)) {
          if (defined_.count(e.name) || assigned_.count(e.name)) {
            add(Diagnostic::Code::TypeMismatch, "scalar '" + e.name + "' indexed as an array", at,
                e.name);
          } else {
            add(Diagnostic::Code::UndeclaredVariable, "undeclared array '" + e.name + "'", at,
                e.name);
          }
        }
        use(*e.lhs, at);
        return;
      case Expr::Kind::Unary: use(*e.lhs, at, counter_self); return;
      case Expr::Kind::Binary:
        use(*e.lhs, at, counter_self);
        use(*e.rhs, at, counter_self);
        return;
    }
  }

  void simple(const Stmt& s) {
    if (is_counter_name(s.target)) {
      bool known = false;
      for (const auto& l : labels_) known = known || counter_for_label(l) == s.target;
      if (!known || s.index || s.kind == StmtKind::Read) {
        add(Diagnostic::Code::ReservedName,
            "'" + s.target + "' is reserved for loop-iteration counters", s, s.target);
        return;
      }
      use(*s.value, s, &s.target);
      return;
    }
    if (s.index) use(*s.index, s);
    if (s.value) use(*s.value, s);
    if (s.index) {
      if (!arrays_.count(s.target)) {
        if (assigned_.count(s.target) || scalar_params_.count(s.target)) {
          add(Diagnostic::Code::TypeMismatch, "scalar '" + s.target + "' indexed as an array", s,
              s.target);
        } else {
          add(Diagnostic::Code::UndeclaredVariable, "undeclared array '" + s.target + "'", s,
              s.target);
        }
      }
    } else if (arrays_.count(s.target)) {
      add(Diagnostic::Code::TypeMismatch, "array '" + s.target + "' assigned as a scalar", s,
          s.target);
    } else {
      defined_.insert(s.target);
    }
  }

  void slot(const std::vector<Stmt>& list, const Stmt& owner) {
    for (const auto& s : list) {
      if (s.kind != StmtKind::Assign && s.kind != StmtKind::Read) {
        add(Diagnostic::Code::InvalidForSlot,
            "for-loop " + owner.label + " has a non-assignment in its init/update list", s,
            owner.label);
        continue;
      }
      simple(s);
    }
  }

  void block(const std::vector<Stmt>& stmts, int loop_depth) {
    for (const auto& s : stmts) stmt(s, loop_depth);
  }

  void stmt(const Stmt& s, int loop_depth) {
    switch (s.kind) {
      case StmtKind::Assign:
      case StmtKind::Read: simple(s); return;
      case StmtKind::Break:
        if (loop_depth == 0)
          add(Diagnostic::Code::BreakOutsideLoop, "break outside of a loop", s, "break");
        return;
      case StmtKind::Skip: return;
      case StmtKind::If:
        use(*s.cond, s);
        block(s.body, loop_depth);
        block(s.orelse, loop_depth);
        return;
      case StmtKind::While:
        use(*s.cond, s);
        block(s.body, loop_depth + 1);
        return;
      case StmtKind::For:
        slot(s.init, s);
        use(*s.cond, s);
        slot(s.update, s);
        block(s.body, loop_depth + 1);
        return;
    }
  }
};

}  // namespace detail

/// Semantic diagnostics; empty iff the program is well-formed.
inline std::vector<Diagnostic> check(const Program& p) { return detail::Checker(p).run(); }

/// parse() followed by check(); throws ParseError carrying the diagnostics.
inline Program parse_checked(std::string_view source) {
  auto p = parse(source);
  auto diags = check(p);
  if (!diags.empty()) throw ParseError(std::move(diags));
  return p;
}

}  // namespace perfrepair::lang
