#pragma once

#include <sstream>
#include <string>

#include "perfrepair/lang/ast.hpp"

namespace perfrepair::lang {

namespace detail {

inline int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne: return 3;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 4;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    case BinOp::Mul:
    case BinOp::Div: return 6;
  }
  return 0;
}

inline const char* spelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

constexpr int kUnaryPrecedence = 7;

inline void print_expr(std::ostream& os, const Expr& e, int parent = 0) {
  switch (e.kind) {
    case Expr::Kind::Int:
      os << e.value;
      return;
    case Expr::Kind::Var:
      os << e.name;
      return;
    case Expr::Kind::Index:
      os << e.name << '[';
      print_expr(os, *e.lhs);
      os << ']';
      return;
    case Expr::Kind::Unary:
      os << (e.unop == UnOp::Neg ? "-" : "!");
      print_expr(os, *e.lhs, kUnaryPrecedence);
      return;
    case Expr::Kind::Binary: {
      const int prec = precedence(e.binop);
      const bool paren = prec < parent;
      if (paren) os << '(';
      print_expr(os, *e.lhs, prec);
      os << ' ' << spelling(e.binop) << ' ';
      // Left-associative: a right operand at the same level needs parentheses.
      print_expr(os, *e.rhs, prec + 1);
      if (paren) os << ')';
      return;
    }
  }
}

inline void print_simple(std::ostream& os, const Stmt& s) {
  os << s.target;
  if (s.index) {
    os << '[';
    print_expr(os, *s.index);
    os << ']';
  }
  os << " := ";
  if (s.kind == StmtKind::Read) {
    os << "input()";
  } else if (s.value) {
    print_expr(os, *s.value);
  }
}

void print_block(std::ostream& os, const std::vector<Stmt>& stmts, int indent);

inline void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad;
  switch (s.kind) {
    case StmtKind::Assign:
    case StmtKind::Read:
      print_simple(os, s);
      os << ";\n";
      return;
    case StmtKind::Break:
      os << "break;\n";
      return;
    case StmtKind::Skip:
      os << "skip;\n";
      return;
    case StmtKind::If:
      os << "if (";
      print_expr(os, *s.cond);
      os << ") ";
      print_block(os, s.body, indent);
      if (!s.orelse.empty()) {
        os << " else ";
        print_block(os, s.orelse, indent);
      }
      os << '\n';
      return;
    case StmtKind::While:
      os << s.label << ": while (";
      print_expr(os, *s.cond);
      os << ") ";
      print_block(os, s.body, indent);
      os << '\n';
      return;
    case StmtKind::For: {
      os << s.label << ": for (";
      // Slots may hold non-assignments after a mutation; check() rejects
      // those, but printing still has to terminate.
      auto slot = [&](const std::vector<Stmt>& list) {
        for (std::size_t i = 0; i < list.size(); ++i) {
          if (i) os << ", ";
          if (list[i].kind == StmtKind::Assign || list[i].kind == StmtKind::Read) {
            print_simple(os, list[i]);
          } else {
            os << "/* invalid */";
          }
        }
      };
      slot(s.init);
      os << "; ";
      print_expr(os, *s.cond);
      os << "; ";
      slot(s.update);
      os << ") ";
      print_block(os, s.body, indent);
      os << '\n';
      return;
    }
  }
}

inline void print_block(std::ostream& os, const std::vector<Stmt>& stmts, int indent) {
  if (stmts.empty()) {
    os << "{ }";
    return;
  }
  os << "{\n";
  for (const auto& s : stmts) print_stmt(os, s, indent + 1);
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << '}';
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::ostringstream os;
  detail::print_expr(os, e);
  return os.str();
}

/// Canonical text of a program. Loop labels are always written out so the
/// output re-parses to the same labels regardless of layout.
inline std::string pretty_print(const Program& p) {
  std::ostringstream os;
  os << "program " << p.name << '(';
  for (std::size_t i = 0; i < p.params.size(); ++i) {
    if (i) os << ", ";
    os << p.params[i].name;
    if (p.params[i].is_array) {
      os << '[';
      detail::print_expr(os, *p.params[i].length);
      os << ']';
    }
  }
  os << ')';
  if (!p.outputs.empty()) {
    os << " returns (";
    for (std::size_t i = 0; i < p.outputs.size(); ++i) {
      if (i) os << ", ";
      os << p.outputs[i];
    }
    os << ')';
  }
  os << ' ';
  detail::print_block(os, p.body, 0);
  os << '\n';
  return os.str();
}

/// One-line rendering of a single statement header, for reports.
inline std::string summarize(const Stmt& s) {
  std::ostringstream os;
  switch (s.kind) {
    case StmtKind::Assign:
    case StmtKind::Read: detail::print_simple(os, s); break;
    case StmtKind::Break: os << "break"; break;
    case StmtKind::Skip: os << "skip"; break;
    case StmtKind::If:
      os << "if (";
      detail::print_expr(os, *s.cond);
      os << ")";
      break;
    case StmtKind::While:
      os << s.label << ": while (";
      detail::print_expr(os, *s.cond);
      os << ")";
      break;
    case StmtKind::For:
      os << s.label << ": for (..; ";
      detail::print_expr(os, *s.cond);
      os << "; ..)";
      break;
  }
  return os.str();
}

}  // namespace perfrepair::lang
