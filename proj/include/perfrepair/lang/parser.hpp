#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "perfrepair/error.hpp"
#include "perfrepair/lang/ast.hpp"

namespace perfrepair::lang {

namespace detail {

enum class Tok {
  End,
  Ident,
  Int,
  Assign,  // :=
  Colon,
  Semi,
  Comma,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Plus,
  Minus,
  Star,
  Slash,
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,
  Ne,
  AndAnd,
  OrOr,
  Bang,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

inline std::string describe(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Assign: return "':='";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::EqEq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
  }
  return "?";
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError({Diagnostic{Diagnostic::Code::SyntaxError, msg, line, col, {}}});
  };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size()) fail("unterminated comment");
      advance(2);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < src.size() && src[i + 1] == b; };
    std::size_t len = 2;
    if (two(':', '=')) t.kind = Tok::Assign;
    else if (two('<', '=')) t.kind = Tok::Le;
    else if (two('>', '=')) t.kind = Tok::Ge;
    else if (two('=', '=')) t.kind = Tok::EqEq;
    else if (two('!', '=')) t.kind = Tok::Ne;
    else if (two('&', '&')) t.kind = Tok::AndAnd;
    else if (two('|', '|')) t.kind = Tok::OrOr;
    else {
      len = 1;
      switch (c) {
        case ':': t.kind = Tok::Colon; break;
        case ';': t.kind = Tok::Semi; break;
        case ',': t.kind = Tok::Comma; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '{': t.kind = Tok::LBrace; break;
        case '}': t.kind = Tok::RBrace; break;
        case '[': t.kind = Tok::LBracket; break;
        case ']': t.kind = Tok::RBracket; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        case '<': t.kind = Tok::Lt; break;
        case '>': t.kind = Tok::Gt; break;
        case '!': t.kind = Tok::Bang; break;
        default: fail(std::string("unexpected character '") + c + "'");
      }
    }
    t.text = std::string(src.substr(i, len));
    advance(len);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

inline const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> kw = {
      "program", "returns", "if", "else", "while", "for", "break", "skip", "input"};
  return kw;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    if (at_keyword("program")) {
      next();
      p.name = expect_ident("program name");
      expect(Tok::LParen);
      if (!at(Tok::RParen)) {
        do {
          p.params.push_back(param());
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen);
      if (at_keyword("returns")) {
        next();
        expect(Tok::LParen);
        if (!at(Tok::RParen)) {
          do {
            p.outputs.push_back(expect_ident("output name"));
          } while (accept(Tok::Comma));
        }
        expect(Tok::RParen);
      }
      p.body = block();
      if (!at(Tok::End)) unexpected({Tok::End});
    } else {
      if (at(Tok::End)) {
        throw ParseError({Diagnostic{Diagnostic::Code::SyntaxError, "empty program", peek().line,
                                     peek().column, {}}});
      }
      p.name = "main";
      while (!at(Tok::End)) p.body.push_back(statement());
    }
    check_duplicates(p);
    renumber(p);
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }

  [[noreturn]] void unexpected(std::vector<Tok> expected, std::string what = {}) const {
    const auto& t = peek();
    std::string msg = "expected ";
    if (!what.empty()) {
      msg += what;
    } else {
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += i + 1 == expected.size() ? " or " : ", ";
        msg += describe(expected[i]);
      }
    }
    msg += ", found ";
    msg += t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
    throw ParseError({Diagnostic{Diagnostic::Code::SyntaxError, msg, t.line, t.column, {}}});
  }

  Token expect(Tok k) {
    if (!at(k)) unexpected({k});
    return next();
  }

  std::string expect_ident(const char* what) {
    if (!at(Tok::Ident) || keywords().count(peek().text)) unexpected({Tok::Ident}, what);
    return next().text;
  }

  Param param() {
    Param prm;
    prm.name = expect_ident("parameter name");
    if (accept(Tok::LBracket)) {
      prm.is_array = true;
      prm.length = expr();
      expect(Tok::RBracket);
    }
    return prm;
  }

  void check_duplicates(const Program& p) const {
    std::set<std::string> seen;
    for (const auto& prm : p.params) {
      if (!seen.insert(prm.name).second) {
        throw ParseError({Diagnostic{Diagnostic::Code::DuplicateDeclaration,
                                     "parameter '" + prm.name + "' declared twice", 0, 0,
                                     prm.name}});
      }
    }
    std::set<std::string> outs;
    for (const auto& o : p.outputs) {
      if (!outs.insert(o).second) {
        throw ParseError({Diagnostic{Diagnostic::Code::DuplicateDeclaration,
                                     "output '" + o + "' listed twice", 0, 0, o}});
      }
    }
  }

  // `;` ends a simple statement; it may be omitted before `}` or end of input.
  void terminator() {
    if (accept(Tok::Semi) || at(Tok::RBrace) || at(Tok::End)) return;
    unexpected({Tok::Semi});
  }

  std::vector<Stmt> block() {
    expect(Tok::LBrace);
    std::vector<Stmt> out;
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) unexpected({Tok::RBrace});
      out.push_back(statement());
    }
    expect(Tok::RBrace);
    return out;
  }

  Stmt statement() {
    const Token start = peek();
    std::string label;
    if (at(Tok::Ident) && peek(1).kind == Tok::Colon && !keywords().count(peek().text)) {
      label = next().text;
      next();
      if (!at_keyword("while") && !at_keyword("for")) unexpected({}, "loop after label");
    }
    Stmt s;
    s.line = start.line;
    if (at_keyword("while")) {
      next();
      s.kind = StmtKind::While;
      expect(Tok::LParen);
      s.cond = expr();
      expect(Tok::RParen);
      s.body = block();
    } else if (at_keyword("for")) {
      next();
      s.kind = StmtKind::For;
      expect(Tok::LParen);
      if (!at(Tok::Semi)) {
        do {
          s.init.push_back(assignment_like());
        } while (accept(Tok::Comma));
      }
      expect(Tok::Semi);
      s.cond = expr();
      expect(Tok::Semi);
      if (!at(Tok::RParen)) {
        do {
          s.update.push_back(assignment_like());
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen);
      s.body = block();
    } else if (at_keyword("if")) {
      next();
      s.kind = StmtKind::If;
      expect(Tok::LParen);
      s.cond = expr();
      expect(Tok::RParen);
      s.body = block();
      if (at_keyword("else")) {
        next();
        if (at_keyword("if")) {
          s.orelse.push_back(statement());
        } else {
          s.orelse = block();
        }
      }
    } else if (at_keyword("break")) {
      next();
      s.kind = StmtKind::Break;
      terminator();
    } else if (at_keyword("skip")) {
      next();
      s.kind = StmtKind::Skip;
      terminator();
    } else if (at(Tok::Ident) && !keywords().count(peek().text)) {
      s = assignment_like();
      terminator();
    } else {
      unexpected({}, "statement");
    }
    if (s.is_loop()) s.label = label.empty() ? "L" + std::to_string(start.line) : label;
    return s;
  }

  // `x := e`, `a[i] := e`, or `x := input()`
  Stmt assignment_like() {
    Stmt s;
    s.line = peek().line;
    s.target = expect_ident("assignment target");
    if (accept(Tok::LBracket)) {
      s.index = expr();
      expect(Tok::RBracket);
    }
    expect(Tok::Assign);
    if (at_keyword("input") && peek(1).kind == Tok::LParen) {
      next();
      next();
      expect(Tok::RParen);
      s.kind = StmtKind::Read;
    } else {
      s.kind = StmtKind::Assign;
      s.value = expr();
    }
    return s;
  }

  ExprPtr expr() { return or_expr(); }

  ExprPtr or_expr() {
    auto l = and_expr();
    while (accept(Tok::OrOr)) l = Expr::binary(BinOp::Or, l, and_expr());
    return l;
  }
  ExprPtr and_expr() {
    auto l = eq_expr();
    while (accept(Tok::AndAnd)) l = Expr::binary(BinOp::And, l, eq_expr());
    return l;
  }
  ExprPtr eq_expr() {
    auto l = rel_expr();
    for (;;) {
      if (accept(Tok::EqEq)) l = Expr::binary(BinOp::Eq, l, rel_expr());
      else if (accept(Tok::Ne)) l = Expr::binary(BinOp::Ne, l, rel_expr());
      else return l;
    }
  }
  ExprPtr rel_expr() {
    auto l = add_expr();
    for (;;) {
      if (accept(Tok::Lt)) l = Expr::binary(BinOp::Lt, l, add_expr());
      else if (accept(Tok::Le)) l = Expr::binary(BinOp::Le, l, add_expr());
      else if (accept(Tok::Gt)) l = Expr::binary(BinOp::Gt, l, add_expr());
      else if (accept(Tok::Ge)) l = Expr::binary(BinOp::Ge, l, add_expr());
      else return l;
    }
  }
  ExprPtr add_expr() {
    auto l = mul_expr();
    for (;;) {
      if (accept(Tok::Plus)) l = Expr::binary(BinOp::Add, l, mul_expr());
      else if (accept(Tok::Minus)) l = Expr::binary(BinOp::Sub, l, mul_expr());
      else return l;
    }
  }
  ExprPtr mul_expr() {
    auto l = unary_expr();
    for (;;) {
      if (accept(Tok::Star)) l = Expr::binary(BinOp::Mul, l, unary_expr());
      else if (accept(Tok::Slash)) l = Expr::binary(BinOp::Div, l, unary_expr());
      else return l;
    }
  }
  ExprPtr unary_expr() {
    if (accept(Tok::Minus)) return Expr::unary(UnOp::Neg, unary_expr());
    if (accept(Tok::Bang)) return Expr::unary(UnOp::Not, unary_expr());
    return primary();
  }
  ExprPtr primary() {
    if (at(Tok::Int)) {
      const auto t = next();
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc{}) {
        throw ParseError({Diagnostic{Diagnostic::Code::SyntaxError,
                                     "integer literal out of range", t.line, t.column, {}}});
      }
      return Expr::integer(v);
    }
    if (accept(Tok::LParen)) {
      auto e = expr();
      expect(Tok::RParen);
      return e;
    }
    if (at_keyword("input")) {
      const auto& t = peek();
      throw ParseError({Diagnostic{Diagnostic::Code::SyntaxError,
                                   "input() may only appear as the whole right-hand side of an "
                                   "assignment",
                                   t.line, t.column, {}}});
    }
    if (at(Tok::Ident) && !keywords().count(peek().text)) {
      auto name = next().text;
      if (accept(Tok::LBracket)) {
        auto sub = expr();
        expect(Tok::RBracket);
        return Expr::index(std::move(name), std::move(sub));
      }
      return Expr::var(std::move(name));
    }
    unexpected({Tok::Int, Tok::Ident, Tok::LParen, Tok::Minus, Tok::Bang});
  }
};

}  // namespace detail

/// Parses program text. Statement ids are assigned in pre-order; loops without
/// an explicit `Label:` prefix are labelled `L<line>`. Semantic checks live in
/// `check()`.
inline Program parse(std::string_view source) {
  detail::Parser parser(detail::lex(source));
  return parser.program();
}

}  // namespace perfrepair::lang
