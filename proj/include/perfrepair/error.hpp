#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace perfrepair {

/// Base class for every error raised across a module boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Diagnostic {
  enum class Code {
    SyntaxError,
    DuplicateDeclaration,
    UndeclaredVariable,
    UseBeforeDecl,
    TypeMismatch,
    DuplicateLabel,
    BreakOutsideLoop,
    InvalidForSlot,
    ReservedName,
  };

  Code code;
  std::string message;
  int line = 0;
  int column = 0;
  std::string subject;  // offending identifier, when there is one

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline const char* to_string(Diagnostic::Code c) {
  switch (c) {
    case Diagnostic::Code::SyntaxError: return "SyntaxError";
    case Diagnostic::Code::DuplicateDeclaration: return "DuplicateDeclaration";
    case Diagnostic::Code::UndeclaredVariable: return "UndeclaredVariable";
    case Diagnostic::Code::UseBeforeDecl: return "UseBeforeDecl";
    case Diagnostic::Code::TypeMismatch: return "TypeMismatch";
    case Diagnostic::Code::DuplicateLabel: return "DuplicateLabel";
    case Diagnostic::Code::BreakOutsideLoop: return "BreakOutsideLoop";
    case Diagnostic::Code::InvalidForSlot: return "InvalidForSlot";
    case Diagnostic::Code::ReservedName: return "ReservedName";
  }
  return "?";
}

inline std::string format(const Diagnostic& d) {
  std::string out;
  if (d.line > 0) out += std::to_string(d.line) + ":" + std::to_string(d.column) + ": ";
  out += to_string(d.code);
  out += ": ";
  out += d.message;
  return out;
}

/// Thrown by the parser; carries every diagnostic collected before giving up.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diags)
      : Error(diags.empty() ? std::string("parse error") : format(diags.front())),
        diagnostics_(std::move(diags)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace perfrepair
