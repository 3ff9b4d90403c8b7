#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "perfrepair/error.hpp"
#include "perfrepair/lang/ast.hpp"

namespace perfrepair::exec {

using Value = std::int64_t;

enum class Status { Completed, BudgetExhausted, RuntimeError, InputExhausted };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Completed: return "Completed";
    case Status::BudgetExhausted: return "BudgetExhausted";
    case Status::RuntimeError: return "RuntimeError";
    case Status::InputExhausted: return "InputExhausted";
  }
  return "?";
}

/// Values bound to program parameters plus the stream consumed by `input()`.
/// Arrays shorter than their declared length are zero-padded.
struct TestInput {
  std::map<std::string, Value> scalars;
  std::map<std::string, std::vector<Value>> arrays;
  std::vector<Value> stream;

  friend bool operator==(const TestInput&, const TestInput&) = default;
};

inline constexpr std::string_view kEntryPoint = "entry";
inline constexpr std::string_view kExitPoint = "exit";

inline std::string loop_exit_point(std::string_view label) {
  return "after:" + std::string(label);
}

struct TracePoint {
  std::string point;
  std::vector<std::pair<std::string, Value>> values;  // sorted by name

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct Trace {
  std::vector<TracePoint> points;
  friend bool operator==(const Trace&, const Trace&) = default;
};

struct RunResult {
  Status status = Status::Completed;
  std::map<std::string, Value> outputs;
  std::uint64_t steps = 0;
  Trace trace;
  std::string error;  // RuntimeError detail
};

class CompiledProgram;

/// Receives every sampled program point during a run. Slot order is the
/// compiled program's `slot_names()`.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_point(const CompiledProgram& program, int point, std::span<const Value> values,
                        std::span<const std::uint8_t> present) = 0;
};

/// A program lowered to slot-indexed form. Immutable; `run` is reentrant.
class CompiledProgram {
 public:
  explicit CompiledProgram(const lang::Program& p);

  RunResult run(const TestInput& input, std::uint64_t budget, TraceSink* sink = nullptr) const;

  const std::vector<std::string>& slot_names() const { return slot_names_; }
  const std::vector<std::string>& point_names() const { return point_names_; }
  const lang::Program& source() const { return program_; }

 private:
  enum class Op {
    Const, Load, LoadIdx, Neg, Not, Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or
  };
  struct Node {
    Op op = Op::Const;
    Value imm = 0;
    int slot = -1;  // scalar slot or array index
    int a = -1;
    int b = -1;
  };
  enum class Kind { Assign, AssignIdx, Read, ReadIdx, If, While, For, Break, Skip };
  struct CStmt {
    Kind kind = Kind::Skip;
    bool counter = false;
    int slot = -1;  // scalar target or array index
    int index = -1;
    int value = -1;
    int cond = -1;
    int point = -1;
    std::vector<int> body, orelse, init, update;
  };
  struct ArrayParam {
    std::string name;
    int length = -1;  // expression node
  };

  lang::Program program_;
  std::vector<std::string> slot_names_;
  std::vector<std::string> point_names_;
  std::vector<Node> nodes_;
  std::vector<CStmt> stmts_;
  std::vector<int> top_;
  std::vector<ArrayParam> arrays_;
  std::vector<int> scalar_param_slots_;
  std::vector<std::pair<std::string, int>> output_slots_;
  std::map<std::string, int, std::less<>> slot_of_;
  std::map<std::string, int, std::less<>> array_of_;

  int slot(const std::string& name) const {
    auto it = slot_of_.find(name);
    if (it == slot_of_.end()) throw Error("unknown variable '" + name + "'");
    return it->second;
  }

  int compile_expr(const lang::Expr& e);
  int compile_stmt(const lang::Stmt& s);
  std::vector<int> compile_list(const std::vector<lang::Stmt>& list) {
    std::vector<int> out;
    out.reserve(list.size());
    for (const auto& s : list) out.push_back(compile_stmt(s));
    return out;
  }

  struct Machine;
};

namespace detail {

inline void collect_names(const lang::Expr& e, std::vector<std::string>& scalars) {
  switch (e.kind) {
    case lang::Expr::Kind::Int: return;
    case lang::Expr::Kind::Var: scalars.push_back(e.name); return;
    case lang::Expr::Kind::Index: collect_names(*e.lhs, scalars); return;
    case lang::Expr::Kind::Unary: collect_names(*e.lhs, scalars); return;
    case lang::Expr::Kind::Binary:
      collect_names(*e.lhs, scalars);
      collect_names(*e.rhs, scalars);
      return;
  }
}

struct Fault {
  Status status;
  std::string message;
};

}  // namespace detail

inline CompiledProgram::CompiledProgram(const lang::Program& p) : program_(p) {
  std::vector<std::string> names;
  for (const auto& prm : p.params) {
    if (prm.is_array) {
      array_of_.emplace(prm.name, static_cast<int>(arrays_.size()));
      arrays_.push_back({prm.name, -1});
    } else {
      names.push_back(prm.name);
    }
  }
  lang::walk(p.body, [&](const lang::Stmt& s, int) {
    if ((s.kind == lang::StmtKind::Assign || s.kind == lang::StmtKind::Read) && !s.index)
      names.push_back(s.target);
    if (s.index) detail::collect_names(*s.index, names);
    if (s.value) detail::collect_names(*s.value, names);
    if (s.cond) detail::collect_names(*s.cond, names);
  });
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  names.erase(std::remove_if(names.begin(), names.end(),
                             [&](const std::string& n) { return array_of_.count(n) > 0; }),
              names.end());
  slot_names_ = names;
  for (std::size_t i = 0; i < names.size(); ++i) slot_of_.emplace(names[i], static_cast<int>(i));

  for (const auto& prm : p.params) {
    if (prm.is_array) {
      arrays_[static_cast<std::size_t>(array_of_.at(prm.name))].length =
          compile_expr(*prm.length);
    } else {
      scalar_param_slots_.push_back(slot(prm.name));
    }
  }
  for (const auto& out : p.outputs) {
    auto it = slot_of_.find(out);
    output_slots_.emplace_back(out, it == slot_of_.end() ? -1 : it->second);
  }

  point_names_.emplace_back(kEntryPoint);
  point_names_.emplace_back(kExitPoint);
  top_ = compile_list(p.body);
}

inline int CompiledProgram::compile_expr(const lang::Expr& e) {
  Node n;
  switch (e.kind) {
    case lang::Expr::Kind::Int:
      n.op = Op::Const;
      n.imm = e.value;
      break;
    case lang::Expr::Kind::Var:
      n.op = Op::Load;
      n.slot = slot(e.name);
      break;
    case lang::Expr::Kind::Index: {
      auto it = array_of_.find(e.name);
      if (it == array_of_.end()) throw Error("unknown array '" + e.name + "'");
      n.op = Op::LoadIdx;
      n.slot = it->second;
      n.a = compile_expr(*e.lhs);
      break;
    }
    case lang::Expr::Kind::Unary:
      n.op = e.unop == lang::UnOp::Neg ? Op::Neg : Op::Not;
      n.a = compile_expr(*e.lhs);
      break;
    case lang::Expr::Kind::Binary:
      switch (e.binop) {
        case lang::BinOp::Add: n.op = Op::Add; break;
        case lang::BinOp::Sub: n.op = Op::Sub; break;
        case lang::BinOp::Mul: n.op = Op::Mul; break;
        case lang::BinOp::Div: n.op = Op::Div; break;
        case lang::BinOp::Lt: n.op = Op::Lt; break;
        case lang::BinOp::Le: n.op = Op::Le; break;
        case lang::BinOp::Gt: n.op = Op::Gt; break;
        case lang::BinOp::Ge: n.op = Op::Ge; break;
        case lang::BinOp::Eq: n.op = Op::Eq; break;
        case lang::BinOp::Ne: n.op = Op::Ne; break;
        case lang::BinOp::And: n.op = Op::And; break;
        case lang::BinOp::Or: n.op = Op::Or; break;
      }
      n.a = compile_expr(*e.lhs);
      n.b = compile_expr(*e.rhs);
      break;
  }
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size() - 1);
}

inline int CompiledProgram::compile_stmt(const lang::Stmt& s) {
  CStmt c;
  switch (s.kind) {
    case lang::StmtKind::Assign:
    case lang::StmtKind::Read: {
      const bool read = s.kind == lang::StmtKind::Read;
      if (s.index) {
        auto it = array_of_.find(s.target);
        if (it == array_of_.end()) throw Error("unknown array '" + s.target + "'");
        c.kind = read ? Kind::ReadIdx : Kind::AssignIdx;
        c.slot = it->second;
        c.index = compile_expr(*s.index);
      } else {
        c.kind = read ? Kind::Read : Kind::Assign;
        c.slot = slot(s.target);
        c.counter = lang::is_counter_name(s.target);
      }
      if (!read) c.value = compile_expr(*s.value);
      break;
    }
    case lang::StmtKind::If:
      c.kind = Kind::If;
      c.cond = compile_expr(*s.cond);
      c.body = compile_list(s.body);
      c.orelse = compile_list(s.orelse);
      break;
    case lang::StmtKind::While:
    case lang::StmtKind::For:
      c.kind = s.kind == lang::StmtKind::While ? Kind::While : Kind::For;
      c.cond = compile_expr(*s.cond);
      c.init = compile_list(s.init);
      c.update = compile_list(s.update);
      c.body = compile_list(s.body);
      c.point = static_cast<int>(point_names_.size());
      point_names_.push_back(loop_exit_point(s.label));
      break;
    case lang::StmtKind::Break: c.kind = Kind::Break; break;
    case lang::StmtKind::Skip: c.kind = Kind::Skip; break;
  }
  stmts_.push_back(std::move(c));
  return static_cast<int>(stmts_.size() - 1);
}

struct CompiledProgram::Machine {
  const CompiledProgram& prog;
  const TestInput& input;
  std::uint64_t budget;
  TraceSink* sink;
  std::vector<Value> vals;
  std::vector<std::uint8_t> present;
  std::vector<std::vector<Value>> arrays;
  std::size_t stream_pos = 0;
  std::uint64_t steps = 0;

  enum class Flow { Normal, Break };

  [[noreturn]] static void fault(Status s, std::string msg) {
    throw detail::Fault{s, std::move(msg)};
  }

  void tick() {
    if (steps == budget) fault(Status::BudgetExhausted, {});
    ++steps;
  }

  void sample(int point) {
    if (sink) sink->on_point(prog, point, vals, present);
  }

  Value eval(int idx) {
    const Node& n = prog.nodes_[static_cast<std::size_t>(idx)];
    Value r = 0;
    switch (n.op) {
      case Op::Const: return n.imm;
      case Op::Load:
        if (!present[static_cast<std::size_t>(n.slot)])
          fault(Status::RuntimeError,
                "read of uninitialized '" + prog.slot_names_[static_cast<std::size_t>(n.slot)] +
                    "'");
        return vals[static_cast<std::size_t>(n.slot)];
      case Op::LoadIdx: {
        const auto& arr = arrays[static_cast<std::size_t>(n.slot)];
        const Value i = eval(n.a);
        if (i < 0 || static_cast<std::uint64_t>(i) >= arr.size())
          fault(Status::RuntimeError,
                "index " + std::to_string(i) + " out of bounds for '" +
                    prog.arrays_[static_cast<std::size_t>(n.slot)].name + "'");
        return arr[static_cast<std::size_t>(i)];
      }
      case Op::Neg: {
        const Value v = eval(n.a);
        if (__builtin_sub_overflow(Value{0}, v, &r)) fault(Status::RuntimeError, "overflow");
        return r;
      }
      case Op::Not: return eval(n.a) == 0 ? 1 : 0;
      case Op::And: return eval(n.a) != 0 && eval(n.b) != 0 ? 1 : 0;
      case Op::Or: return eval(n.a) != 0 || eval(n.b) != 0 ? 1 : 0;
      default: break;
    }
    const Value a = eval(n.a);
    const Value b = eval(n.b);
    switch (n.op) {
      case Op::Add:
        if (__builtin_add_overflow(a, b, &r)) fault(Status::RuntimeError, "overflow");
        return r;
      case Op::Sub:
        if (__builtin_sub_overflow(a, b, &r)) fault(Status::RuntimeError, "overflow");
        return r;
      case Op::Mul:
        if (__builtin_mul_overflow(a, b, &r)) fault(Status::RuntimeError, "overflow");
        return r;
      case Op::Div:
        if (b == 0) fault(Status::RuntimeError, "division by zero");
        if (a == std::numeric_limits<Value>::min() && b == -1)
          fault(Status::RuntimeError, "overflow");
        return a / b;
      case Op::Lt: return a < b;
      case Op::Le: return a <= b;
      case Op::Gt: return a > b;
      case Op::Ge: return a >= b;
      case Op::Eq: return a == b;
      case Op::Ne: return a != b;
      default: return 0;
    }
  }

  void store_idx(int array, Value index, Value v) {
    auto& arr = arrays[static_cast<std::size_t>(array)];
    if (index < 0 || static_cast<std::uint64_t>(index) >= arr.size())
      fault(Status::RuntimeError,
            "index " + std::to_string(index) + " out of bounds for '" +
                prog.arrays_[static_cast<std::size_t>(array)].name + "'");
    arr[static_cast<std::size_t>(index)] = v;
  }

  Value read_stream() {
    if (stream_pos >= input.stream.size()) fault(Status::InputExhausted, {});
    return input.stream[stream_pos++];
  }

  Flow exec_list(const std::vector<int>& list) {
    for (int i : list)
      if (exec(i) == Flow::Break) return Flow::Break;
    return Flow::Normal;
  }

  Flow exec(int idx) {
    const CStmt& s = prog.stmts_[static_cast<std::size_t>(idx)];
    switch (s.kind) {
      case Kind::Assign: {
        if (!s.counter) tick();
        const Value v = eval(s.value);
        vals[static_cast<std::size_t>(s.slot)] = v;
        present[static_cast<std::size_t>(s.slot)] = 1;
        return Flow::Normal;
      }
      case Kind::AssignIdx: {
        tick();
        const Value i = eval(s.index);
        store_idx(s.slot, i, eval(s.value));
        return Flow::Normal;
      }
      case Kind::Read: {
        tick();
        vals[static_cast<std::size_t>(s.slot)] = read_stream();
        present[static_cast<std::size_t>(s.slot)] = 1;
        return Flow::Normal;
      }
      case Kind::ReadIdx: {
        tick();
        const Value i = eval(s.index);
        store_idx(s.slot, i, read_stream());
        return Flow::Normal;
      }
      case Kind::If:
        tick();
        return eval(s.cond) != 0 ? exec_list(s.body) : exec_list(s.orelse);
      case Kind::While:
      case Kind::For:
        exec_list(s.init);
        for (;;) {
          tick();
          if (eval(s.cond) == 0) break;
          if (exec_list(s.body) == Flow::Break) break;
          exec_list(s.update);
        }
        sample(s.point);
        return Flow::Normal;
      case Kind::Break: tick(); return Flow::Break;
      case Kind::Skip: tick(); return Flow::Normal;
    }
    return Flow::Normal;
  }

  void bind() {
    for (std::size_t k = 0; k < prog.program_.params.size(); ++k) {
      const auto& prm = prog.program_.params[k];
      if (prm.is_array) continue;
      auto it = input.scalars.find(prm.name);
      if (it == input.scalars.end())
        fault(Status::RuntimeError, "missing value for parameter '" + prm.name + "'");
      const int sl = prog.slot(prm.name);
      vals[static_cast<std::size_t>(sl)] = it->second;
      present[static_cast<std::size_t>(sl)] = 1;
    }
    arrays.resize(prog.arrays_.size());
    for (std::size_t k = 0; k < prog.arrays_.size(); ++k) {
      const auto& ap = prog.arrays_[k];
      const Value len = eval(ap.length);
      if (len < 0) fault(Status::RuntimeError, "negative length for array '" + ap.name + "'");
      auto it = input.arrays.find(ap.name);
      if (it == input.arrays.end())
        fault(Status::RuntimeError, "missing value for array parameter '" + ap.name + "'");
      if (it->second.size() > static_cast<std::uint64_t>(len))
        fault(Status::RuntimeError, "array '" + ap.name + "' longer than its declared length");
      arrays[k] = it->second;
      arrays[k].resize(static_cast<std::size_t>(len), 0);
    }
  }
};

inline RunResult CompiledProgram::run(const TestInput& input, std::uint64_t budget,
                                      TraceSink* sink) const {
  Machine m{*this, input, budget, sink, {}, {}, {}, 0, 0};
  m.vals.assign(slot_names_.size(), 0);
  m.present.assign(slot_names_.size(), 0);
  RunResult r;
  try {
    m.bind();
    m.sample(0);
    m.exec_list(top_);
    r.status = Status::Completed;
    m.sample(1);
  } catch (const detail::Fault& f) {
    r.status = f.status;
    r.error = f.message;
    if (f.status == Status::InputExhausted) m.sample(1);
  }
  r.steps = m.steps;
  for (const auto& [name, sl] : output_slots_) {
    if (sl >= 0 && m.present[static_cast<std::size_t>(sl)])
      r.outputs.emplace(name, m.vals[static_cast<std::size_t>(sl)]);
  }
  return r;
}

/// Records every sampled point into a Trace.
class TraceRecorder final : public TraceSink {
 public:
  void on_point(const CompiledProgram& program, int point, std::span<const Value> values,
                std::span<const std::uint8_t> present) override {
    TracePoint tp;
    tp.point = program.point_names()[static_cast<std::size_t>(point)];
    const auto& names = program.slot_names();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (present[i]) tp.values.emplace_back(names[i], values[i]);
    trace.points.push_back(std::move(tp));
  }
  Trace trace;
};

/// Runs `p` once and returns its full trace. Compiles on every call; use
/// CompiledProgram directly for repeated runs.
inline RunResult run(const lang::Program& p, const TestInput& input, std::uint64_t budget) {
  CompiledProgram cp(p);
  TraceRecorder rec;
  auto r = cp.run(input, budget, &rec);
  r.trace = std::move(rec.trace);
  return r;
}

}  // namespace perfrepair::exec
