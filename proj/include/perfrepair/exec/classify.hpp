#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "perfrepair/exec/interpreter.hpp"

namespace perfrepair::exec {

enum class RunClass { Fast, Slow };

inline const char* to_string(RunClass c) { return c == RunClass::Fast ? "Fast" : "Slow"; }

struct Classification {
  RunClass cls = RunClass::Slow;
  /// Wrong outputs or a crash, as opposed to merely exceeding the threshold.
  bool functional_failure = false;
};

inline bool outputs_match(const RunResult& r, const std::map<std::string, Value>& expected) {
  for (const auto& [name, v] : expected) {
    auto it = r.outputs.find(name);
    if (it == r.outputs.end() || it->second != v) return false;
  }
  return true;
}

/// Fast iff the run terminated normally (input exhaustion counts as normal)
/// with the expected outputs within `threshold` steps.
inline Classification classify(const RunResult& r, const std::map<std::string, Value>& expected,
                               std::uint64_t threshold) {
  Classification c;
  const bool terminated = r.status == Status::Completed || r.status == Status::InputExhausted;
  const bool correct = terminated && outputs_match(r, expected);
  c.functional_failure = r.status == Status::RuntimeError || (terminated && !correct);
  c.cls = correct && r.steps <= threshold ? RunClass::Fast : RunClass::Slow;
  return c;
}

/// Line-oriented dump: `pointId TAB var=value TAB ...`, one line per point.
inline std::string dump(const Trace& t) {
  std::ostringstream os;
  for (const auto& p : t.points) {
    os << p.point;
    for (const auto& [name, v] : p.values) os << '\t' << name << '=' << v;
    os << '\n';
  }
  return os.str();
}

/// Drops counter variables from every point.
inline Trace functional_projection(const Trace& t) {
  Trace out;
  out.points.reserve(t.points.size());
  for (const auto& p : t.points) {
    TracePoint q;
    q.point = p.point;
    for (const auto& kv : p.values)
      if (!lang::is_counter_name(kv.first)) q.values.push_back(kv);
    out.points.push_back(std::move(q));
  }
  return out;
}

}  // namespace perfrepair::exec
