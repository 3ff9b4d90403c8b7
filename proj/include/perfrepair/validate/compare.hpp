#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "perfrepair/error.hpp"
#include "perfrepair/exec/interpreter.hpp"
#include "perfrepair/invariants/implies.hpp"
#include "perfrepair/invariants/invariant.hpp"
#include "perfrepair/invariants/spec.hpp"

namespace perfrepair::validate {

using invariants::Invariant;
using invariants::InvariantSet;
using invariants::Value;

class PointMismatch : public Error {
 public:
  using Error::Error;
};

class MissingCounter : public Error {
 public:
  using Error::Error;
};

/// `point: predicate`, the form used in evidence and reports.
inline std::string describe(const Invariant& inv) { return inv.point + ": " + invariants::to_string(inv); }

/// Functional invariants (no counters) at entry and exit, the points every
/// version of a program shares.
inline InvariantSet functional_part(const InvariantSet& s) {
  InvariantSet out(s.provenance());
  for (const auto p : {exec::kEntryPoint, exec::kExitPoint})
    if (s.points().count(std::string(p))) out.add_point(std::string(p));
  for (const auto& inv : s.members())
    if (!inv.mentions_counter() && out.points().count(inv.point)) out.insert(inv);
  return out;
}

/// Upper bound of every counter with a constant bound at exit.
inline std::map<std::string, Value> counter_bounds(const InvariantSet& s) {
  std::map<std::string, Value> out;
  for (const auto& inv : s.members()) {
    if (inv.point != exec::kExitPoint || invariants::is_binary(inv.form)) continue;
    if (!lang::is_counter_name(inv.lhs)) continue;
    if (inv.form != invariants::Form::LeConst && inv.form != invariants::Form::EqConst) continue;
    auto [it, fresh] = out.emplace(inv.lhs, inv.constant);
    if (!fresh) it->second = std::min(it->second, inv.constant);
  }
  return out;
}

namespace detail {

inline bool covers(const InvariantSet& hyp, const InvariantSet& concl, std::vector<Invariant>* missing) {
  bool all = true;
  for (const auto& p : concl.points()) {
    invariants::detail::DifferenceClosure closure(hyp.at(p));
    for (const auto& inv : concl.at(p)) {
      if (invariants::detail::entails(closure, inv)) continue;
      all = false;
      if (!missing) return false;
      missing->push_back(inv);
    }
  }
  return all;
}

}  // namespace detail

/// Mutual implication, point by point. Throws PointMismatch when the point
/// sets differ.
inline bool sema_eq(const InvariantSet& a, const InvariantSet& b) {
  if (a.points() != b.points()) throw PointMismatch("invariant sets cover different program points");
  return detail::covers(b, a, nullptr) && detail::covers(a, b, nullptr);
}

/// Members of `a` that `b` does not imply, point by point.
inline std::vector<Invariant> not_implied(const InvariantSet& a, const InvariantSet& b) {
  std::vector<Invariant> out;
  detail::covers(b, a, &out);
  return out;
}

/// Strict improvement of exit counter bounds: none larger, one smaller. A
/// counter absent from `patched` counts as 0. Throws MissingCounter when
/// `patched` bounds a counter that `original` does not.
inline bool pred_sm(const InvariantSet& patched, const InvariantSet& original) {
  const auto p = counter_bounds(patched);
  const auto o = counter_bounds(original);
  for (const auto& [name, _] : p)
    if (!o.count(name)) throw MissingCounter("original has no bound for " + name);
  bool strict = false;
  for (const auto& [name, bound] : o) {
    auto it = p.find(name);
    const Value pb = it == p.end() ? 0 : it->second;
    if (pb > bound) return false;
    strict = strict || pb < bound;
  }
  return strict;
}

}  // namespace perfrepair::validate
