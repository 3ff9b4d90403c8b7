#pragma once

#include <cstdint>
#include <vector>
#include <set>
#include <string>

#include "perfrepair/exec/interpreter.hpp"
#include "perfrepair/invariants/implies.hpp"
#include "perfrepair/lang/ast.hpp"

namespace perfrepair::invariants {

struct SpecOptions {
  /// Invariants seen on fewer samples than this are discarded as noise.
  std::uint64_t min_support = 2;
  /// Entry invariants over parameters only restate the input domain.
  bool drop_input_bounds = true;
  /// Performance mode. Failing runs of a performance bug still compute the
  /// right outputs, so functional differences between the two sets describe
  /// the test inputs rather than the bug. In this mode only invariants that
  /// mention a counter are flagged, and a candidate is not flagged when it
  /// follows from the failing side's functional invariants together with the
  /// failing-side invariants that good already implies.
  bool efficiency_only = false;
};

/// The two halves of a performance specification: what every fast run
/// satisfies, and what slow runs satisfy that fast runs do not imply.
struct Spec {
  InvariantSet correct{Provenance::Refined};
  InvariantSet violated{Provenance::Refined};
};

inline bool is_input_bound(const Invariant& inv, const std::set<std::string>& params) {
  if (inv.point != exec::kEntryPoint) return false;
  for (const auto& v : inv.variables())
    if (!params.count(v)) return false;
  return true;
}

inline std::set<std::string> param_names(const lang::Program& p) {
  std::set<std::string> out;
  for (const auto& prm : p.params) out.insert(prm.name);
  return out;
}

inline InvariantSet apply_filters(const InvariantSet& s, const std::set<std::string>& params,
                                  const SpecOptions& opt) {
  return s.filter([&](const Invariant& inv) {
    if (inv.support < opt.min_support) return false;
    if (opt.drop_input_bounds && is_input_bound(inv, params)) return false;
    return true;
  });
}

namespace detail {

inline bool entails(const DifferenceClosure& c, const Invariant& inv) {
  for (const auto& at : atoms(inv))
    if (!c.entails(at)) return false;
  return true;
}

}  // namespace detail

/// correct = filtered good; violated = filtered mix members that good does
/// not imply at their point.
inline Spec build_spec(const InvariantSet& good, const InvariantSet& mix,
                       const std::set<std::string>& params, const SpecOptions& opt = {}) {
  Spec spec;
  spec.correct = apply_filters(good, params, opt);
  spec.correct.set_provenance(good.provenance());
  const auto candidates = apply_filters(mix, params, opt);
  spec.violated = InvariantSet(mix.provenance());
  for (const auto& p : candidates.points()) spec.violated.add_point(p);

  for (const auto& point : candidates.points()) {
    const auto here = candidates.at(point);
    detail::DifferenceClosure by_good(spec.correct.at(point));
    if (!opt.efficiency_only) {
      for (const auto& inv : here)
        if (!detail::entails(by_good, inv)) spec.violated.insert(inv);
      continue;
    }
    // every member of `context` holds on the failing samples, so it is satisfiable
    std::vector<Invariant> context;
    for (const auto& inv : here)
      if (!inv.mentions_counter() || detail::entails(by_good, inv)) context.push_back(inv);
    detail::DifferenceClosure by_context(context);
    for (const auto& inv : here)
      if (inv.mentions_counter() && !detail::entails(by_context, inv)) spec.violated.insert(inv);
  }
  return spec;
}

}  // namespace perfrepair::invariants
