#pragma once

#include <limits>
#include <vector>

#include "perfrepair/error.hpp"
#include "perfrepair/exec/interpreter.hpp"
#include "perfrepair/invariants/summary.hpp"

namespace perfrepair::invariants {

class EmptyTraceSet : public Error {
 public:
  EmptyTraceSet() : Error("cannot infer invariants from an empty trace set") {}
};

namespace detail {

inline bool fits(Wide w) {
  return w >= std::numeric_limits<Value>::min() && w <= std::numeric_limits<Value>::max();
}

inline void infer_point(const std::string& point, const PointStats& st, InvariantSet& out) {
  out.add_point(point);
  if (st.samples == 0) return;
  const auto n = st.vars.size();
  auto emit = [&](Invariant inv) {
    inv.support = st.samples;
    out.insert(std::move(inv));
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!st.always_present(static_cast<int>(i))) continue;
    const auto& v = st.vars[i];
    emit(le_const(point, v, st.max[i]));
    emit(ge_const(point, v, st.min[i]));
    if (st.min[i] == st.max[i]) emit(eq_const(point, v, st.min[i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!st.always_present(static_cast<int>(i))) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!st.always_present(static_cast<int>(j))) continue;
      const auto k = st.pair_index(i, j);
      const Wide lo = st.dmin[k];
      const Wide hi = st.dmax[k];
      const auto& v = st.vars[i];
      const auto& w = st.vars[j];
      if (hi <= 0) emit(le_var(point, v, w));
      if (lo >= 0) emit(le_var(point, w, v));
      if (lo == hi && fits(lo)) emit(eq_offset(point, v, w, static_cast<Value>(lo)));
    }
  }
}

}  // namespace detail

/// Every grammar instance that holds on all samples of its point. Bounds use
/// the observed extremes; equalities are emitted only for constant values or
/// constant differences. Only variables present in every sample of a point
/// take part.
inline InvariantSet infer(const SampleSummary& summary, Provenance provenance) {
  InvariantSet out(provenance);
  for (const auto& [point, stats] : summary.points()) detail::infer_point(point, stats, out);
  return out;
}

inline InvariantSet infer(const std::vector<exec::Trace>& traces,
                          Provenance provenance = Provenance::Combined) {
  if (traces.empty()) throw EmptyTraceSet();
  SampleSummary s;
  for (const auto& t : traces) s.add(t);
  return infer(s, provenance);
}

}  // namespace perfrepair::invariants
