#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "perfrepair/exec/interpreter.hpp"
#include "perfrepair/invariants/invariant.hpp"

namespace perfrepair::invariants {


/// Sufficient statistics for every grammar instance at one program point:
/// per-variable extremes and per-pair difference extremes, with presence
/// counts. Every candidate can be decided from these alone, so traces never
/// need to be kept in memory.
struct PointStats {
  std::vector<std::string> vars;  // sorted
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> present;
  std::vector<Value> min, max;
  // upper-triangular (i < j), difference vars[i] - vars[j]
  std::vector<std::uint64_t> pair_present;
  std::vector<Wide> dmin, dmax;

  explicit PointStats(std::vector<std::string> names = {}) : vars(std::move(names)) {
    const auto n = vars.size();
    present.assign(n, 0);
    min.assign(n, std::numeric_limits<Value>::max());
    max.assign(n, std::numeric_limits<Value>::min());
    const auto pairs = n * (n > 0 ? n - 1 : 0) / 2;
    pair_present.assign(pairs, 0);
    dmin.assign(pairs, std::numeric_limits<Wide>::max());
    dmax.assign(pairs, std::numeric_limits<Wide>::min());
  }

  std::size_t pair_index(std::size_t i, std::size_t j) const {
    // i < j
    const auto n = vars.size();
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
  }

  int index_of(const std::string& name) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), name);
    if (it == vars.end() || *it != name) return -1;
    return static_cast<int>(it - vars.begin());
  }

  bool always_present(int i) const {
    return i >= 0 && present[static_cast<std::size_t>(i)] == samples;
  }

  void add(const std::vector<Value>& values, const std::vector<std::uint8_t>& has) {
    ++samples;
    const auto n = vars.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!has[i]) continue;
      ++present[i];
      min[i] = std::min(min[i], values[i]);
      max[i] = std::max(max[i], values[i]);
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!has[i]) {
        k += n - i - 1;
        continue;
      }
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        if (!has[j]) continue;
        const Wide d = static_cast<Wide>(values[i]) - static_cast<Wide>(values[j]);
        ++pair_present[k];
        dmin[k] = std::min(dmin[k], d);
        dmax[k] = std::max(dmax[k], d);
      }
    }
  }

  /// Folds `other` in; variables are matched by name.
  void merge(const PointStats& other) {
    std::vector<std::string> names = vars;
    names.insert(names.end(), other.vars.begin(), other.vars.end());
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    if (names != vars) {
      PointStats grown(names);
      grown.absorb(*this);
      *this = std::move(grown);
    }
    absorb(other);
  }

 private:
  void absorb(const PointStats& o) {
    samples += o.samples;
    std::vector<std::size_t> map(o.vars.size());
    for (std::size_t i = 0; i < o.vars.size(); ++i)
      map[i] = static_cast<std::size_t>(index_of(o.vars[i]));
    for (std::size_t i = 0; i < o.vars.size(); ++i) {
      const auto t = map[i];
      present[t] += o.present[i];
      if (o.present[i]) {
        min[t] = std::min(min[t], o.min[i]);
        max[t] = std::max(max[t], o.max[i]);
      }
    }
    for (std::size_t i = 0; i < o.vars.size(); ++i) {
      for (std::size_t j = i + 1; j < o.vars.size(); ++j) {
        const auto src = o.pair_index(i, j);
        if (!o.pair_present[src]) continue;
        // map preserves order because both name lists are sorted
        const auto dst = pair_index(map[i], map[j]);
        pair_present[dst] += o.pair_present[src];
        dmin[dst] = std::min(dmin[dst], o.dmin[src]);
        dmax[dst] = std::max(dmax[dst], o.dmax[src]);
      }
    }
  }
};

/// Per-point statistics, keyed by point id.
class SampleSummary {
 public:
  const std::map<std::string, PointStats>& points() const { return points_; }

  const PointStats* at(const std::string& point) const {
    auto it = points_.find(point);
    return it == points_.end() ? nullptr : &it->second;
  }

  PointStats& slot(const std::string& point, const std::vector<std::string>& vars) {
    auto it = points_.find(point);
    if (it == points_.end()) it = points_.emplace(point, PointStats(vars)).first;
    return it->second;
  }

  void merge(const SampleSummary& other) {
    for (const auto& [point, stats] : other.points_) {
      auto it = points_.find(point);
      if (it == points_.end()) {
        points_.emplace(point, stats);
      } else {
        it->second.merge(stats);
      }
    }
  }

  void add(const exec::TracePoint& tp) {
    std::vector<std::string> names;
    std::vector<Value> values;
    for (const auto& [n, v] : tp.values) {
      names.push_back(n);
      values.push_back(v);
    }
    // TracePoint values are sorted by name
    PointStats one(names);
    one.add(values, std::vector<std::uint8_t>(names.size(), 1));
    auto it = points_.find(tp.point);
    if (it == points_.end()) {
      points_.emplace(tp.point, std::move(one));
    } else {
      it->second.merge(one);
    }
  }

  void add(const exec::Trace& t) {
    for (const auto& tp : t.points) add(tp);
  }

 private:
  std::map<std::string, PointStats> points_;
};

/// TraceSink that accumulates a SampleSummary while the program runs.
class SummarySink final : public exec::TraceSink {
 public:
  void on_point(const exec::CompiledProgram& program, int point, std::span<const Value> values,
                std::span<const std::uint8_t> present) override {
    if (by_point_.size() < program.point_names().size())
      by_point_.resize(program.point_names().size(), nullptr);
    auto& stats = by_point_[static_cast<std::size_t>(point)];
    if (!stats) stats = &summary.slot(program.point_names()[static_cast<std::size_t>(point)],
                                      program.slot_names());
    values_.assign(values.begin(), values.end());
    present_.assign(present.begin(), present.end());
    stats->add(values_, present_);
  }

  SampleSummary summary;

 private:
  std::vector<PointStats*> by_point_;
  std::vector<Value> values_;
  std::vector<std::uint8_t> present_;
};

/// Whether `inv` holds on every sample in `stats`. With no samples it holds
/// vacuously. A variable missing from any sample falsifies the invariant.
inline bool holds(const Invariant& inv, const PointStats& stats) {
  if (stats.samples == 0) return true;
  const int v = stats.index_of(inv.lhs);
  if (!stats.always_present(v)) return false;
  const auto vi = static_cast<std::size_t>(v);
  switch (inv.form) {
    case Form::EqConst: return stats.min[vi] == inv.constant && stats.max[vi] == inv.constant;
    case Form::LeConst: return stats.max[vi] <= inv.constant;
    case Form::GeConst: return stats.min[vi] >= inv.constant;
    default: break;
  }
  const int w = stats.index_of(inv.rhs);
  if (!stats.always_present(w) || v == w) return false;
  // difference lhs - rhs
  Wide lo, hi;
  const auto wi = static_cast<std::size_t>(w);
  if (vi < wi) {
    const auto k = stats.pair_index(vi, wi);
    lo = stats.dmin[k];
    hi = stats.dmax[k];
  } else {
    const auto k = stats.pair_index(wi, vi);
    lo = -stats.dmax[k];
    hi = -stats.dmin[k];
  }
  switch (inv.form) {
    case Form::EqVar: return lo == 0 && hi == 0;
    case Form::LeVar: return hi <= 0;
    case Form::EqOffset: return lo == inv.constant && hi == inv.constant;
    default: return false;
  }
}

}  // namespace perfrepair::invariants
