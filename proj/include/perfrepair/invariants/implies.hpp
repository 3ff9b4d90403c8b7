#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "perfrepair/invariants/invariant.hpp"

namespace perfrepair::invariants {

namespace detail {

// Every grammar form is a conjunction of difference constraints
// `a - b <= c`, where a bare variable is measured against a zero node.
struct DiffAtom {
  std::string a, b;  // empty name = zero node
  Wide c;
};

inline std::vector<DiffAtom> atoms(const Invariant& inv) {
  const Wide c = inv.constant;
  switch (inv.form) {
    case Form::EqConst: return {{inv.lhs, "", c}, {"", inv.lhs, -c}};
    case Form::LeConst: return {{inv.lhs, "", c}};
    case Form::GeConst: return {{"", inv.lhs, -c}};
    case Form::EqVar: return {{inv.lhs, inv.rhs, 0}, {inv.rhs, inv.lhs, 0}};
    case Form::LeVar: return {{inv.lhs, inv.rhs, 0}};
    case Form::EqOffset: return {{inv.lhs, inv.rhs, c}, {inv.rhs, inv.lhs, -c}};
  }
  return {};
}

/// All-pairs tightest bounds on `x - y` implied by a set of difference
/// constraints. Integer difference systems have integral solutions whenever
/// they are feasible, so this is exact over the integers.
class DifferenceClosure {
 public:
  explicit DifferenceClosure(const std::vector<Invariant>& hyp) {
    index("");
    for (const auto& h : hyp)
      for (const auto& at : atoms(h)) {
        index(at.a);
        index(at.b);
      }
    const auto n = names_.size();
    dist_.assign(n * n, kInf);
    for (std::size_t i = 0; i < n; ++i) dist_[i * n + i] = 0;
    for (const auto& h : hyp)
      for (const auto& at : atoms(h)) {
        // a - b <= c : edge b -> a with weight c
        auto& d = dist_[index(at.b) * n + index(at.a)];
        d = std::min(d, at.c);
      }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const Wide ik = dist_[i * n + k];
        if (ik == kInf) continue;
        for (std::size_t j = 0; j < n; ++j) {
          const Wide kj = dist_[k * n + j];
          if (kj == kInf) continue;
          auto& ij = dist_[i * n + j];
          ij = std::min(ij, ik + kj);
        }
      }
    for (std::size_t i = 0; i < n; ++i)
      if (dist_[i * n + i] < 0) infeasible_ = true;
  }

  bool infeasible() const { return infeasible_; }

  /// Whether `a - b <= c` follows.
  bool entails(const DiffAtom& at) const {
    if (infeasible_) return true;
    if (at.a == at.b) return 0 <= at.c;
    auto ia = find(at.a);
    auto ib = find(at.b);
    if (ia < 0 || ib < 0) return false;
    const Wide d = dist_[static_cast<std::size_t>(ib) * names_.size() + static_cast<std::size_t>(ia)];
    return d != kInf && d <= at.c;
  }

 private:
  static constexpr Wide kInf = std::numeric_limits<Wide>::max() / 4;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> ids_;
  std::vector<Wide> dist_;
  bool infeasible_ = false;

  std::size_t index(const std::string& n) {
    auto [it, fresh] = ids_.emplace(n, names_.size());
    if (fresh) names_.push_back(n);
    return it->second;
  }
  int find(const std::string& n) const {
    auto it = ids_.find(n);
    return it == ids_.end() ? -1 : static_cast<int>(it->second);
  }
};

}  // namespace detail

/// Sound and complete entailment over the integers for the invariant grammar:
/// true iff every integer valuation satisfying all of `hyp` satisfies
/// `concl`. Members of `hyp` at other program points are ignored.
inline bool implies(const std::vector<Invariant>& hyp, const Invariant& concl) {
  std::vector<Invariant> local;
  for (const auto& h : hyp)
    if (h.point == concl.point) local.push_back(h);
  detail::DifferenceClosure closure(local);
  for (const auto& at : detail::atoms(concl))
    if (!closure.entails(at)) return false;
  return true;
}

inline bool implies(const InvariantSet& hyp, const Invariant& concl) {
  return implies(hyp.at(concl.point), concl);
}

}  // namespace perfrepair::invariants
