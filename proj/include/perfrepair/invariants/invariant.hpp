#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "perfrepair/lang/ast.hpp"

namespace perfrepair::invariants {

using Value = std::int64_t;
/// Wide enough for any difference of two Values.
using Wide = __int128;

/// The six candidate shapes. `v`/`w` are variable names, `c` an integer.
enum class Form {
  EqConst,   // v == c
  LeConst,   // v <= c
  GeConst,   // v >= c
  EqVar,     // v == w      (v < w)
  LeVar,     // v <= w
  EqOffset,  // v == w + c  (v < w, c != 0)
};

inline const char* to_string(Form f) {
  switch (f) {
    case Form::EqConst: return "eq_const";
    case Form::LeConst: return "le_const";
    case Form::GeConst: return "ge_const";
    case Form::EqVar: return "eq_var";
    case Form::LeVar: return "le_var";
    case Form::EqOffset: return "eq_offset";
  }
  return "?";
}

inline bool is_binary(Form f) { return f == Form::EqVar || f == Form::LeVar || f == Form::EqOffset; }

struct Invariant {
  std::string point;
  Form form = Form::EqConst;
  std::string lhs;
  std::string rhs;  // binary forms only
  Value constant = 0;
  std::uint64_t support = 0;

  auto key() const { return std::tie(point, lhs, form, rhs, constant); }
  friend bool operator<(const Invariant& a, const Invariant& b) { return a.key() < b.key(); }
  /// Syntactic identity; support is bookkeeping, not part of the predicate.
  friend bool operator==(const Invariant& a, const Invariant& b) { return a.key() == b.key(); }

  std::vector<std::string> variables() const {
    if (is_binary(form)) return {lhs, rhs};
    return {lhs};
  }

  bool mentions_counter() const {
    return lang::is_counter_name(lhs) || (is_binary(form) && lang::is_counter_name(rhs));
  }
};

// Canonical constructors.
inline Invariant eq_const(std::string point, std::string v, Value c) {
  return {std::move(point), Form::EqConst, std::move(v), {}, c, 0};
}
inline Invariant le_const(std::string point, std::string v, Value c) {
  return {std::move(point), Form::LeConst, std::move(v), {}, c, 0};
}
inline Invariant ge_const(std::string point, std::string v, Value c) {
  return {std::move(point), Form::GeConst, std::move(v), {}, c, 0};
}
inline Invariant eq_var(std::string point, std::string v, std::string w) {
  if (w < v) std::swap(v, w);
  return {std::move(point), Form::EqVar, std::move(v), std::move(w), 0, 0};
}
/// v <= w. `v >= w` is expressed by swapping the arguments.
inline Invariant le_var(std::string point, std::string v, std::string w) {
  return {std::move(point), Form::LeVar, std::move(v), std::move(w), 0, 0};
}
/// v == w + c, normalised so the lexicographically smaller name is on the left.
inline Invariant eq_offset(std::string point, std::string v, std::string w, Value c) {
  if (c == 0) return eq_var(std::move(point), std::move(v), std::move(w));
  if (w < v) {
    std::swap(v, w);
    c = -c;
  }
  return {std::move(point), Form::EqOffset, std::move(v), std::move(w), c, 0};
}

inline std::string to_string(const Invariant& inv) {
  switch (inv.form) {
    case Form::EqConst: return inv.lhs + " == " + std::to_string(inv.constant);
    case Form::LeConst: return inv.lhs + " <= " + std::to_string(inv.constant);
    case Form::GeConst: return inv.lhs + " >= " + std::to_string(inv.constant);
    case Form::EqVar: return inv.lhs + " == " + inv.rhs;
    case Form::LeVar: return inv.lhs + " <= " + inv.rhs;
    case Form::EqOffset: {
      // magnitude via unsigned arithmetic so INT64_MIN prints correctly
      const auto mag = inv.constant < 0 ? 0 - static_cast<std::uint64_t>(inv.constant)
                                        : static_cast<std::uint64_t>(inv.constant);
      return inv.lhs + " == " + inv.rhs + (inv.constant < 0 ? " - " : " + ") +
             std::to_string(mag);
    }
  }
  return "?";
}

enum class Provenance { FromPassing, FromFailing, Refined, Combined };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::FromPassing: return "passing";
    case Provenance::FromFailing: return "failing";
    case Provenance::Refined: return "refined";
    case Provenance::Combined: return "combined";
  }
  return "?";
}

/// Point-indexed invariants kept in canonical order. `points` lists every
/// program point that was sampled at least once, even when nothing held there.
class InvariantSet {
 public:
  InvariantSet() = default;
  explicit InvariantSet(Provenance p) : provenance_(p) {}

  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }

  const std::vector<Invariant>& members() const { return members_; }
  const std::set<std::string>& points() const { return points_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  void add_point(const std::string& point) { points_.insert(point); }

  /// Inserts keeping canonical order; a duplicate keeps the larger support.
  void insert(Invariant inv) {
    points_.insert(inv.point);
    auto it = std::lower_bound(members_.begin(), members_.end(), inv);
    if (it != members_.end() && *it == inv) {
      it->support = std::max(it->support, inv.support);
      return;
    }
    members_.insert(it, std::move(inv));
  }

  bool contains(const Invariant& inv) const {
    return std::binary_search(members_.begin(), members_.end(), inv);
  }

  std::vector<Invariant> at(const std::string& point) const {
    std::vector<Invariant> out;
    for (const auto& m : members_)
      if (m.point == point) out.push_back(m);
    return out;
  }

  template <typename Pred>
  InvariantSet filter(Pred&& keep) const {
    InvariantSet out(provenance_);
    out.points_ = points_;
    for (const auto& m : members_)
      if (keep(m)) out.members_.push_back(m);
    return out;
  }

  friend bool operator==(const InvariantSet& a, const InvariantSet& b) {
    return a.members_ == b.members_ && a.points_ == b.points_;
  }

 private:
  Provenance provenance_ = Provenance::Combined;
  std::vector<Invariant> members_;
  std::set<std::string> points_;
};

}  // namespace perfrepair::invariants
