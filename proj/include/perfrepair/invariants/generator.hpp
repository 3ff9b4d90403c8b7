#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "perfrepair/exec/interpreter.hpp"

namespace perfrepair::invariants {

using exec::TestInput;
using Value = std::int64_t;

struct GeneratedInput {
  TestInput input;
  /// Step threshold inherited from the test the input was derived from.
  std::optional<std::uint64_t> threshold;
  std::string origin;
};

/// Source of inputs for falsification runs. Deterministic for a fixed seed.
class InputGenerator {
 public:
  virtual ~InputGenerator() = default;
  virtual std::vector<GeneratedInput> generate(std::size_t count) const = 0;
};

struct Range {
  Value lo = 0;
  Value hi = 0;
  std::uint64_t size() const { return hi < lo ? 0 : static_cast<std::uint64_t>(hi - lo) + 1; }
};

namespace detail {

inline Value draw(std::mt19937_64& rng, const Range& r) {
  const auto n = r.size();
  if (n == 0) return r.lo;
  return r.lo + static_cast<Value>(rng() % n);
}

}  // namespace detail

/// Draws inputs from declared value domains. When the domain has no arrays or
/// stream and its scalar product fits in `count`, every combination is
/// enumerated in lexicographic order; otherwise inputs are sampled.
class DomainGenerator final : public InputGenerator {
 public:
  struct ArraySpec {
    Range length;
    Range values;
  };

  std::map<std::string, Range> scalars;
  std::map<std::string, ArraySpec> arrays;
  Range stream_length{0, 0};
  Range stream_values{0, 0};
  std::uint64_t seed = 1;
  /// Step threshold attached to every generated input.
  std::optional<std::uint64_t> threshold;

  bool exhaustive_for(std::size_t count) const {
    if (!arrays.empty() || stream_length.hi > 0) return false;
    std::uint64_t product = 1;
    for (const auto& [_, r] : scalars) {
      if (r.size() == 0) return false;
      if (product > count / r.size() + 1) return false;
      product *= r.size();
    }
    return product <= count;
  }

  std::vector<GeneratedInput> generate(std::size_t count) const override {
    std::vector<GeneratedInput> out;
    if (count == 0) return out;
    if (exhaustive_for(count)) {
      std::vector<std::pair<std::string, Range>> dims(scalars.begin(), scalars.end());
      std::vector<Value> cur;
      for (const auto& d : dims) cur.push_back(d.second.lo);
      for (;;) {
        GeneratedInput g;
        for (std::size_t i = 0; i < dims.size(); ++i) g.input.scalars[dims[i].first] = cur[i];
        g.origin = "domain#" + std::to_string(out.size());
        g.threshold = threshold;
        out.push_back(std::move(g));
        std::size_t k = dims.size();
        while (k > 0) {
          --k;
          if (cur[k] < dims[k].second.hi) {
            ++cur[k];
            break;
          }
          cur[k] = dims[k].second.lo;
          if (k == 0) return out;
        }
        if (dims.empty()) return out;
      }
    }
    std::mt19937_64 rng(seed);
    for (std::size_t n = 0; n < count; ++n) {
      GeneratedInput g;
      for (const auto& [name, r] : scalars) g.input.scalars[name] = detail::draw(rng, r);
      for (const auto& [name, spec] : arrays) {
        const auto len = static_cast<std::size_t>(std::max<Value>(0, detail::draw(rng, spec.length)));
        auto& arr = g.input.arrays[name];
        for (std::size_t i = 0; i < len; ++i) arr.push_back(detail::draw(rng, spec.values));
      }
      const auto slen = static_cast<std::size_t>(std::max<Value>(0, detail::draw(rng, stream_length)));
      for (std::size_t i = 0; i < slen; ++i) g.input.stream.push_back(detail::draw(rng, stream_values));
      g.origin = "domain#" + std::to_string(n);
      g.threshold = threshold;
      out.push_back(std::move(g));
    }
    return out;
  }
};

/// Derives inputs from seed tests by overwriting one to three array or stream
/// elements. Replacement values come from `alphabet`, or from every value in
/// the seeds when it is empty. `fields` names the arrays (and "stream") that
/// may be edited; empty means all. Scalars are kept, so lengths and
/// capacities stay consistent.
class PerturbGenerator final : public InputGenerator {
 public:
  struct SeedInput {
    std::string id;
    TestInput input;
    std::optional<std::uint64_t> threshold;
  };

  PerturbGenerator(std::vector<SeedInput> seeds, std::uint64_t seed,
                   std::vector<Value> alphabet = {}, std::set<std::string> fields = {})
      : seeds_(std::move(seeds)), seed_(seed), fields_(std::move(fields)) {
    std::set<Value> values(alphabet.begin(), alphabet.end());
    if (values.empty()) {
      for (const auto& s : seeds_) {
        for (const auto& [_, arr] : s.input.arrays) values.insert(arr.begin(), arr.end());
        values.insert(s.input.stream.begin(), s.input.stream.end());
      }
    }
    alphabet_.assign(values.begin(), values.end());
  }

  std::vector<GeneratedInput> generate(std::size_t count) const override {
    std::vector<GeneratedInput> out;
    if (seeds_.empty()) return out;
    std::mt19937_64 rng(seed_);
    for (std::size_t n = 0; n < count; ++n) {
      const auto& base = seeds_[n % seeds_.size()];
      GeneratedInput g;
      g.input = base.input;
      g.threshold = base.threshold;
      g.origin = base.id + "~" + std::to_string(n / seeds_.size());
      // editable cells, arrays in name order then the stream
      std::vector<std::vector<Value>*> targets;
      for (auto& [name, arr] : g.input.arrays)
        if (editable(name)) targets.push_back(&arr);
      if (editable("stream")) targets.push_back(&g.input.stream);
      std::size_t cells = 0;
      for (const auto* t : targets) cells += t->size();
      if (cells > 0 && !alphabet_.empty()) {
        const auto edits = 1 + rng() % 3;
        for (std::uint64_t e = 0; e < edits; ++e) {
          auto pos = static_cast<std::size_t>(rng() % cells);
          const Value v = alphabet_[static_cast<std::size_t>(rng() % alphabet_.size())];
          for (auto* t : targets) {
            if (pos < t->size()) {
              (*t)[pos] = v;
              break;
            }
            pos -= t->size();
          }
        }
      }
      out.push_back(std::move(g));
    }
    return out;
  }

 private:
  std::vector<SeedInput> seeds_;
  std::uint64_t seed_;
  std::set<std::string> fields_;
  std::vector<Value> alphabet_;

  bool editable(const std::string& name) const { return fields_.empty() || fields_.count(name); }
};

}  // namespace perfrepair::invariants
