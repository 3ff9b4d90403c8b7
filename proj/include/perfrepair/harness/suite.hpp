#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "perfrepair/error.hpp"
#include "perfrepair/exec/testcase.hpp"
#include "perfrepair/invariants/generator.hpp"
#include "perfrepair/lang/ast.hpp"

namespace perfrepair::harness {

using json = nlohmann::ordered_json;
using exec::TestCase;
using exec::Value;

/// A document does not match its schema. `path` locates the field, as in
/// `cases[3].expected`.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error((path.empty() ? std::string("<root>") : path) + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class DuplicateTestId : public Error {
 public:
  explicit DuplicateTestId(const std::string& id) : Error("duplicate test id '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

/// Missing or unreadable input file.
class FileError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", what + " is not valid JSON: " + e.what());
  }
}

namespace detail {

inline std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline std::string index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline const json& field(const json& obj, const std::string& base, const std::string& key) {
  if (!obj.is_object()) throw SchemaError(base, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(join(base, key), "missing field");
  return *it;
}

inline const json* optional_field(const json& obj, const std::string& base, const std::string& key) {
  if (!obj.is_object()) throw SchemaError(base, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline Value integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<Value>();
}

inline std::uint64_t unsigned_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<Value>() < 0) throw SchemaError(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

inline std::vector<Value> integers(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of integers");
  std::vector<Value> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], index(path, i)));
  return out;
}

inline invariants::Range range(const json& v, const std::string& path) {
  const auto xs = integers(v, path);
  if (xs.size() != 2 || xs[0] > xs[1]) throw SchemaError(path, "expected [lo, hi] with lo <= hi");
  return {xs[0], xs[1]};
}

}  // namespace detail

/// How falsification inputs are produced for a suite.
struct GeneratorSpec {
  enum class Kind { Perturb, Domain };
  Kind kind = Kind::Perturb;
  std::vector<Value> alphabet;     // perturb
  std::set<std::string> fields;    // perturb
  std::map<std::string, invariants::Range> scalars;                         // domain
  std::map<std::string, invariants::DomainGenerator::ArraySpec> arrays;     // domain
  invariants::Range stream_length{0, 0};                                    // domain
  invariants::Range stream_values{0, 0};                                    // domain
  std::optional<std::uint64_t> threshold;                                   // domain
};

struct TestSuite {
  std::filesystem::path program;  // resolved against the suite file
  std::uint64_t budget = 100'000'000;
  std::uint64_t seed = 1;
  GeneratorSpec generator;
  std::vector<TestCase> cases;
};

inline GeneratorSpec parse_generator(const json& g, const std::string& path) {
  GeneratorSpec out;
  const auto kind = detail::string(detail::field(g, path, "kind"), detail::join(path, "kind"));
  if (kind == "perturb") {
    out.kind = GeneratorSpec::Kind::Perturb;
    if (const auto* a = detail::optional_field(g, path, "alphabet"))
      out.alphabet = detail::integers(*a, detail::join(path, "alphabet"));
    if (const auto* f = detail::optional_field(g, path, "fields")) {
      const auto fp = detail::join(path, "fields");
      if (!f->is_array()) throw SchemaError(fp, "expected an array of names");
      for (std::size_t i = 0; i < f->size(); ++i) out.fields.insert(detail::string((*f)[i], detail::index(fp, i)));
    }
  } else if (kind == "domain") {
    out.kind = GeneratorSpec::Kind::Domain;
    if (const auto* s = detail::optional_field(g, path, "scalars")) {
      const auto sp = detail::join(path, "scalars");
      if (!s->is_object()) throw SchemaError(sp, "expected an object");
      for (const auto& [name, r] : s->items()) out.scalars[name] = detail::range(r, detail::join(sp, name));
    }
    if (const auto* a = detail::optional_field(g, path, "arrays")) {
      const auto ap = detail::join(path, "arrays");
      if (!a->is_object()) throw SchemaError(ap, "expected an object");
      for (const auto& [name, spec] : a->items()) {
        const auto np = detail::join(ap, name);
        out.arrays[name] = {detail::range(detail::field(spec, np, "length"), detail::join(np, "length")),
                            detail::range(detail::field(spec, np, "values"), detail::join(np, "values"))};
      }
    }
    if (const auto* s = detail::optional_field(g, path, "stream_length"))
      out.stream_length = detail::range(*s, detail::join(path, "stream_length"));
    if (const auto* s = detail::optional_field(g, path, "stream_values"))
      out.stream_values = detail::range(*s, detail::join(path, "stream_values"));
    if (const auto* t = detail::optional_field(g, path, "threshold"))
      out.threshold = detail::unsigned_integer(*t, detail::join(path, "threshold"));
  } else {
    throw SchemaError(detail::join(path, "kind"), "expected \"perturb\" or \"domain\"");
  }
  return out;
}

inline TestCase parse_case(const json& c, const std::string& path) {
  TestCase t;
  t.id = detail::string(detail::field(c, path, "id"), detail::join(path, "id"));
  if (t.id.empty()) throw SchemaError(detail::join(path, "id"), "empty id");
  const auto& params = detail::field(c, path, "params");
  const auto pp = detail::join(path, "params");
  if (!params.is_object()) throw SchemaError(pp, "expected an object");
  for (const auto& [name, v] : params.items()) {
    if (v.is_array())
      t.input.arrays[name] = detail::integers(v, detail::join(pp, name));
    else
      t.input.scalars[name] = detail::integer(v, detail::join(pp, name));
  }
  if (const auto* s = detail::optional_field(c, path, "stream"))
    t.input.stream = detail::integers(*s, detail::join(path, "stream"));
  const auto& expected = detail::field(c, path, "expected");
  const auto ep = detail::join(path, "expected");
  if (!expected.is_object()) throw SchemaError(ep, "expected an object");
  for (const auto& [name, v] : expected.items()) t.expected[name] = detail::integer(v, detail::join(ep, name));
  t.threshold = detail::unsigned_integer(detail::field(c, path, "threshold"), detail::join(path, "threshold"));
  if (t.threshold < 1) throw SchemaError(detail::join(path, "threshold"), "threshold must be at least 1");
  return t;
}

/// Parses a suite document. Relative program paths resolve against `base`.
inline TestSuite parse_suite(const json& doc, const std::filesystem::path& base = {}) {
  TestSuite s;
  s.program = base / detail::string(detail::field(doc, "", "program"), "program");
  if (const auto* b = detail::optional_field(doc, "", "budget")) s.budget = detail::unsigned_integer(*b, "budget");
  if (const auto* b = detail::optional_field(doc, "", "seed")) s.seed = detail::unsigned_integer(*b, "seed");
  if (const auto* g = detail::optional_field(doc, "", "generator")) s.generator = parse_generator(*g, "generator");
  const auto& cases = detail::field(doc, "", "cases");
  if (!cases.is_array()) throw SchemaError("cases", "expected an array");
  if (cases.empty()) throw SchemaError("cases", "a suite needs at least one case");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto t = parse_case(cases[i], detail::index("cases", i));
    if (!ids.insert(t.id).second) throw DuplicateTestId(t.id);
    s.cases.push_back(std::move(t));
  }
  return s;
}

inline TestSuite load_suite(const std::filesystem::path& path) {
  return parse_suite(parse_json(read_file(path), path.string()), path.parent_path());
}

/// Checks that every case names each parameter and output of `p`.
inline void check_suite_against(const TestSuite& s, const lang::Program& p) {
  for (std::size_t i = 0; i < s.cases.size(); ++i) {
    const auto path = detail::index("cases", i);
    const auto& t = s.cases[i];
    for (const auto& prm : p.params) {
      const bool has = prm.is_array ? t.input.arrays.count(prm.name) : t.input.scalars.count(prm.name);
      if (!has) throw SchemaError(path + ".params." + prm.name, "missing parameter");
    }
    for (const auto& out : p.outputs)
      if (!t.expected.count(out)) throw SchemaError(path + ".expected." + out, "missing expected output");
  }
}

/// The suite's falsification generator. Perturb inputs inherit the
/// threshold of the case they were derived from.
inline std::unique_ptr<invariants::InputGenerator> make_generator(const TestSuite& s) {
  const auto& g = s.generator;
  if (g.kind == GeneratorSpec::Kind::Perturb) {
    std::vector<invariants::PerturbGenerator::SeedInput> seeds;
    for (const auto& t : s.cases) seeds.push_back({t.id, t.input, t.threshold});
    return std::make_unique<invariants::PerturbGenerator>(std::move(seeds), s.seed, g.alphabet, g.fields);
  }
  auto d = std::make_unique<invariants::DomainGenerator>();
  d->scalars = g.scalars;
  d->arrays = g.arrays;
  d->stream_length = g.stream_length;
  d->stream_values = g.stream_values;
  d->seed = s.seed;
  d->threshold = g.threshold;
  return d;
}

}  // namespace perfrepair::harness
