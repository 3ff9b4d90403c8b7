#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "perfrepair/harness/suite.hpp"
#include "perfrepair/lang/check.hpp"
#include "perfrepair/lang/printer.hpp"
#include "perfrepair/repair/mutation.hpp"
#include "perfrepair/repair/search.hpp"

namespace perfrepair::harness {

struct Config {
  std::filesystem::path program;
  std::filesystem::path suite;
  repair::SearchConfig search;
  std::size_t falsification_budget = 200;
  std::uint64_t min_support = 2;
  std::size_t workers = 1;
  /// Searches after a rejected patch, counting the first.
  std::size_t max_attempts = 3;
};

inline Config parse_config(const json& doc, const std::filesystem::path& base = {}) {
  using namespace detail;
  Config c;
  c.program = base / string(field(doc, "", "program"), "program");
  c.suite = base / string(field(doc, "", "suite"), "suite");
  if (const auto* s = optional_field(doc, "", "search")) {
    if (!s->is_object()) throw SchemaError("search", "expected an object");
    if (const auto* v = optional_field(*s, "search", "seed")) c.search.seed = unsigned_integer(*v, "search.seed");
    if (const auto* v = optional_field(*s, "search", "population"))
      c.search.population = unsigned_integer(*v, "search.population");
    if (const auto* v = optional_field(*s, "search", "generations"))
      c.search.generations = unsigned_integer(*v, "search.generations");
    if (const auto* v = optional_field(*s, "search", "mutation_rate")) {
      if (!v->is_number() || v->get<double>() < 0 || v->get<double>() > 1)
        throw SchemaError("search.mutation_rate", "expected a number in [0, 1]");
      c.search.mutation_rate = v->get<double>();
    }
    if (const auto* v = optional_field(*s, "search", "max_mutations")) {
      c.search.max_mutations = unsigned_integer(*v, "search.max_mutations");
      if (c.search.max_mutations == 0) throw SchemaError("search.max_mutations", "must be at least 1");
    }
  }
  if (const auto* v = optional_field(doc, "", "falsification_budget"))
    c.falsification_budget = unsigned_integer(*v, "falsification_budget");
  if (const auto* v = optional_field(doc, "", "min_support")) c.min_support = unsigned_integer(*v, "min_support");
  if (const auto* v = optional_field(doc, "", "workers")) {
    c.workers = unsigned_integer(*v, "workers");
    if (c.workers == 0) throw SchemaError("workers", "must be at least 1");
  }
  if (const auto* v = optional_field(doc, "", "max_attempts")) {
    c.max_attempts = unsigned_integer(*v, "max_attempts");
    if (c.max_attempts == 0) throw SchemaError("max_attempts", "must be at least 1");
  }
  c.search.workers = c.workers;
  return c;
}

inline Config load_config(const std::filesystem::path& path) {
  return parse_config(parse_json(read_file(path), path.string()), path.parent_path());
}

inline lang::Program load_program(const std::filesystem::path& path) {
  return lang::parse_checked(read_file(path));
}

// Patch files: {"mutations": [...]} applied to the original, or a whole
// replacement program given inline ("program") or by path ("program_file").

inline json mutation_to_json(const repair::Mutation& m) {
  json j;
  j["kind"] = repair::to_string(m.kind);
  j["stmt"] = m.stmt.value;
  if (m.kind != repair::MutationKind::Delete) j["other"] = m.other.value;
  if (m.kind == repair::MutationKind::Move || m.kind == repair::MutationKind::Insert)
    j["position"] = repair::to_string(m.position);
  return j;
}

inline repair::Mutation parse_mutation(const json& j, const std::string& path) {
  using namespace detail;
  repair::Mutation m;
  const auto kind = string(field(j, path, "kind"), join(path, "kind"));
  if (kind == "move") m.kind = repair::MutationKind::Move;
  else if (kind == "swap") m.kind = repair::MutationKind::Swap;
  else if (kind == "delete") m.kind = repair::MutationKind::Delete;
  else if (kind == "insert") m.kind = repair::MutationKind::Insert;
  else throw SchemaError(join(path, "kind"), "expected move, swap, delete or insert");
  m.stmt = {static_cast<int>(integer(field(j, path, "stmt"), join(path, "stmt")))};
  if (m.kind != repair::MutationKind::Delete)
    m.other = {static_cast<int>(integer(field(j, path, "other"), join(path, "other")))};
  if (m.kind == repair::MutationKind::Move || m.kind == repair::MutationKind::Insert) {
    const auto pos = string(field(j, path, "position"), join(path, "position"));
    if (pos == "before") m.position = repair::Position::Before;
    else if (pos == "after") m.position = repair::Position::After;
    else throw SchemaError(join(path, "position"), "expected before or after");
  }
  return m;
}

struct PatchFile {
  std::vector<repair::Mutation> mutations;
  std::optional<lang::Program> program;
};

inline PatchFile parse_patch(const json& doc, const std::filesystem::path& base = {}) {
  using namespace detail;
  PatchFile p;
  if (const auto* ms = optional_field(doc, "", "mutations")) {
    if (!ms->is_array()) throw SchemaError("mutations", "expected an array");
    for (std::size_t i = 0; i < ms->size(); ++i) p.mutations.push_back(parse_mutation((*ms)[i], index("mutations", i)));
  }
  const auto* inline_src = optional_field(doc, "", "program");
  const auto* file = optional_field(doc, "", "program_file");
  if (inline_src && file) throw SchemaError("program", "give either program or program_file");
  if (inline_src) p.program = lang::parse_checked(string(*inline_src, "program"));
  if (file) p.program = load_program(base / string(*file, "program_file"));
  if (p.program && !p.mutations.empty()) throw SchemaError("mutations", "a replacement program takes no mutations");
  if (!p.program && !optional_field(doc, "", "mutations")) throw SchemaError("mutations", "missing field");
  return p;
}

inline PatchFile load_patch(const std::filesystem::path& path) {
  return parse_patch(parse_json(read_file(path), path.string()), path.parent_path());
}

/// The patched program. Mutations that do not apply cleanly raise
/// SchemaError at the offending index.
inline lang::Program apply(const PatchFile& patch, const lang::Program& original) {
  if (patch.program) return *patch.program;
  lang::Program cur = original;
  for (std::size_t i = 0; i < patch.mutations.size(); ++i) {
    const auto path = detail::index("mutations", i);
    try {
      auto r = repair::apply_mutation(cur, patch.mutations[i]);
      if (!r.ok()) throw SchemaError(path, "result is ill-formed: " + format(r.diagnostics.front()));
      cur = std::move(r.program);
    } catch (const repair::InvalidOperand& e) {
      throw SchemaError(path, e.what());
    } catch (const repair::IllFormedResult& e) {
      throw SchemaError(path, e.what());
    }
  }
  return cur;
}

}  // namespace perfrepair::harness
