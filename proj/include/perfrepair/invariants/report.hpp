#pragma once

#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "perfrepair/error.hpp"
#include "perfrepair/invariants/invariant.hpp"

namespace perfrepair::invariants {

class ReportFormatError : public Error {
 public:
  using Error::Error;
};

inline Form parse_form(std::string_view s) {
  for (auto f : {Form::EqConst, Form::LeConst, Form::GeConst, Form::EqVar, Form::LeVar, Form::EqOffset})
    if (s == to_string(f)) return f;
  throw ReportFormatError("unknown invariant form '" + std::string(s) + "'");
}

inline Provenance parse_provenance(std::string_view s) {
  for (auto p : {Provenance::FromPassing, Provenance::FromFailing, Provenance::Refined,
                 Provenance::Combined})
    if (s == to_string(p)) return p;
  throw ReportFormatError("unknown provenance '" + std::string(s) + "'");
}

/// One record per line, tab-separated key=value fields:
/// point, form, lhs, rhs, const, support, provenance. `rhs` is empty and
/// `const` is 0 where the form has none. Records appear in canonical order.
inline std::string format_record(const Invariant& inv, Provenance prov) {
  std::string out;
  out += "point=" + inv.point;
  out += "\tform=" + std::string(to_string(inv.form));
  out += "\tlhs=" + inv.lhs;
  out += "\trhs=" + inv.rhs;
  out += "\tconst=" + std::to_string(inv.constant);
  out += "\tsupport=" + std::to_string(inv.support);
  out += "\tprovenance=" + std::string(to_string(prov));
  return out;
}

inline std::string write_report(const InvariantSet& s) {
  std::string out;
  for (const auto& inv : s.members()) out += format_record(inv, s.provenance()) + "\n";
  return out;
}

namespace detail {

template <typename T>
T parse_number(const std::string& text, const char* field) {
  T v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ReportFormatError(std::string("bad ") + field + " '" + text + "'");
  return v;
}

}  // namespace detail

/// Parses one record; unknown keys are ignored so records can be extended.
inline Invariant parse_record(std::string_view line, Provenance* prov = nullptr) {
  std::map<std::string, std::string> kv;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    auto tab = line.find('\t', pos);
    if (tab == std::string_view::npos) tab = line.size();
    const auto field = line.substr(pos, tab - pos);
    const auto eq = field.find('=');
    if (eq == std::string_view::npos)
      throw ReportFormatError("field without '=': '" + std::string(field) + "'");
    kv[std::string(field.substr(0, eq))] = std::string(field.substr(eq + 1));
    pos = tab + 1;
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ReportFormatError(std::string("missing field '") + key + "'");
    return it->second;
  };
  Invariant inv;
  inv.point = need("point");
  inv.form = parse_form(need("form"));
  inv.lhs = need("lhs");
  inv.rhs = need("rhs");
  inv.constant = detail::parse_number<Value>(need("const"), "const");
  inv.support = detail::parse_number<std::uint64_t>(need("support"), "support");
  if (inv.lhs.empty() || is_binary(inv.form) != !inv.rhs.empty())
    throw ReportFormatError("operands do not match form in '" + std::string(line) + "'");
  if (prov) *prov = parse_provenance(need("provenance"));
  return inv;
}

/// Inverse of write_report. Blank lines and lines starting with '#' are skipped.
inline InvariantSet read_report(std::string_view text) {
  InvariantSet out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    Provenance p{};
    auto inv = parse_record(line, &p);
    if (first) out.set_provenance(p);
    first = false;
    out.insert(std::move(inv));
  }
  return out;
}

}  // namespace perfrepair::invariants
