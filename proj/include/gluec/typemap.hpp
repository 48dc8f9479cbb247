#pragma once

// Type-mapping: foreign type expression -> host type + marshal rules, and
// the generatable / needs-override / skipped split built on top of it.

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gluec/api_model.hpp"
#include "gluec/diagnostic.hpp"
#include "gluec/marshal.hpp"
#include "gluec/overrides.hpp"

namespace gluec {

struct TypemapEntry {
  std::string ctype;  // normalized
  HostType host = HostType::Any;
  MarshalRule rule_in = MarshalRule::None;
  MarshalRule rule_out = MarshalRule::None;
  std::optional<MarshalRule> cleanup;
  SourceLocation location;
};

/// Collapses whitespace runs to one blank, trims, and drops blanks next to
/// '*', so "const  char *" and "const char*" name the same type.
inline std::string normalize_ctype(std::string_view text) {
  std::string collapsed;
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space && c != '*' && collapsed.back() != '*') collapsed.push_back(' ');
    pending_space = false;
    collapsed.push_back(c);
  }
  return collapsed;
}

class TypemapTable {
 public:
  // First entry for a normalized ctype wins; returns false for a duplicate.
  bool insert(TypemapEntry entry) {
    entry.ctype = normalize_ctype(entry.ctype);
    return entries_.emplace(entry.ctype, std::move(entry)).second;
  }

  const TypemapEntry* find(std::string_view ctype) const {
    auto it = entries_.find(normalize_ctype(ctype));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, TypemapEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, TypemapEntry> entries_;
};

enum class Position { Param, Return };

struct Resolution {
  enum class Kind { Resolved, Missing, Ambiguous };

  Kind kind = Kind::Missing;
  std::string ctype;   // normalized foreign type text (or the TypeExpr rendering)
  std::string reason;  // non-empty unless Resolved
  HostType host = HostType::Any;
  MarshalRule rule_in = MarshalRule::None;
  MarshalRule rule_out = MarshalRule::None;
  std::optional<MarshalRule> cleanup;
  std::string object_class;  // Object types only

  bool resolved() const { return kind == Kind::Resolved; }

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

namespace detail {

inline Resolution missing(std::string ctype, std::string reason) {
  Resolution r;
  r.kind = Resolution::Kind::Missing;
  r.ctype = std::move(ctype);
  r.reason = std::move(reason);
  return r;
}

inline Resolution resolved(std::string ctype, HostType host, MarshalRule in, MarshalRule out,
                           std::optional<MarshalRule> cleanup = std::nullopt, std::string cls = {}) {
  Resolution r;
  r.kind = Resolution::Kind::Resolved;
  r.ctype = std::move(ctype);
  r.host = host;
  r.rule_in = in;
  r.rule_out = out;
  r.cleanup = cleanup;
  r.object_class = std::move(cls);
  return r;
}

}  // namespace detail

/// Resolves one type expression at a parameter or return position. Never
/// throws; failures are Missing or Ambiguous resolutions with a reason.
inline Resolution resolve_type(const TypemapTable& table, const ApiCorpus& corpus, const TypeExpr& t,
                               Position position) {
  switch (t.kind) {
    case TypeExpr::Kind::Void:
      if (position == Position::Param) return detail::missing("void", "void is not a parameter type");
      return detail::resolved("void", HostType::Any, MarshalRule::None, MarshalRule::None);

    case TypeExpr::Kind::Object:
      if (!corpus.objects.count(t.name))
        return detail::missing(to_string(t), "unknown object '" + t.name + "'");
      return detail::resolved(to_string(t), HostType::Handle, MarshalRule::HandleUnbox, MarshalRule::HandleBox,
                              std::nullopt, t.name);

    case TypeExpr::Kind::Enum:
      if (!corpus.enums.count(t.name))
        return detail::missing(to_string(t), "unknown enum '" + t.name + "'");
      return detail::resolved(to_string(t), HostType::Scalar, MarshalRule::EnumToInt, MarshalRule::IntToScalar);

    case TypeExpr::Kind::Callback:
      return detail::missing(to_string(t), "callback-typed value '" + t.name +
                                               "' needs a hand-written trampoline binding");

    case TypeExpr::Kind::Ctype:
      break;
  }

  const std::string ctype = normalize_ctype(t.name);
  if (!ctype.empty() && ctype.back() == '*') {
    const std::string pointee = normalize_ctype(std::string_view(ctype).substr(0, ctype.size() - 1));
    const auto* target = table.find(pointee);
    if (target && target->host == HostType::Scalar) {
      Resolution r;
      r.kind = Resolution::Kind::Ambiguous;
      r.ctype = ctype;
      r.reason = "pointer to scalar '" + pointee +
                 "' is ambiguous: it may be an out-parameter, an array or a cast value, "
                 "which the type-mapping cannot decide";
      return r;
    }
  }

  const auto* entry = table.find(ctype);
  if (!entry) return detail::missing(ctype, "no typemap entry for '" + ctype + "'");

  if (position == Position::Return) {
    if (entry->host == HostType::Any)
      return detail::missing(ctype, "host type 'any' cannot be returned ('" + ctype + "')");
    if (entry->rule_out == MarshalRule::None)
      return detail::missing(ctype, "no out-direction rule for '" + ctype + "'");
  } else if (entry->rule_in == MarshalRule::None && entry->host != HostType::Any) {
    return detail::missing(ctype, "no in-direction rule for '" + ctype + "'");
  }
  return detail::resolved(ctype, entry->host, entry->rule_in, entry->rule_out, entry->cleanup);
}

struct GenStatus {
  enum class Kind { Generatable, NeedsOverride, Skipped };

  Kind kind = Kind::Generatable;
  std::vector<std::string> reasons;  // non-empty for NeedsOverride
  bool overridden = false;           // a Text override is supplied

  bool generatable() const { return kind == Kind::Generatable; }
  // NeedsOverride with nothing supplied to satisfy it.
  bool unresolved() const { return kind == Kind::NeedsOverride && !overridden; }
};

inline std::string_view to_string(GenStatus::Kind k) {
  switch (k) {
    case GenStatus::Kind::Generatable: return "generatable";
    case GenStatus::Kind::NeedsOverride: return "needs_override";
    case GenStatus::Kind::Skipped: return "skipped";
  }
  return "?";
}

inline GenStatus classify_function(const TypemapTable& table, const ApiCorpus& corpus, const FunctionDecl& fn,
                                   const OverrideSet& overrides) {
  if (overrides.skips(fn.cname)) return {GenStatus::Kind::Skipped, {}, false};

  std::vector<std::string> issues;
  for (const auto& p : fn.params) {
    const auto r = resolve_type(table, corpus, p.type, Position::Param);
    if (!r.resolved()) issues.push_back("param " + p.name + ": " + r.reason);
  }
  const auto ret = resolve_type(table, corpus, fn.returns, Position::Return);
  if (!ret.resolved()) issues.push_back("return: " + ret.reason);

  if (overrides.has_text(fn.cname)) {
    std::vector<std::string> reasons{"manual override supplied"};
    reasons.insert(reasons.end(), issues.begin(), issues.end());
    return {GenStatus::Kind::NeedsOverride, std::move(reasons), true};
  }
  if (!issues.empty()) return {GenStatus::Kind::NeedsOverride, std::move(issues), false};
  return {GenStatus::Kind::Generatable, {}, false};
}

struct Report {
  struct Entry {
    std::string cname;
    GenStatus status;
  };

  std::vector<Entry> entries;  // lexicographic by cname
  Diagnostics diagnostics;

  std::size_t count(GenStatus::Kind k) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.status.kind == k;
    return n;
  }
  std::size_t generatable() const { return count(GenStatus::Kind::Generatable); }
  std::size_t needs_override() const { return count(GenStatus::Kind::NeedsOverride); }
  std::size_t skipped() const { return count(GenStatus::Kind::Skipped); }

  std::vector<std::string> unresolved() const {
    std::vector<std::string> names;
    for (const auto& e : entries)
      if (e.status.unresolved()) names.push_back(e.cname);
    return names;
  }

  const Entry* find(std::string_view cname) const {
    for (const auto& e : entries)
      if (e.cname == cname) return &e;
    return nullptr;
  }

  std::string render() const {
    std::ostringstream os;
    os << "generatable: " << generatable() << '\n'
       << "needs_override: " << needs_override() << '\n'
       << "skipped: " << skipped() << '\n';
    for (const auto& e : entries) {
      os << to_string(e.status.kind) << ' ' << e.cname;
      if (e.status.kind == GenStatus::Kind::NeedsOverride) {
        os << (e.status.overridden ? " [overridden]" : " [unresolved]") << ':';
        for (std::size_t i = 0; i < e.status.reasons.size(); ++i)
          os << (i ? "; " : " ") << e.status.reasons[i];
      }
      os << '\n';
    }
    for (const auto& d : diagnostics) os << d << '\n';
    return os.str();
  }
};

inline Report coverage_report(const TypemapTable& table, const ApiCorpus& corpus, const OverrideSet& overrides) {
  Report report;
  for (const auto& [cname, fn] : corpus.functions)
    report.entries.push_back({cname, classify_function(table, corpus, fn, overrides)});
  for (const auto& [cname, entry] : overrides.entries)
    if (!corpus.functions.count(cname))
      report.diagnostics.push_back({Severity::Warning, cname, "override for unknown function", entry.location});
  return report;
}

}  // namespace gluec
