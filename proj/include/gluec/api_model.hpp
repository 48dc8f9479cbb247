#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gluec/diagnostic.hpp"

namespace gluec {

struct TypeExpr {
  enum class Kind { Void, Ctype, Object, Enum, Callback };

  Kind kind = Kind::Void;
  // Ctype: verbatim foreign type text, e.g. "const char*". Otherwise the
  // referenced declaration name (empty for Void).
  std::string name;

  static TypeExpr void_type() { return {}; }
  static TypeExpr ctype(std::string text) { return {Kind::Ctype, std::move(text)}; }
  static TypeExpr object(std::string n) { return {Kind::Object, std::move(n)}; }
  static TypeExpr enumeration(std::string n) { return {Kind::Enum, std::move(n)}; }
  static TypeExpr callback(std::string n) { return {Kind::Callback, std::move(n)}; }

  bool is_void() const { return kind == Kind::Void; }
  friend bool operator==(const TypeExpr&, const TypeExpr&) = default;
};

inline std::string to_string(const TypeExpr& t) {
  switch (t.kind) {
    case TypeExpr::Kind::Void: return "void";
    case TypeExpr::Kind::Ctype: return "(ctype \"" + t.name + "\")";
    case TypeExpr::Kind::Object: return "(object " + t.name + ")";
    case TypeExpr::Kind::Enum: return "(enum " + t.name + ")";
    case TypeExpr::Kind::Callback: return "(callback " + t.name + ")";
  }
  return "?";
}

enum class Transfer { None, Full };

struct ObjectDecl {
  std::string name;
  std::optional<std::string> parent;
  SourceLocation location;
};

struct EnumValue {
  std::string name;
  std::int64_t ordinal = 0;
};

struct EnumDecl {
  std::string name;
  std::vector<EnumValue> values;
  SourceLocation location;
};

struct ParamDecl {
  std::string name;
  TypeExpr type;
  bool nullable = false;
};

struct FunctionDecl {
  std::string cname;
  TypeExpr returns;
  Transfer transfer = Transfer::None;
  std::vector<ParamDecl> params;
  SourceLocation location;
};

struct CallbackDecl {
  std::string name;
  std::vector<ParamDecl> params;
  TypeExpr returns;
  SourceLocation location;
};

struct SignalDecl {
  std::string name;
  std::string on;
  std::string handler;
  SourceLocation location;
};

class NotFound : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Functions have their own namespace; objects, enums and callbacks share one.
struct ApiCorpus {
  std::map<std::string, ObjectDecl> objects;
  std::map<std::string, EnumDecl> enums;
  std::map<std::string, FunctionDecl> functions;
  std::map<std::string, CallbackDecl> callbacks;
  std::map<std::string, SignalDecl> signals;

  bool empty() const {
    return objects.empty() && enums.empty() && functions.empty() && callbacks.empty() && signals.empty();
  }

  const FunctionDecl* find_function(std::string_view cname) const {
    auto it = functions.find(std::string(cname));
    return it == functions.end() ? nullptr : &it->second;
  }
  const ObjectDecl* find_object(std::string_view name) const {
    auto it = objects.find(std::string(name));
    return it == objects.end() ? nullptr : &it->second;
  }
  const CallbackDecl* find_callback(std::string_view name) const {
    auto it = callbacks.find(std::string(name));
    return it == callbacks.end() ? nullptr : &it->second;
  }
};

inline const FunctionDecl& lookup_function(const ApiCorpus& corpus, std::string_view cname) {
  if (const auto* fn = corpus.find_function(cname)) return *fn;
  throw NotFound("unknown function '" + std::string(cname) + "'");
}

/// True iff `ancestor` is `child` or lies on its parent chain. Terminates
/// on cyclic (unvalidated) corpora.
inline bool object_is_a(const ApiCorpus& corpus, std::string_view child, std::string_view ancestor) {
  if (!corpus.find_object(child)) throw NotFound("unknown object '" + std::string(child) + "'");
  if (!corpus.find_object(ancestor)) throw NotFound("unknown object '" + std::string(ancestor) + "'");
  const ObjectDecl* cur = corpus.find_object(child);
  for (std::size_t steps = 0; cur && steps <= corpus.objects.size(); ++steps) {
    if (cur->name == ancestor) return true;
    if (!cur->parent) return false;
    cur = corpus.find_object(*cur->parent);
  }
  return false;
}

namespace detail {

inline void check_type_ref(const ApiCorpus& corpus, const TypeExpr& t, const std::string& entity,
                           SourceLocation loc, Diagnostics& out) {
  switch (t.kind) {
    case TypeExpr::Kind::Object:
      if (!corpus.objects.count(t.name))
        out.push_back({Severity::Error, entity, "unresolved object '" + t.name + "'", loc});
      break;
    case TypeExpr::Kind::Enum:
      if (!corpus.enums.count(t.name))
        out.push_back({Severity::Error, entity, "unresolved enum '" + t.name + "'", loc});
      break;
    case TypeExpr::Kind::Callback:
      if (!corpus.callbacks.count(t.name))
        out.push_back({Severity::Error, entity, "unresolved callback '" + t.name + "'", loc});
      break;
    case TypeExpr::Kind::Void:
    case TypeExpr::Kind::Ctype:
      break;
  }
}

inline void check_params(const ApiCorpus& corpus, const std::vector<ParamDecl>& params,
                         const std::string& owner, SourceLocation loc, Diagnostics& out) {
  std::set<std::string> seen;
  for (const auto& p : params) {
    const std::string entity = owner + "." + p.name;
    if (!seen.insert(p.name).second)
      out.push_back({Severity::Error, entity, "duplicate parameter name", loc});
    if (p.type.is_void())
      out.push_back({Severity::Error, entity, "void parameter", loc});
    check_type_ref(corpus, p.type, entity, loc, out);
  }
}

}  // namespace detail

/// Checks every corpus invariant; an empty result means the corpus is valid.
inline Diagnostics corpus_validate(const ApiCorpus& corpus) {
  Diagnostics out;

  // Cross-kind duplicates (same-kind duplicates are rejected by the parser).
  {
    std::map<std::string, int> kinds;
    for (const auto& [n, _] : corpus.objects) ++kinds[n];
    for (const auto& [n, _] : corpus.enums) ++kinds[n];
    for (const auto& [n, _] : corpus.callbacks) ++kinds[n];
    for (const auto& [n, count] : kinds)
      if (count > 1) out.push_back({Severity::Error, n, "duplicate name", {}});
  }

  for (const auto& [name, obj] : corpus.objects) {
    if (obj.parent && !corpus.objects.count(*obj.parent)) {
      out.push_back({Severity::Error, name, "unresolved object '" + *obj.parent + "'", obj.location});
      continue;
    }
    // Walk the chain; a cycle through `name` is reported once, by its
    // lexicographically smallest member.
    std::vector<std::string> chain{name};
    const ObjectDecl* cur = &obj;
    bool cyclic = false;
    while (cur->parent) {
      const auto* next = corpus.find_object(*cur->parent);
      if (!next) break;
      if (next->name == name) {
        cyclic = true;
        break;
      }
      if (std::find(chain.begin(), chain.end(), next->name) != chain.end()) break;
      chain.push_back(next->name);
      cur = next;
    }
    if (cyclic && *std::min_element(chain.begin(), chain.end()) == name)
      out.push_back({Severity::Error, name, "inheritance cycle", obj.location});
  }

  for (const auto& [name, en] : corpus.enums) {
    std::set<std::string> names;
    std::set<std::int64_t> ordinals;
    for (const auto& v : en.values) {
      if (!names.insert(v.name).second)
        out.push_back({Severity::Error, name + "." + v.name, "duplicate enum value name", en.location});
      if (!ordinals.insert(v.ordinal).second)
        out.push_back({Severity::Error, name + "." + v.name, "duplicate enum ordinal", en.location});
    }
  }

  for (const auto& [name, fn] : corpus.functions) {
    detail::check_type_ref(corpus, fn.returns, name, fn.location, out);
    detail::check_params(corpus, fn.params, name, fn.location, out);
  }

  for (const auto& [name, cb] : corpus.callbacks) {
    detail::check_type_ref(corpus, cb.returns, name, cb.location, out);
    detail::check_params(corpus, cb.params, name, cb.location, out);
  }

  for (const auto& [name, sig] : corpus.signals) {
    if (!corpus.objects.count(sig.on))
      out.push_back({Severity::Error, name, "unresolved object '" + sig.on + "'", sig.location});
    if (!corpus.callbacks.count(sig.handler))
      out.push_back({Severity::Error, name, "unresolved callback '" + sig.handler + "'", sig.location});
  }
  return out;
}

}  // namespace gluec
