#pragma once

// Readers for the three s-expression input files: API definitions, the
// type-map, and manual overrides. All three collect diagnostics and keep
// going; a malformed form is skipped, never fatal.
//
//   (object NAME (parent NAME|none))
//   (enum NAME (value NAME INT)+)
//   (function NAME (returns TYPE [(transfer full|none)]) PARAM*)
//   (callback NAME PARAM* [(returns TYPE)])
//   (signal NAME (on NAME) (handler NAME))
//   PARAM := (param NAME TYPE [(nullable)])
//   TYPE  := void | (ctype "TEXT") | (object NAME) | (enum NAME) | (callback NAME)
//
//   (typemap (ctype "TEXT") (host HOST) (in RULE) (out RULE) [(cleanup RULE)])
//
//   (override NAME (text "TEXT")) | (skip NAME)

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gluec/api_model.hpp"
#include "gluec/diagnostic.hpp"
#include "gluec/marshal.hpp"
#include "gluec/overrides.hpp"
#include "gluec/sexpr.hpp"
#include "gluec/typemap.hpp"

namespace gluec {

namespace detail {

// Thrown inside one form's reader; caught at the top level, where it
// becomes a diagnostic and the form is dropped.
struct FormError {
  std::string message;
  SourceLocation location;
};

inline const SExpr& child(const SExpr& list, std::size_t i, std::string_view what) {
  if (!list.is_list() || i >= list.children.size())
    throw FormError{"missing " + std::string(what), list.location};
  return list.children[i];
}

inline const std::string& atom_at(const SExpr& list, std::size_t i, std::string_view what) {
  const SExpr& e = child(list, i, what);
  if (!e.is_atom()) throw FormError{"expected " + std::string(what) + " (an identifier)", e.location};
  return e.text;
}

inline const std::string& string_at(const SExpr& list, std::size_t i, std::string_view what) {
  const SExpr& e = child(list, i, what);
  if (!e.is_str()) throw FormError{"expected " + std::string(what) + " (a string)", e.location};
  return e.text;
}

// (head X) with exactly one argument.
inline const SExpr& unary(const SExpr& clause, std::string_view head) {
  if (clause.head() != head) throw FormError{"expected (" + std::string(head) + " ...)", clause.location};
  if (clause.children.size() != 2)
    throw FormError{"(" + std::string(head) + " ...) takes exactly one argument", clause.location};
  return clause.children[1];
}

inline TypeExpr read_type(const SExpr& e) {
  if (e.is_atom("void")) return TypeExpr::void_type();
  const auto head = e.head();
  if (e.is_list() && e.children.size() == 2) {
    const SExpr& arg = e.children[1];
    if (head == "ctype" && arg.is_str()) return TypeExpr::ctype(arg.text);
    if (head == "object" && arg.is_atom()) return TypeExpr::object(arg.text);
    if (head == "enum" && arg.is_atom()) return TypeExpr::enumeration(arg.text);
    if (head == "callback" && arg.is_atom()) return TypeExpr::callback(arg.text);
  }
  throw FormError{"malformed type expression '" + print(e) + "'", e.location};
}

inline ParamDecl read_param(const SExpr& e) {
  if (e.head() != "param") throw FormError{"expected (param ...)", e.location};
  ParamDecl p;
  p.name = atom_at(e, 1, "parameter name");
  p.type = read_type(child(e, 2, "parameter type"));
  for (std::size_t i = 3; i < e.children.size(); ++i) {
    const SExpr& flag = e.children[i];
    if (flag.head() == "nullable" && flag.children.size() == 1)
      p.nullable = true;
    else
      throw FormError{"unexpected clause in param '" + p.name + "'", flag.location};
  }
  return p;
}

class DefsReader {
 public:
  void read(const SExpr& form) {
    const auto head = form.head();
    if (head == "object")
      read_object(form);
    else if (head == "enum")
      read_enum(form);
    else if (head == "function")
      read_function(form);
    else if (head == "callback")
      read_callback(form);
    else if (head == "signal")
      read_signal(form);
    else if (!form.is_list())
      throw FormError{"expected a parenthesized form", form.location};
    else
      throw FormError{"unknown form '" + std::string(head.empty() ? print(form) : std::string(head)) + "'",
                      form.location};
  }

  ApiCorpus corpus;
  Diagnostics diagnostics;

 private:
  template <typename Map, typename Decl>
  void add(Map& map, const std::string& name, Decl decl, SourceLocation loc) {
    if (!map.emplace(name, std::move(decl)).second)
      diagnostics.push_back({Severity::Error, name, "duplicate name", loc});
  }

  void read_object(const SExpr& form) {
    ObjectDecl obj;
    obj.name = atom_at(form, 1, "object name");
    obj.location = form.location;
    const SExpr& parent = unary(child(form, 2, "(parent ...) clause"), "parent");
    if (!parent.is_atom()) throw FormError{"parent must be an identifier or none", parent.location};
    if (parent.text != "none") obj.parent = parent.text;
    if (form.children.size() > 3) throw FormError{"unexpected clause in object", form.children[3].location};
    add(corpus.objects, obj.name, obj, form.location);
  }

  void read_enum(const SExpr& form) {
    EnumDecl en;
    en.name = atom_at(form, 1, "enum name");
    en.location = form.location;
    for (std::size_t i = 2; i < form.children.size(); ++i) {
      const SExpr& v = form.children[i];
      if (v.head() != "value" || v.children.size() != 3 || !v.children[2].is_int())
        throw FormError{"expected (value NAME INT)", v.location};
      en.values.push_back({atom_at(v, 1, "value name"), v.children[2].integer});
    }
    if (en.values.empty()) throw FormError{"enum '" + en.name + "' has no values", form.location};
    add(corpus.enums, en.name, en, form.location);
  }

  void read_function(const SExpr& form) {
    FunctionDecl fn;
    fn.cname = atom_at(form, 1, "function name");
    fn.location = form.location;
    const SExpr& ret = child(form, 2, "(returns ...) clause");
    if (ret.head() != "returns" || ret.children.size() < 2)
      throw FormError{"expected (returns TYPE [(transfer ...)])", ret.location};
    fn.returns = read_type(ret.children[1]);
    for (std::size_t i = 2; i < ret.children.size(); ++i) {
      const SExpr& t = unary(ret.children[i], "transfer");
      if (t.is_atom("full")) {
        fn.transfer = Transfer::Full;
      } else if (t.is_atom("none")) {
        fn.transfer = Transfer::None;
      } else {
        diagnostics.push_back({Severity::Warning, fn.cname, "unknown transfer '" + print(t) + "', assuming none",
                               t.location});
      }
    }
    for (std::size_t i = 3; i < form.children.size(); ++i) fn.params.push_back(read_param(form.children[i]));
    add(corpus.functions, fn.cname, fn, form.location);
  }

  void read_callback(const SExpr& form) {
    CallbackDecl cb;
    cb.name = atom_at(form, 1, "callback name");
    cb.location = form.location;
    for (std::size_t i = 2; i < form.children.size(); ++i) {
      const SExpr& c = form.children[i];
      if (c.head() == "returns") {
        if (i + 1 != form.children.size()) throw FormError{"(returns ...) must come last", c.location};
        cb.returns = read_type(unary(c, "returns"));
      } else {
        cb.params.push_back(read_param(c));
      }
    }
    add(corpus.callbacks, cb.name, cb, form.location);
  }

  void read_signal(const SExpr& form) {
    SignalDecl sig;
    sig.name = atom_at(form, 1, "signal name");
    sig.location = form.location;
    const SExpr& on = unary(child(form, 2, "(on ...) clause"), "on");
    const SExpr& handler = unary(child(form, 3, "(handler ...) clause"), "handler");
    if (!on.is_atom() || !handler.is_atom())
      throw FormError{"signal target and handler must be identifiers", form.location};
    if (form.children.size() > 4) throw FormError{"unexpected clause in signal", form.children[4].location};
    sig.on = on.text;
    sig.handler = handler.text;
    add(corpus.signals, sig.name, sig, form.location);
  }
};

template <typename Fn>
void each_form(const std::vector<SExpr>& forms, Diagnostics& diags, Fn&& fn) {
  for (const auto& form : forms) {
    try {
      fn(form);
    } catch (const FormError& e) {
      std::string entity;
      if (form.is_list() && form.children.size() > 1 && form.children[1].is_atom()) entity = form.children[1].text;
      diags.push_back({Severity::Error, entity, e.message, e.location.known() ? e.location : form.location});
    }
  }
}

}  // namespace detail

inline std::pair<ApiCorpus, Diagnostics> parse_defs(const std::vector<SExpr>& forms) {
  detail::DefsReader reader;
  detail::each_form(forms, reader.diagnostics, [&](const SExpr& f) { reader.read(f); });
  return {std::move(reader.corpus), std::move(reader.diagnostics)};
}

inline std::pair<TypemapTable, Diagnostics> parse_typemap(const std::vector<SExpr>& forms) {
  TypemapTable table;
  Diagnostics diags;

  auto rule = [&](const SExpr& clause, std::string_view head) {
    const SExpr& v = detail::unary(clause, head);
    if (!v.is_atom()) throw detail::FormError{"marshal rule must be an identifier", v.location};
    auto r = parse_marshal_rule(v.text);
    if (!r) throw detail::FormError{"unknown marshal rule '" + v.text + "'", v.location};
    return *r;
  };

  detail::each_form(forms, diags, [&](const SExpr& form) {
    if (form.head() != "typemap")
      throw detail::FormError{"unknown form '" + (form.head().empty() ? print(form) : std::string(form.head())) + "'",
                              form.location};
    TypemapEntry entry;
    entry.location = form.location;
    std::optional<std::string> ctype;
    std::optional<HostType> host;
    std::optional<MarshalRule> in, out;
    for (std::size_t i = 1; i < form.children.size(); ++i) {
      const SExpr& c = form.children[i];
      const auto h = c.head();
      auto once = [&](bool already) {
        if (already) throw detail::FormError{"repeated (" + std::string(h) + " ...) clause", c.location};
      };
      if (h == "ctype") {
        once(ctype.has_value());
        const SExpr& v = detail::unary(c, "ctype");
        if (!v.is_str()) throw detail::FormError{"ctype must be a string", v.location};
        ctype = v.text;
      } else if (h == "host") {
        once(host.has_value());
        const SExpr& v = detail::unary(c, "host");
        host = v.is_atom() ? parse_host_type(v.text) : std::nullopt;
        if (!host) throw detail::FormError{"unknown host type '" + print(v) + "'", v.location};
      } else if (h == "in") {
        once(in.has_value());
        in = rule(c, "in");
      } else if (h == "out") {
        once(out.has_value());
        out = rule(c, "out");
      } else if (h == "cleanup") {
        once(entry.cleanup.has_value());
        entry.cleanup = rule(c, "cleanup");
      } else {
        throw detail::FormError{"unexpected clause in typemap", c.location};
      }
    }
    if (!ctype || !host || !in || !out)
      throw detail::FormError{"typemap needs (ctype ...), (host ...), (in ...) and (out ...)", form.location};
    if (normalize_ctype(*ctype).empty()) throw detail::FormError{"empty ctype", form.location};
    if (!rule_has_direction(*in, Direction::In))
      throw detail::FormError{"'" + std::string(to_string(*in)) + "' is not an in-direction rule", form.location};
    if (!rule_has_direction(*out, Direction::Out))
      throw detail::FormError{"'" + std::string(to_string(*out)) + "' is not an out-direction rule", form.location};
    for (MarshalRule r : {*in, *out}) {
      const auto rh = rule_host_type(r);
      if (rh && *rh != *host)
        throw detail::FormError{"rule '" + std::string(to_string(r)) + "' does not fit host type '" +
                                    std::string(to_string(*host)) + "'",
                                form.location};
    }
    if (*host == HostType::Any && *out != MarshalRule::None)
      throw detail::FormError{"host type 'any' cannot have an out rule", form.location};

    entry.ctype = *ctype;
    entry.host = *host;
    entry.rule_in = *in;
    entry.rule_out = *out;
    const std::string key = normalize_ctype(*ctype);
    if (!table.insert(std::move(entry)))
      diags.push_back({Severity::Error, key, "duplicate typemap entry (first wins)", form.location});
  });
  return {std::move(table), std::move(diags)};
}

inline std::pair<OverrideSet, Diagnostics> parse_overrides(const std::vector<SExpr>& forms) {
  OverrideSet set;
  Diagnostics diags;
  detail::each_form(forms, diags, [&](const SExpr& form) {
    OverrideEntry entry;
    entry.location = form.location;
    std::string name;
    if (form.head() == "skip") {
      name = detail::atom_at(form, 1, "function name");
      if (form.children.size() != 2) throw detail::FormError{"(skip NAME) takes one name", form.location};
      entry.kind = OverrideEntry::Kind::Skip;
    } else if (form.head() == "override") {
      name = detail::atom_at(form, 1, "function name");
      if (form.children.size() != 3) throw detail::FormError{"expected (override NAME (text \"...\"))", form.location};
      const SExpr& text = detail::unary(form.children[2], "text");
      if (!text.is_str()) throw detail::FormError{"override text must be a string", text.location};
      entry.kind = OverrideEntry::Kind::Text;
      entry.text = text.text;
    } else {
      throw detail::FormError{"unknown form '" + (form.head().empty() ? print(form) : std::string(form.head())) + "'",
                              form.location};
    }
    if (!set.entries.emplace(name, std::move(entry)).second)
      diags.push_back({Severity::Error, name, "duplicate override (first wins)", form.location});
  });
  return {std::move(set), std::move(diags)};
}

}  // namespace gluec
