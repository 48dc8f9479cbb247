#pragma once

// Renders GluePlans to source text through a data-only template set.
//
// Template file: sections introduced by `%% <section>` lines, where
// <section> is one of
//   file_header file_footer function_header function_footer
//   arity_check type_check invoke return
//   marshal_in <rule>   marshal_out <rule>   cleanup <rule>
// Section bodies are copied with @NAME@ placeholders replaced literally
// (single pass, substituted text is never rescanned).

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gluec/glue_plan.hpp"
#include "gluec/marshal.hpp"
#include "gluec/overrides.hpp"

namespace gluec {

class EmitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kPlaceholders[] = {
    "FN_NAME", "ARG_INDEX", "ARITY_MIN",  "ARITY_MAX",    "HOST_TYPE", "CLASS",
    "RULE",    "NULLABLE",  "CALL_ARGS",  "RETURN_COUNT", "PLAN_DUMP",
};

inline bool is_known_placeholder(std::string_view name) {
  for (auto p : kPlaceholders)
    if (p == name) return true;
  return false;
}

struct TemplateSet {
  std::map<std::string, std::string> sections;

  const std::string* find(const std::string& section) const {
    auto it = sections.find(section);
    return it == sections.end() ? nullptr : &it->second;
  }
};

inline bool is_valid_section(std::string_view name) {
  static constexpr std::string_view fixed[] = {"file_header", "file_footer", "function_header", "function_footer",
                                               "arity_check", "type_check",  "invoke",          "return"};
  for (auto f : fixed)
    if (f == name) return true;
  for (std::string_view prefix : {"marshal_in ", "marshal_out ", "cleanup "})
    if (name.substr(0, prefix.size()) == prefix) return parse_marshal_rule(name.substr(prefix.size())).has_value();
  return false;
}

inline TemplateSet parse_templates(std::string_view text) {
  TemplateSet set;
  std::string* current = nullptr;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    const bool has_nl = eol != std::string_view::npos;
    if (!has_nl) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = has_nl ? eol + 1 : eol;
    ++line_no;

    if (line.substr(0, 3) == "%% ") {
      std::string name(line.substr(3));
      while (!name.empty() && (name.back() == ' ' || name.back() == '\r')) name.pop_back();
      if (!is_valid_section(name))
        throw EmitError("template line " + std::to_string(line_no) + ": unknown section '" + name + "'");
      auto [it, inserted] = set.sections.emplace(name, std::string());
      if (!inserted)
        throw EmitError("template line " + std::to_string(line_no) + ": duplicate section '" + name + "'");
      current = &it->second;
      continue;
    }
    if (!current) continue;  // preamble before the first section
    current->append(line);
    if (has_nl) current->push_back('\n');
  }
  return set;
}

struct EmitUnit {
  std::string filename;
  std::string content;

  friend bool operator==(const EmitUnit&, const EmitUnit&) = default;
};

namespace detail {

using Bindings = std::map<std::string, std::string, std::less<>>;

inline void substitute_into(std::string& out, const std::string& section, const std::string& body,
                            const Bindings& values) {
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c == '@') {
      const std::size_t close = body.find('@', i + 1);
      if (close != std::string::npos && close > i + 1) {
        const std::string_view name(body.data() + i + 1, close - i - 1);
        bool placeholder_shape = true;
        for (char n : name) placeholder_shape &= (n >= 'A' && n <= 'Z') || n == '_';
        if (placeholder_shape) {
          if (!is_known_placeholder(name))
            throw EmitError("unknown placeholder @" + std::string(name) + "@ in template '" + section + "'");
          auto it = values.find(name);
          if (it != values.end()) out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(c);
    ++i;
  }
}

inline const std::string& require(const TemplateSet& t, const std::string& section) {
  if (const auto* s = t.find(section)) return *s;
  throw EmitError("missing template '" + section + "'");
}

}  // namespace detail

/// Renders one plan: function_header, one template per step, function_footer.
inline std::string render_plan(const GluePlan& plan, const TemplateSet& templates) {
  detail::Bindings common;
  common["FN_NAME"] = plan.cname;
  std::string dump = dump_plan(plan);
  if (!dump.empty() && dump.back() == '\n') dump.pop_back();
  common["PLAN_DUMP"] = dump;

  std::map<int, std::string> arg_class;
  std::string call_args;
  for (const auto& s : plan.steps) {
    if (const auto* a = std::get_if<step::ArityCheck>(&s)) {
      common["ARITY_MIN"] = std::to_string(a->min);
      common["ARITY_MAX"] = std::to_string(a->max);
    } else if (const auto* t = std::get_if<step::TypeCheck>(&s)) {
      arg_class[t->arg_index] = t->expected_class;
    } else if (const auto* m = std::get_if<step::MarshalIn>(&s)) {
      if (!call_args.empty()) call_args += ", ";
      call_args += "c" + std::to_string(m->arg_index);
    } else if (const auto* r = std::get_if<step::Return>(&s)) {
      common["RETURN_COUNT"] = std::to_string(r->count);
    }
  }
  common["CALL_ARGS"] = call_args;

  std::string out;
  detail::substitute_into(out, "function_header", detail::require(templates, "function_header"), common);
  for (const auto& s : plan.steps) {
    detail::Bindings b = common;
    std::string section;
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, step::ArityCheck>) {
            section = "arity_check";
          } else if constexpr (std::is_same_v<T, step::TypeCheck>) {
            section = "type_check";
            b["ARG_INDEX"] = std::to_string(st.arg_index);
            b["HOST_TYPE"] = std::string(to_string(st.host));
            b["CLASS"] = st.expected_class;
            b["NULLABLE"] = st.nullable ? "true" : "false";
          } else if constexpr (std::is_same_v<T, step::MarshalIn>) {
            section = "marshal_in " + std::string(to_string(st.rule));
            b["ARG_INDEX"] = std::to_string(st.arg_index);
            b["RULE"] = std::string(to_string(st.rule));
            b["CLASS"] = arg_class[st.arg_index];
          } else if constexpr (std::is_same_v<T, step::InvokeForeign>) {
            section = "invoke";
          } else if constexpr (std::is_same_v<T, step::MarshalOut>) {
            section = "marshal_out " + std::string(to_string(st.rule));
            b["RULE"] = std::string(to_string(st.rule));
            b["CLASS"] = st.cls;
          } else if constexpr (std::is_same_v<T, step::Cleanup>) {
            section = "cleanup " + std::string(to_string(st.rule));
            b["ARG_INDEX"] = std::to_string(st.arg_index);
            b["RULE"] = std::string(to_string(st.rule));
            b["CLASS"] = arg_class[st.arg_index];
          } else {
            section = "return";
          }
        },
        s);
    detail::substitute_into(out, section, detail::require(templates, section), b);
  }
  detail::substitute_into(out, "function_footer", detail::require(templates, "function_footer"), common);
  return out;
}

inline constexpr std::string_view kDefaultGlueFilename = "glue.cc";

/// Single-file module: file_header, then each function in cname order
/// (generated body, or Text override verbatim), then file_footer.
inline std::vector<EmitUnit> render_module(const std::vector<GluePlan>& plans, const OverrideSet& overrides,
                                           const TemplateSet& templates,
                                           std::string_view filename = kDefaultGlueFilename) {
  std::map<std::string, std::string> bodies;
  for (const auto& plan : plans) {
    if (overrides.find(plan.cname)) continue;
    bodies[plan.cname] = render_plan(plan, templates);
  }
  for (const auto& [cname, entry] : overrides.entries)
    if (entry.is_text()) bodies[cname] = entry.text;

  EmitUnit unit;
  unit.filename = std::string(filename);
  const detail::Bindings none;
  detail::substitute_into(unit.content, "file_header", detail::require(templates, "file_header"), none);
  for (const auto& [_, body] : bodies) unit.content += body;
  detail::substitute_into(unit.content, "file_footer", detail::require(templates, "file_footer"), none);
  return {std::move(unit)};
}

/// Extracts the plan dumps embedded by templates as `/* glue-plan ... */`
/// blocks, in order of appearance.
inline std::vector<GluePlan> extract_embedded_plans(std::string_view text) {
  constexpr std::string_view open = "/* glue-plan\n";
  constexpr std::string_view close = "\n*/";
  std::vector<GluePlan> plans;
  std::size_t pos = 0;
  while ((pos = text.find(open, pos)) != std::string_view::npos) {
    const std::size_t start = pos + open.size();
    const std::size_t end = text.find(close, start);
    if (end == std::string_view::npos) throw PlanError("unterminated glue-plan comment");
    plans.push_back(parse_plan_dump(text.substr(start, end - start)));
    pos = end + close.size();
  }
  return plans;
}

}  // namespace gluec
