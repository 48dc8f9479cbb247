#pragma once

// GluePlan: the ordered marshalling IR for one foreign function.
//
//   ArityCheck, TypeCheck*, MarshalIn*, InvokeForeign, MarshalOut?, Cleanup*, Return
//
// Every argument is fully validated before any of them is translated, and
// nothing foreign is touched before InvokeForeign. The same plan is both
// rendered to source text (emitter) and executed directly (runtime).
//
// Canonical dump, one step per line:
//   plan <cname>
//   arity <min> <max>
//   typecheck <arg> <host> <class|-> <nullable|required>
//   marshal-in <arg> <rule>
//   invoke <cname>
//   marshal-out <rule> <class|->
//   cleanup <rule> <arg>
//   return <count>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gluec/api_model.hpp"
#include "gluec/diagnostic.hpp"
#include "gluec/marshal.hpp"
#include "gluec/overrides.hpp"
#include "gluec/typemap.hpp"

namespace gluec {

namespace step {

struct ArityCheck {
  int min = 0;
  int max = 0;
  friend bool operator==(const ArityCheck&, const ArityCheck&) = default;
};
struct TypeCheck {
  int arg_index = 0;
  HostType host = HostType::Any;
  std::string expected_class;  // empty = none
  bool nullable = false;
  friend bool operator==(const TypeCheck&, const TypeCheck&) = default;
};
struct MarshalIn {
  int arg_index = 0;
  MarshalRule rule = MarshalRule::None;
  friend bool operator==(const MarshalIn&, const MarshalIn&) = default;
};
struct InvokeForeign {
  std::string cname;
  friend bool operator==(const InvokeForeign&, const InvokeForeign&) = default;
};
struct MarshalOut {
  MarshalRule rule = MarshalRule::None;
  std::string cls;  // empty = none
  friend bool operator==(const MarshalOut&, const MarshalOut&) = default;
};
struct Cleanup {
  MarshalRule rule = MarshalRule::None;
  int arg_index = 0;
  friend bool operator==(const Cleanup&, const Cleanup&) = default;
};
struct Return {
  int count = 0;
  friend bool operator==(const Return&, const Return&) = default;
};

}  // namespace step

using GlueStep = std::variant<step::ArityCheck, step::TypeCheck, step::MarshalIn, step::InvokeForeign,
                              step::MarshalOut, step::Cleanup, step::Return>;

struct GluePlan {
  std::string cname;
  std::vector<GlueStep> steps;

  int arity() const {
    for (const auto& s : steps)
      if (const auto* a = std::get_if<step::ArityCheck>(&s)) return a->max;
    return 0;
  }
  const step::MarshalOut* marshal_out() const {
    for (const auto& s : steps)
      if (const auto* m = std::get_if<step::MarshalOut>(&s)) return m;
    return nullptr;
  }

  friend bool operator==(const GluePlan&, const GluePlan&) = default;
};

struct TrampolinePlan {
  std::string signal;
  std::string callback;
  std::string property_key;  // "host-callback:" + signal
  std::vector<MarshalRule> arg_marshals;

  friend bool operator==(const TrampolinePlan&, const TrampolinePlan&) = default;
};

inline constexpr std::string_view kCallbackPropertyPrefix = "host-callback:";

class PlanError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Canonical text dump

inline std::string dump_step(const GlueStep& s) {
  std::ostringstream os;
  std::visit(
      [&](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, step::ArityCheck>) {
          os << "arity " << st.min << ' ' << st.max;
        } else if constexpr (std::is_same_v<T, step::TypeCheck>) {
          os << "typecheck " << st.arg_index << ' ' << to_string(st.host) << ' '
             << (st.expected_class.empty() ? "-" : st.expected_class) << ' '
             << (st.nullable ? "nullable" : "required");
        } else if constexpr (std::is_same_v<T, step::MarshalIn>) {
          os << "marshal-in " << st.arg_index << ' ' << to_string(st.rule);
        } else if constexpr (std::is_same_v<T, step::InvokeForeign>) {
          os << "invoke " << st.cname;
        } else if constexpr (std::is_same_v<T, step::MarshalOut>) {
          os << "marshal-out " << to_string(st.rule) << ' ' << (st.cls.empty() ? "-" : st.cls);
        } else if constexpr (std::is_same_v<T, step::Cleanup>) {
          os << "cleanup " << to_string(st.rule) << ' ' << st.arg_index;
        } else {
          os << "return " << st.count;
        }
      },
      s);
  return os.str();
}

inline std::string dump_plan(const GluePlan& plan) {
  std::string out = "plan " + plan.cname + "\n";
  for (const auto& s : plan.steps) out += dump_step(s) + "\n";
  return out;
}

/// Inverse of dump_plan. Throws PlanError on malformed text.
inline GluePlan parse_plan_dump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  GluePlan plan;
  bool have_header = false;

  auto fail = [](const std::string& why, const std::string& l) -> PlanError {
    return PlanError("bad plan dump line '" + l + "': " + why);
  };
  auto int_field = [&](std::istringstream& ls, const std::string& l) {
    int v = 0;
    if (!(ls >> v)) throw fail("expected integer", l);
    return v;
  };
  auto word = [&](std::istringstream& ls, const std::string& l) {
    std::string w;
    if (!(ls >> w)) throw fail("missing field", l);
    return w;
  };
  auto rule_field = [&](std::istringstream& ls, const std::string& l) {
    auto r = parse_marshal_rule(word(ls, l));
    if (!r) throw fail("unknown rule", l);
    return *r;
  };
  auto cls_field = [&](std::istringstream& ls, const std::string& l) {
    std::string c = word(ls, l);
    return c == "-" ? std::string() : c;
  };

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string op;
    ls >> op;
    if (!have_header) {
      if (op != "plan") throw fail("expected 'plan <cname>'", line);
      plan.cname = word(ls, line);
      have_header = true;
    } else if (op == "arity") {
      step::ArityCheck a;
      a.min = int_field(ls, line);
      a.max = int_field(ls, line);
      plan.steps.emplace_back(a);
    } else if (op == "typecheck") {
      step::TypeCheck t;
      t.arg_index = int_field(ls, line);
      auto h = parse_host_type(word(ls, line));
      if (!h) throw fail("unknown host type", line);
      t.host = *h;
      t.expected_class = cls_field(ls, line);
      const std::string n = word(ls, line);
      if (n != "nullable" && n != "required") throw fail("expected nullable|required", line);
      t.nullable = n == "nullable";
      plan.steps.emplace_back(t);
    } else if (op == "marshal-in") {
      step::MarshalIn m;
      m.arg_index = int_field(ls, line);
      m.rule = rule_field(ls, line);
      plan.steps.emplace_back(m);
    } else if (op == "invoke") {
      plan.steps.emplace_back(step::InvokeForeign{word(ls, line)});
    } else if (op == "marshal-out") {
      step::MarshalOut m;
      m.rule = rule_field(ls, line);
      m.cls = cls_field(ls, line);
      plan.steps.emplace_back(m);
    } else if (op == "cleanup") {
      step::Cleanup c;
      c.rule = rule_field(ls, line);
      c.arg_index = int_field(ls, line);
      plan.steps.emplace_back(c);
    } else if (op == "return") {
      plan.steps.emplace_back(step::Return{int_field(ls, line)});
    } else {
      throw fail("unknown step", line);
    }
    std::string extra;
    if (ls >> extra) throw fail("trailing fields", line);
  }
  if (!have_header) throw PlanError("empty plan dump");
  return plan;
}

// ---------------------------------------------------------------------------
// Order invariant

/// Returns a description of the first violated GluePlan invariant, or
/// nullopt if the plan is well-formed.
inline std::optional<std::string> check_plan(const GluePlan& plan) {
  // Phase ranks in mandatory order; TypeCheck/MarshalIn/Cleanup repeat.
  auto rank = [](const GlueStep& s) { return static_cast<int>(s.index()); };
  const auto& steps = plan.steps;
  if (steps.empty() || !std::holds_alternative<step::ArityCheck>(steps.front()))
    return "plan must start with ArityCheck";
  const auto& arity = std::get<step::ArityCheck>(steps.front());
  if (arity.min < 0 || arity.max < arity.min) return "invalid arity bounds";
  if (!std::holds_alternative<step::Return>(steps.back())) return "plan must end with Return";

  int last_rank = -1;
  int counts[std::variant_size_v<GlueStep>] = {};
  int last_check = -1, last_in = -1, last_cleanup = -1;
  std::vector<int> checked(static_cast<std::size_t>(arity.max), 0), marshalled(checked);

  for (const auto& s : steps) {
    const int r = rank(s);
    if (r < last_rank) return "step '" + dump_step(s) + "' is out of order";
    last_rank = r;
    ++counts[r];
    auto in_range = [&](int idx) { return idx >= 0 && idx < arity.max; };
    if (const auto* t = std::get_if<step::TypeCheck>(&s)) {
      if (!in_range(t->arg_index)) return "TypeCheck arg_index out of range";
      if (t->arg_index <= last_check) return "TypeChecks must ascend by arg_index";
      last_check = t->arg_index;
      ++checked[static_cast<std::size_t>(t->arg_index)];
    } else if (const auto* m = std::get_if<step::MarshalIn>(&s)) {
      if (!in_range(m->arg_index)) return "MarshalIn arg_index out of range";
      if (m->arg_index <= last_in) return "MarshalIns must ascend by arg_index";
      last_in = m->arg_index;
      ++marshalled[static_cast<std::size_t>(m->arg_index)];
    } else if (const auto* c = std::get_if<step::Cleanup>(&s)) {
      if (!in_range(c->arg_index)) return "Cleanup arg_index out of range";
      if (c->arg_index <= last_cleanup) return "Cleanups must ascend by arg_index";
      last_cleanup = c->arg_index;
    } else if (const auto* ret = std::get_if<step::Return>(&s)) {
      if (ret->count != 0 && ret->count != 1) return "Return count must be 0 or 1";
    }
  }
  if (counts[0] != 1) return "exactly one ArityCheck required";
  if (counts[3] != 1) return "exactly one InvokeForeign required";
  if (counts[4] > 1) return "at most one MarshalOut allowed";
  if (counts[6] != 1) return "exactly one Return required";
  for (int i = 0; i < arity.max; ++i) {
    if (checked[static_cast<std::size_t>(i)] != 1) return "arg " + std::to_string(i) + " lacks exactly one TypeCheck";
    if (marshalled[static_cast<std::size_t>(i)] != 1)
      return "arg " + std::to_string(i) + " lacks exactly one MarshalIn";
  }
  const int ret_count = std::get<step::Return>(steps.back()).count;
  if (ret_count != counts[4]) return "Return count must match presence of MarshalOut";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Planning

/// Compiles a Generatable function. Throws PlanError when the function has
/// an unresolved type, i.e. the caller skipped classify_function.
inline GluePlan plan_function(const ApiCorpus& corpus, const TypemapTable& table, const FunctionDecl& fn) {
  std::vector<Resolution> params;
  params.reserve(fn.params.size());
  for (const auto& p : fn.params) {
    auto r = resolve_type(table, corpus, p.type, Position::Param);
    if (!r.resolved())
      throw PlanError("plan_function(" + fn.cname + "): param " + p.name + " is not generatable: " + r.reason);
    params.push_back(std::move(r));
  }
  const auto ret = resolve_type(table, corpus, fn.returns, Position::Return);
  if (!ret.resolved()) throw PlanError("plan_function(" + fn.cname + "): return is not generatable: " + ret.reason);

  const int n = static_cast<int>(fn.params.size());
  GluePlan plan;
  plan.cname = fn.cname;
  plan.steps.emplace_back(step::ArityCheck{n, n});
  for (int i = 0; i < n; ++i) {
    const auto& r = params[static_cast<std::size_t>(i)];
    plan.steps.emplace_back(step::TypeCheck{i, r.host, r.object_class, fn.params[static_cast<std::size_t>(i)].nullable});
  }
  for (int i = 0; i < n; ++i) plan.steps.emplace_back(step::MarshalIn{i, params[static_cast<std::size_t>(i)].rule_in});
  plan.steps.emplace_back(step::InvokeForeign{fn.cname});
  const bool returns_value = !fn.returns.is_void();
  if (returns_value) plan.steps.emplace_back(step::MarshalOut{ret.rule_out, ret.object_class});
  for (int i = 0; i < n; ++i)
    if (const auto& c = params[static_cast<std::size_t>(i)].cleanup) plan.steps.emplace_back(step::Cleanup{*c, i});
  plan.steps.emplace_back(step::Return{returns_value ? 1 : 0});
  return plan;
}

/// Compiles the generic-callback dispatch for one signal. Callback params
/// travel foreign -> host, so each uses its out-direction rule.
inline TrampolinePlan plan_trampoline(const ApiCorpus& corpus, const TypemapTable& table, const CallbackDecl& cb,
                                      const SignalDecl& sig) {
  if (sig.handler != cb.name)
    throw PlanError("plan_trampoline: signal '" + sig.name + "' is not handled by callback '" + cb.name + "'");
  TrampolinePlan plan;
  plan.signal = sig.name;
  plan.callback = cb.name;
  plan.property_key = std::string(kCallbackPropertyPrefix) + sig.name;
  std::vector<std::string> bad;
  for (const auto& p : cb.params) {
    const auto r = resolve_type(table, corpus, p.type, Position::Return);
    if (!r.resolved()) {
      bad.push_back(p.name + " (" + r.reason + ")");
      continue;
    }
    plan.arg_marshals.push_back(r.rule_out);
  }
  if (!bad.empty()) {
    std::string msg = "plan_trampoline(" + cb.name + "): unresolved callback params:";
    for (const auto& b : bad) msg += " " + b;
    throw PlanError(msg);
  }
  return plan;
}

struct ModulePlan {
  std::vector<GluePlan> functions;         // lexicographic by cname
  std::vector<TrampolinePlan> trampolines;  // lexicographic by signal
  Report report;

  const GluePlan* find_function(std::string_view cname) const {
    for (const auto& p : functions)
      if (p.cname == cname) return &p;
    return nullptr;
  }
  const TrampolinePlan* find_trampoline(std::string_view signal) const {
    for (const auto& t : trampolines)
      if (t.signal == signal) return &t;
    return nullptr;
  }
};

inline ModulePlan plan_module(const ApiCorpus& corpus, const TypemapTable& table, const OverrideSet& overrides) {
  ModulePlan out;
  out.report = coverage_report(table, corpus, overrides);
  for (const auto& entry : out.report.entries)
    if (entry.status.generatable()) out.functions.push_back(plan_function(corpus, table, corpus.functions.at(entry.cname)));
  for (const auto& [name, sig] : corpus.signals) {
    const auto* cb = corpus.find_callback(sig.handler);
    if (!cb) {
      out.report.diagnostics.push_back(
          {Severity::Error, name, "unresolved callback '" + sig.handler + "'", sig.location});
      continue;
    }
    try {
      out.trampolines.push_back(plan_trampoline(corpus, table, *cb, sig));
    } catch (const PlanError& e) {
      out.report.diagnostics.push_back({Severity::Error, name, e.what(), sig.location});
    }
  }
  return out;
}

}  // namespace gluec
