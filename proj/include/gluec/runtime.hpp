#pragma once

// Miniature dynamic host runtime: symbol table with feval dispatch, global
// variables, the handle registry, and the GluePlan interpreter that runs
// plans directly against a ForeignEnv.
//
// A Runtime and the ForeignEnv it drives form one single-threaded unit.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gluec/api_model.hpp"
#include "gluec/glue_plan.hpp"
#include "gluec/handle_registry.hpp"
#include "gluec/marshal.hpp"
#include "gluec/value.hpp"

namespace gluec {

// A C-level value crossing the foreign boundary. An absent CString is NULL.
using CString = std::optional<std::string>;
using ForeignValue = std::variant<std::monostate, std::int32_t, double, CString, ForeignRef>;

class ForeignEnv {
 public:
  virtual ~ForeignEnv() = default;

  // Calls the foreign function `cname`. Any exception other than
  // InterpError is reported to the host as ForeignFault.
  virtual ForeignValue invoke(std::string_view cname, std::span<const ForeignValue> args) = 0;

  // Post-call cleanup for an argument produced by `rule`.
  virtual void release(MarshalRule /*rule*/, const ForeignValue& /*value*/) {}

  // Dynamic class of a foreign object, if the environment knows it.
  virtual std::string class_of(ForeignRef /*ref*/) const { return {}; }
};

class Runtime;

using Builtin = std::function<std::vector<Value>(Runtime&, std::span<const Value>)>;

struct FunctionEntry {
  std::variant<Builtin, GluePlan> impl;

  bool is_glue() const { return std::holds_alternative<GluePlan>(impl); }
};

class SymbolTable {
 public:
  void define_builtin(std::string name, Builtin fn) { functions_[std::move(name)] = FunctionEntry{std::move(fn)}; }
  void define_glue(GluePlan plan) {
    std::string name = plan.cname;
    functions_[std::move(name)] = FunctionEntry{std::move(plan)};
  }

  const FunctionEntry* find(std::string_view name) const {
    auto it = functions_.find(std::string(name));
    return it == functions_.end() ? nullptr : &it->second;
  }
  bool has_function(std::string_view name) const { return find(name) != nullptr; }

  void global_set(const std::string& name, Value v) { globals_[name] = std::move(v); }
  Value global_get(const std::string& name) const {
    auto it = globals_.find(name);
    return it == globals_.end() ? Value::nil() : it->second;
  }

  const std::map<std::string, FunctionEntry>& functions() const { return functions_; }

 private:
  std::map<std::string, FunctionEntry> functions_;
  std::map<std::string, Value> globals_;
};

struct RuntimeOptions {
  std::size_t recursion_limit = 64;
  std::uint64_t seed = std::random_device{}();
};

class Runtime {
 public:
  Runtime(const ApiCorpus& corpus, ForeignEnv& env, RuntimeOptions options = {})
      : corpus_(corpus), env_(env), registry_(options.seed), recursion_limit_(options.recursion_limit) {}

  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  const ApiCorpus& corpus() const { return corpus_; }
  ForeignEnv& env() { return env_; }
  SymbolTable& symbols() { return symbols_; }
  const SymbolTable& symbols() const { return symbols_; }
  HandleRegistry& registry() { return registry_; }
  const HandleRegistry& registry() const { return registry_; }
  std::size_t depth() const { return depth_; }

  void global_set(const std::string& name, Value v) { symbols_.global_set(name, std::move(v)); }
  Value global_get(const std::string& name) const { return symbols_.global_get(name); }

  std::vector<Value> feval(std::string_view name, std::span<const Value> args);
  std::vector<Value> feval(std::string_view name, std::initializer_list<Value> args) {
    return feval(name, std::span<const Value>(args.begin(), args.size()));
  }

  // -- marshalling primitives shared by execute_plan and trampolines -------

  // Identity-preserving; prefers the environment's dynamic class when it is
  // a known subclass of `declared_class`.
  Value box(ForeignRef ref, std::string_view declared_class) {
    if (ref.is_null()) return Value::nil();
    if (registry_.find(ref)) return registry_.box(ref, declared_class);
    std::string cls(declared_class);
    const std::string dynamic = env_.class_of(ref);
    if (!dynamic.empty() && corpus_.find_object(dynamic) &&
        (cls.empty() || (corpus_.find_object(cls) && object_is_a(corpus_, dynamic, cls))))
      cls = dynamic;
    if (cls.empty()) throw InterpError(InterpError::Kind::ForeignFault, "cannot box object of unknown class");
    return registry_.box(ref, cls);
  }

  ForeignRef unbox(const Value& v, std::string_view expected_class) const {
    return registry_.unbox(corpus_, v, expected_class);
  }

  void type_check(const step::TypeCheck& check, const Value& v, std::string_view fn) const;
  ForeignValue marshal_in(MarshalRule rule, const Value& v, std::string_view cls, std::string_view fn) const;
  Value marshal_out(MarshalRule rule, const ForeignValue& fv, std::string_view cls, std::string_view fn);

 private:
  const ApiCorpus& corpus_;
  ForeignEnv& env_;
  SymbolTable symbols_;
  HandleRegistry registry_;
  std::size_t recursion_limit_;
  std::size_t depth_ = 0;
};

namespace detail {

inline std::string arg_label(std::string_view fn, int index) {
  return std::string(fn) + ": argument " + std::to_string(index);
}

inline std::string_view foreign_kind(const ForeignValue& fv) {
  switch (fv.index()) {
    case 0: return "void";
    case 1: return "int";
    case 2: return "double";
    case 3: return "cstr";
    case 4: return "object";
  }
  return "?";
}

}  // namespace detail

inline void Runtime::type_check(const step::TypeCheck& check, const Value& v, std::string_view fn) const {
  const auto label = detail::arg_label(fn, check.arg_index);
  if (check.host == HostType::Any) return;
  if (v.is_nil()) {
    if (!check.nullable) throw InterpError(InterpError::Kind::NullViolation, label + " must not be nil");
    if (check.host == HostType::String || check.host == HostType::Handle) return;
    throw InterpError(InterpError::Kind::TypeMismatch,
                      label + ": nil is not representable as " + std::string(to_string(check.host)));
  }
  auto expect = [&](bool ok) {
    if (!ok)
      throw InterpError(InterpError::Kind::TypeMismatch, label + ": expected " + std::string(to_string(check.host)) +
                                                             ", got " + std::string(kind_name(v.kind())));
  };
  switch (check.host) {
    case HostType::Scalar: expect(v.is_scalar()); break;
    case HostType::Bool: expect(v.is_bool()); break;
    case HostType::String: expect(v.is_text()); break;
    case HostType::Vector: expect(v.is_vector()); break;
    case HostType::Handle:
      expect(v.is_handle());
      if (!check.expected_class.empty()) {
        try {
          (void)unbox(v, check.expected_class);
        } catch (const InterpError& e) {
          throw InterpError(e.kind(), label + ": " + e.message());
        }
      } else if (!registry_.resolve(v.as_handle())) {
        throw InterpError(InterpError::Kind::StaleHandle, label + ": handle is not live");
      }
      break;
    case HostType::Any: break;
  }
}

inline ForeignValue Runtime::marshal_in(MarshalRule rule, const Value& v, std::string_view cls,
                                        std::string_view fn) const {
  auto mismatch = [&](std::string_view want) {
    return InterpError(InterpError::Kind::TypeMismatch, std::string(fn) + ": " + std::string(to_string(rule)) +
                                                            " needs " + std::string(want) + ", got " +
                                                            std::string(kind_name(v.kind())));
  };
  switch (rule) {
    case MarshalRule::ScalarToInt:
    case MarshalRule::EnumToInt: {
      if (!v.is_scalar()) throw mismatch("scalar");
      const double x = std::trunc(v.as_scalar());
      if (!(std::fabs(x) < 2147483648.0))
        throw InterpError(InterpError::Kind::TypeMismatch,
                          std::string(fn) + ": " + to_string(v) + " is outside the foreign int range");
      return static_cast<std::int32_t>(x);
    }
    case MarshalRule::ScalarToDouble:
      if (!v.is_scalar()) throw mismatch("scalar");
      return v.as_scalar();
    case MarshalRule::BoolToInt:
      if (!v.is_bool()) throw mismatch("bool");
      return static_cast<std::int32_t>(v.as_bool() ? 1 : 0);
    case MarshalRule::StringToCstr:
      if (v.is_nil()) return CString{};
      if (!v.is_text()) throw mismatch("text");
      return CString{v.as_text()};
    case MarshalRule::HandleUnbox:
      if (v.is_nil()) return ForeignRef{};
      return unbox(v, cls);
    case MarshalRule::None:
      return std::monostate{};
    default:
      throw InterpError(InterpError::Kind::ForeignFault,
                        std::string(fn) + ": '" + std::string(to_string(rule)) + "' is not an in-direction rule");
  }
}

inline Value Runtime::marshal_out(MarshalRule rule, const ForeignValue& fv, std::string_view cls,
                                  std::string_view fn) {
  auto bad = [&](std::string_view want) {
    return InterpError(InterpError::Kind::ForeignFault, std::string(fn) + ": foreign side produced " +
                                                            std::string(detail::foreign_kind(fv)) + ", " +
                                                            std::string(to_string(rule)) + " needs " +
                                                            std::string(want));
  };
  switch (rule) {
    case MarshalRule::IntToScalar:
      if (const auto* i = std::get_if<std::int32_t>(&fv)) return Value::scalar(*i);
      throw bad("int");
    case MarshalRule::DoubleToScalar:
      if (const auto* d = std::get_if<double>(&fv)) return Value::scalar(*d);
      throw bad("double");
    case MarshalRule::IntToBool:
      if (const auto* i = std::get_if<std::int32_t>(&fv)) return Value::boolean(*i != 0);
      throw bad("int");
    case MarshalRule::CstrToString:
      if (const auto* s = std::get_if<CString>(&fv)) return *s ? Value::text(**s) : Value::nil();
      throw bad("cstr");
    case MarshalRule::HandleBox:
      if (const auto* r = std::get_if<ForeignRef>(&fv)) return box(*r, cls);
      throw bad("object");
    case MarshalRule::None:
      return Value::nil();
    default:
      throw InterpError(InterpError::Kind::ForeignFault,
                        std::string(fn) + ": '" + std::string(to_string(rule)) + "' is not an out-direction rule");
  }
}

/// Runs `plan` step by step. The first failing step aborts with its
/// InterpError; nothing foreign is called unless every check and
/// translation succeeded. Cleanups run iff the foreign call was made.
inline std::vector<Value> execute_plan(Runtime& rt, const GluePlan& plan, std::span<const Value> args) {
  const std::string& fn = plan.cname;
  std::vector<ForeignValue> foreign(args.size());
  std::map<int, std::string> arg_class;
  ForeignValue result;
  Value out;
  bool invoked = false;

  auto run_cleanups = [&] {
    for (const auto& s : plan.steps)
      if (const auto* c = std::get_if<step::Cleanup>(&s))
        rt.env().release(c->rule, foreign[static_cast<std::size_t>(c->arg_index)]);
  };

  try {
    for (const auto& s : plan.steps) {
      if (const auto* a = std::get_if<step::ArityCheck>(&s)) {
        const auto n = static_cast<int>(args.size());
        if (n < a->min || n > a->max)
          throw InterpError(InterpError::Kind::Arity, fn + ": expected " + std::to_string(a->min) +
                                                          (a->min == a->max ? "" : ".." + std::to_string(a->max)) +
                                                          " argument(s), got " + std::to_string(n));
      } else if (const auto* t = std::get_if<step::TypeCheck>(&s)) {
        rt.type_check(*t, args[static_cast<std::size_t>(t->arg_index)], fn);
        arg_class[t->arg_index] = t->expected_class;
      } else if (const auto* m = std::get_if<step::MarshalIn>(&s)) {
        const auto i = static_cast<std::size_t>(m->arg_index);
        foreign[i] = rt.marshal_in(m->rule, args[i], arg_class[m->arg_index], fn);
      } else if (const auto* inv = std::get_if<step::InvokeForeign>(&s)) {
        invoked = true;
        try {
          result = rt.env().invoke(inv->cname, foreign);
        } catch (const InterpError&) {
          throw;
        } catch (const std::exception& e) {
          throw InterpError(InterpError::Kind::ForeignFault, fn + ": " + e.what());
        }
      } else if (const auto* mo = std::get_if<step::MarshalOut>(&s)) {
        out = rt.marshal_out(mo->rule, result, mo->cls, fn);
      } else if (std::holds_alternative<step::Cleanup>(s)) {
        // Executed as a group below so that a failed MarshalOut still cleans up.
      } else if (const auto* r = std::get_if<step::Return>(&s)) {
        invoked = false;
        run_cleanups();
        if (r->count == 0) return {};
        return {out};
      }
    }
  } catch (...) {
    if (invoked) run_cleanups();
    throw;
  }
  throw PlanError("execute_plan(" + fn + "): plan has no Return step");
}

inline std::vector<Value> Runtime::feval(std::string_view name, std::span<const Value> args) {
  const FunctionEntry* entry = symbols_.find(name);
  if (!entry) throw InterpError(InterpError::Kind::UnknownFunction, "'" + std::string(name) + "' is undefined");
  if (depth_ >= recursion_limit_)
    throw InterpError(InterpError::Kind::ForeignFault,
                      "recursion limit (" + std::to_string(recursion_limit_) + ") exceeded calling " + std::string(name));

  struct DepthGuard {
    std::size_t& d;
    explicit DepthGuard(std::size_t& depth) : d(depth) { ++d; }
    ~DepthGuard() { --d; }
  } guard(depth_);

  // Copy: the callee may redefine symbols.
  const FunctionEntry callee = *entry;
  if (const auto* plan = std::get_if<GluePlan>(&callee.impl)) return execute_plan(*this, *plan, args);
  return std::get<Builtin>(callee.impl)(*this, args);
}

inline void bind_plans(Runtime& rt, const std::vector<GluePlan>& plans) {
  for (const auto& p : plans) rt.symbols().define_glue(p);
}

}  // namespace gluec
