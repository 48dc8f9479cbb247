#pragma once

// Hand-written direct bindings for the generatable fixture functions. They
// call the toolkit's native API without going through any GluePlan and serve
// as the oracle that planned glue is compared against.

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gluec/mock_toolkit.hpp"
#include "gluec/runtime.hpp"
#include "gluec/value.hpp"

namespace testsupport::oracle {

using gluec::CString;
using gluec::ForeignRef;
using gluec::InterpError;
using gluec::Runtime;
using gluec::Value;
using gluec::mock::MockToolkit;

using HandFn = std::function<std::vector<Value>(Runtime&, MockToolkit&, std::span<const Value>)>;

namespace detail {

inline void arity(std::span<const Value> a, std::size_t n) {
  if (a.size() != n) throw InterpError(InterpError::Kind::Arity, "wrong number of arguments");
}

inline ForeignRef widget(Runtime& rt, const Value& v, const char* cls) {
  if (v.is_nil()) throw InterpError(InterpError::Kind::NullViolation, "widget must not be nil");
  return rt.unbox(v, cls);
}

inline CString label(const Value& v) {
  if (v.is_nil()) return std::nullopt;
  if (!v.is_text()) throw InterpError(InterpError::Kind::TypeMismatch, "label must be text");
  return v.as_text();
}

inline std::string text(const Value& v) {
  if (v.is_nil()) throw InterpError(InterpError::Kind::NullViolation, "text must not be nil");
  if (!v.is_text()) throw InterpError(InterpError::Kind::TypeMismatch, "expected text");
  return v.as_text();
}

inline std::int32_t c_int(const Value& v) {
  if (v.is_nil()) throw InterpError(InterpError::Kind::NullViolation, "int must not be nil");
  if (!v.is_scalar()) throw InterpError(InterpError::Kind::TypeMismatch, "expected scalar");
  const double t = std::trunc(v.as_scalar());
  if (!(t > -2147483648.0 && t < 2147483648.0)) throw InterpError(InterpError::Kind::TypeMismatch, "out of range");
  return static_cast<std::int32_t>(t);
}

template <typename F>
auto native(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InterpError&) {
    throw;
  } catch (const std::exception& e) {
    throw InterpError(InterpError::Kind::ForeignFault, e.what());
  }
}

}  // namespace detail

inline const std::map<std::string, HandFn>& hand_bindings() {
  using namespace detail;
  using R = std::vector<Value>;
  static const std::map<std::string, HandFn> table{
      {"mock_init",
       [](Runtime&, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 0);
         tk.init();
         return R{};
       }},
      {"mock_button_new",
       [](Runtime& rt, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 1);
         return R{rt.box(tk.button_new(label(a[0])), "MockButton")};
       }},
      {"mock_toggle_new",
       [](Runtime& rt, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 1);
         return R{rt.box(tk.toggle_new(label(a[0])), "MockToggle")};
       }},
      {"mock_toggle_get_active",
       [](Runtime& rt, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 1);
         const ForeignRef w = widget(rt, a[0], "MockToggle");
         return R{Value::scalar(native([&] { return tk.toggle_get_active(w); }))};
       }},
      {"mock_toggle_set_active",
       [](Runtime& rt, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 2);
         const ForeignRef w = widget(rt, a[0], "MockToggle");
         const std::int32_t on = c_int(a[1]);
         native([&] { tk.toggle_set_active(w, on); });
         return R{};
       }},
      {"mock_window_new",
       [](Runtime& rt, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 0);
         return R{rt.box(tk.window_new(), "MockWindow")};
       }},
      {"mock_container_add",
       [](Runtime& rt, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 2);
         const ForeignRef p = widget(rt, a[0], "MockWidget");
         const ForeignRef c = widget(rt, a[1], "MockWidget");
         native([&] { tk.container_add(p, c); });
         return R{};
       }},
      {"mock_widget_show_all",
       [](Runtime& rt, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 1);
         const ForeignRef w = widget(rt, a[0], "MockWidget");
         native([&] { tk.widget_show_all(w); });
         return R{};
       }},
      {"mock_signal_connect",
       [](Runtime& rt, MockToolkit& tk, std::span<const Value> a) {
         arity(a, 3);
         const ForeignRef w = widget(rt, a[0], "MockWidget");
         const CString signal = text(a[1]);
         const CString fn = text(a[2]);
         native([&] { tk.signal_connect(w, signal, fn); });
         // The host_fn copy is owned by the glue and freed after the call.
         tk.release(gluec::MarshalRule::StringToCstr, fn);
         return R{};
       }},
  };
  return table;
}

inline std::vector<Value> hand_call(Runtime& rt, MockToolkit& tk, const std::string& fn, std::span<const Value> args) {
  return hand_bindings().at(fn)(rt, tk, args);
}

}  // namespace testsupport::oracle
