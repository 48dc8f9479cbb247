#pragma once

// The modulation demo: a UI with three parameter entries (modf, carf,
// timed), three mode toggles and a plot button. Handlers are host builtins
// that only talk to the toolkit through feval, so every click travels
// trampoline -> feval -> glue -> toolkit.
//
//   am    = 2 (1 + 0.5 cos(wm t)) cos(wc t)
//   dsbsc = 2 cos(wm t) cos(wc t)
//   ssbsc = cos((wc + wm) t)
//
// with wm = 2 pi modf, wc = 2 pi carf, t = range(0, timed/1000, timed).

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gluec/mock_toolkit.hpp"
#include "gluec/runtime.hpp"
#include "gluec/session.hpp"
#include "gluec/value.hpp"

namespace gluec::demo {

enum class Mode { Am = 1, Dsbsc = 2, Ssbsc = 3 };

inline std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Am: return "am";
    case Mode::Dsbsc: return "dsbsc";
    case Mode::Ssbsc: return "ssbsc";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::Am, Mode::Dsbsc, Mode::Ssbsc})
    if (mode_name(m) == s) return m;
  return std::nullopt;
}

struct Params {
  double modf = 2;
  double carf = 20;
  double timed = 1;
  Mode mode = Mode::Am;
};

struct Result {
  Mode mode = Mode::Am;
  std::vector<double> t;
  std::vector<double> signal;
  std::string text;  // the printed report
};

namespace detail {

inline Value call1(Runtime& rt, std::string_view fn, std::initializer_list<Value> args) {
  auto out = rt.feval(fn, args);
  if (out.size() != 1)
    throw InterpError(InterpError::Kind::ForeignFault, std::string(fn) + " returned " + std::to_string(out.size()) +
                                                           " values, expected 1");
  return std::move(out[0]);
}

inline double entry_number(Runtime& rt, std::string_view entry) {
  const Value w = call1(rt, "mock_ui_get_widget", {rt.global_get("ui"), Value::text(std::string(entry))});
  const Value text = call1(rt, "mock_entry_get_text", {w});
  const std::string& s = text.as_text();
  double x = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(x))
    throw InterpError(InterpError::Kind::TypeMismatch, std::string(entry) + ": '" + s + "' is not a number");
  return x;
}

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace detail

/// Defines on_radiobutton{1,2,3}_clicked and on_button1_clicked. They read
/// the global "ui" and write globals "choice", "t" and "signal".
inline void install_handlers(Runtime& rt) {
  for (int k = 1; k <= 3; ++k) {
    rt.symbols().define_builtin("on_radiobutton" + std::to_string(k) + "_clicked",
                                [k](Runtime& r, std::span<const Value> args) {
                                  if (args.size() != 1)
                                    throw InterpError(InterpError::Kind::Arity, "radio handler takes the widget");
                                  if (detail::call1(r, "mock_toggle_get_active", {args[0]}).as_scalar() != 0)
                                    r.global_set("choice", Value::scalar(k));
                                  return std::vector<Value>{};
                                });
  }

  rt.symbols().define_builtin("on_button1_clicked", [](Runtime& r, std::span<const Value> args) {
    if (args.size() != 1) throw InterpError(InterpError::Kind::Arity, "on_button1_clicked takes the widget");
    const double modf = detail::entry_number(r, "entry1");
    const double carf = detail::entry_number(r, "entry2");
    const double timed = detail::entry_number(r, "entry3");
    const double wm = 2 * std::numbers::pi * modf;
    const double wc = 2 * std::numbers::pi * carf;
    const Value t = detail::call1(r, "range", {Value::scalar(0), Value::scalar(timed / 1000), Value::scalar(timed)});
    auto s = [](double k) { return Value::scalar(k); };
    auto cos_of = [&](double w) { return detail::call1(r, "cos", {detail::call1(r, "scale", {s(w), t})}); };

    const Value choice = r.global_get("choice");
    if (!choice.is_scalar()) throw InterpError(InterpError::Kind::ForeignFault, "no modulation mode selected");
    Value sig;
    switch (static_cast<int>(choice.as_scalar())) {
      case 1: {
        const Value env = detail::call1(r, "ew_add", {s(1), detail::call1(r, "scale", {s(0.5), cos_of(wm)})});
        sig = detail::call1(r, "ew_mul", {detail::call1(r, "scale", {s(2), env}), cos_of(wc)});
        break;
      }
      case 2:
        sig = detail::call1(r, "ew_mul", {detail::call1(r, "scale", {s(2), cos_of(wm)}), cos_of(wc)});
        break;
      case 3:
        sig = cos_of(wc + wm);
        break;
      default:
        throw InterpError(InterpError::Kind::ForeignFault, "unknown modulation choice " + to_string(choice));
    }
    r.global_set("t", t);
    r.global_set("signal", sig);
    return std::vector<Value>{};
  });
}

/// Loads the UI, types the parameters into the entries, autoconnects,
/// clicks the mode toggle and then the plot button.
inline Result run(Session& session, std::string_view ui_text, const Params& params) {
  if (!(params.timed > 0)) throw InterpError(InterpError::Kind::TypeMismatch, "timed must be > 0");
  Runtime& rt = session.runtime;
  auto& tk = session.toolkit;

  const mock::UiHandle ui = tk.ui_load(ui_text);
  rt.global_set("ui", Value::scalar(static_cast<double>(ui.index)));
  install_handlers(rt);
  tk.entry_set_text(tk.ui_widget_ref(ui, "entry1"), detail::format_number(params.modf));
  tk.entry_set_text(tk.ui_widget_ref(ui, "entry2"), detail::format_number(params.carf));
  tk.entry_set_text(tk.ui_widget_ref(ui, "entry3"), detail::format_number(params.timed));
  tk.ui_autoconnect(ui);

  rt.feval("mock_init", std::span<const Value>{});
  rt.feval("mock_widget_show_all", {tk.ui_get_widget(ui, "window")});

  const int chosen = static_cast<int>(params.mode);
  for (int k = 1; k <= 3; ++k)
    rt.feval("mock_toggle_set_active",
             {tk.ui_get_widget(ui, "radiobutton" + std::to_string(k)), Value::scalar(k == chosen ? 1 : 0)});
  rt.feval("mock_emit", {tk.ui_get_widget(ui, "radiobutton" + std::to_string(chosen)), Value::text("clicked")});
  rt.feval("mock_emit", {tk.ui_get_widget(ui, "button1"), Value::text("clicked")});

  Result res;
  res.mode = params.mode;
  const Value t = rt.global_get("t");
  const Value sig = rt.global_get("signal");
  if (!t.is_vector() || !sig.is_vector())
    throw InterpError(InterpError::Kind::ForeignFault, "plot handler did not produce a signal");
  res.t = t.as_vector();
  res.signal = sig.as_vector();

  // Sample points timed/4 and timed/2 sit at indices 250 and 500.
  const std::string name(mode_name(params.mode));
  const std::size_t last = res.t.size() - 1;
  for (std::size_t idx : {std::size_t{0}, last / 4, last / 2}) {
    const double v = detail::call1(rt, "sample", {sig, Value::scalar(static_cast<double>(idx))}).as_scalar();
    res.text += name + "(" + detail::format_number(res.t[idx]) + ")=" + detail::format_number(v) + "\n";
  }
  double peak = 0;
  for (double v : res.signal) peak = std::max(peak, std::fabs(v));
  res.text += "max|" + name + "|=" + detail::format_number(peak) + "\n";
  return res;
}

}  // namespace gluec::demo
