#pragma once

// A simulated foreign widget toolkit behind the ForeignEnv boundary.
//
// Widgets remember, per signal, the *name* of the host function that
// handles it (prop "host-callback:<signal>"). Emitting a signal runs one
// generic trampoline: read the stored name, marshal the emission arguments
// host-ward per the signal's TrampolinePlan, and feval the name. Events are
// injected with emit(); there is no blocking main loop.
//
// UI-spec format (line oriented, '#' starts a comment line):
//   widget <name> <class> [parent=<name>] [key="value"]...
//   handler <widget> <signal> <host-fn>

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gluec/glue_plan.hpp"
#include "gluec/runtime.hpp"
#include "gluec/value.hpp"

namespace gluec::mock {

using WidgetId = std::uint64_t;

struct Widget {
  WidgetId wid = 0;
  std::string cls;
  std::map<std::string, std::string> props;
  std::vector<WidgetId> children;
  std::map<std::string, int> state;
  WidgetId parent = 0;
};

struct EmitRecord {
  WidgetId wid = 0;
  std::string signal;
  std::string handler;  // "" when nothing was connected

  friend bool operator==(const EmitRecord&, const EmitRecord&) = default;
};

struct WidgetStore {
  std::map<WidgetId, Widget> widgets;
  std::vector<EmitRecord> emit_log;
  WidgetId next_wid = 1;
  bool initialized = false;
  std::uint64_t released_cstrs = 0;

  // Stable serialization of everything observable.
  std::string dump() const {
    auto esc = [](const std::string& s) {
      std::string out;
      for (char c : s) {
        if (c == '\\') out += "\\\\";
        else if (c == '\n') out += "\\n";
        else out.push_back(c);
      }
      return out;
    };
    std::ostringstream os;
    os << "initialized " << initialized << '\n' << "released_cstrs " << released_cstrs << '\n';
    for (const auto& [wid, w] : widgets) {
      os << "widget " << wid << ' ' << w.cls << " parent=" << w.parent << '\n';
      for (const auto& [k, v] : w.props) os << "  prop " << esc(k) << '=' << esc(v) << '\n';
      for (const auto& [k, v] : w.state) os << "  state " << k << '=' << v << '\n';
      for (WidgetId c : w.children) os << "  child " << c << '\n';
    }
    for (const auto& e : emit_log) os << "emit " << e.wid << ' ' << esc(e.signal) << ' ' << esc(e.handler) << '\n';
    return os.str();
  }

  // FNV-1a over dump().
  std::uint64_t state_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

class UiError : public std::runtime_error {
 public:
  UiError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct UiWidgetSpec {
  std::string name;
  std::string cls;
  std::optional<std::string> parent;
  std::vector<std::pair<std::string, std::string>> props;
  std::size_t line = 0;
};

struct UiHandlerSpec {
  std::string widget;
  std::string signal;
  std::string host_fn;
  std::size_t line = 0;
};

struct UiSpec {
  std::vector<UiWidgetSpec> widgets;
  std::vector<UiHandlerSpec> handlers;
};

inline const std::map<std::string, std::string>& class_parents() {
  static const std::map<std::string, std::string> parents{
      {"MockWidget", ""},
      {"MockButton", "MockWidget"},
      {"MockToggle", "MockButton"},
      {"MockWindow", "MockWidget"},
      {"MockEntry", "MockWidget"},
  };
  return parents;
}

inline bool class_is_a(std::string cls, std::string_view ancestor) {
  const auto& parents = class_parents();
  while (!cls.empty()) {
    if (cls == ancestor) return true;
    auto it = parents.find(cls);
    if (it == parents.end()) return false;
    cls = it->second;
  }
  return false;
}

namespace detail {

inline bool ident_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
         c == ':' || c == '.';
}

// Splits a UI-spec line into words; key="value" words keep their quotes
// decoded into `key=value`.
inline std::vector<std::string> split_ui_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::string word;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      if (line[i] == '"') {
        ++i;
        bool closed = false;
        while (i < line.size()) {
          if (line[i] == '\\' && i + 1 < line.size() && (line[i + 1] == '"' || line[i + 1] == '\\')) {
            word.push_back(line[i + 1]);
            i += 2;
          } else if (line[i] == '"') {
            ++i;
            closed = true;
            break;
          } else {
            word.push_back(line[i++]);
          }
        }
        if (!closed) throw UiError("unterminated quoted value", line_no);
      } else {
        word.push_back(line[i++]);
      }
    }
    words.push_back(std::move(word));
  }
  return words;
}

inline void require_ident(const std::string& s, std::string_view what, std::size_t line_no) {
  bool ok = !s.empty();
  for (char c : s) ok &= ident_char(c);
  if (!ok) throw UiError("invalid " + std::string(what) + " '" + s + "'", line_no);
}

}  // namespace detail

inline UiSpec parse_ui_spec(std::string_view text) {
  UiSpec spec;
  std::map<std::string, std::size_t> declared;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const auto words = detail::split_ui_line(line, line_no);
    if (words.empty() || words[0].front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    if (words[0] == "widget") {
      if (words.size() < 3) throw UiError("expected: widget <name> <class> ...", line_no);
      UiWidgetSpec w;
      w.name = words[1];
      w.cls = words[2];
      w.line = line_no;
      detail::require_ident(w.name, "widget name", line_no);
      if (!class_parents().count(w.cls)) throw UiError("unknown widget class '" + w.cls + "'", line_no);
      if (declared.count(w.name)) throw UiError("duplicate widget name '" + w.name + "'", line_no);
      for (std::size_t i = 3; i < words.size(); ++i) {
        const auto eq = words[i].find('=');
        if (eq == std::string::npos || eq == 0) throw UiError("expected key=value, got '" + words[i] + "'", line_no);
        std::string key = words[i].substr(0, eq);
        std::string value = words[i].substr(eq + 1);
        if (key == "parent") {
          if (!declared.count(value))
            throw UiError("parent '" + value + "' must be declared before '" + w.name + "'", line_no);
          w.parent = value;
        } else {
          detail::require_ident(key, "property name", line_no);
          w.props.emplace_back(std::move(key), std::move(value));
        }
      }
      declared[w.name] = spec.widgets.size();
      spec.widgets.push_back(std::move(w));
    } else if (words[0] == "handler") {
      if (words.size() != 4) throw UiError("expected: handler <widget> <signal> <host-fn>", line_no);
      UiHandlerSpec h{words[1], words[2], words[3], line_no};
      if (!declared.count(h.widget)) throw UiError("handler for unknown widget '" + h.widget + "'", line_no);
      detail::require_ident(h.signal, "signal name", line_no);
      detail::require_ident(h.host_fn, "host function name", line_no);
      spec.handlers.push_back(std::move(h));
    } else {
      throw UiError("unknown directive '" + words[0] + "'", line_no);
    }
    if (eol == text.size()) break;
  }
  return spec;
}

struct UiHandle {
  std::size_t index = 0;
};

class MockToolkit : public ForeignEnv {
 public:
  MockToolkit() = default;
  MockToolkit(const MockToolkit&) = delete;
  MockToolkit& operator=(const MockToolkit&) = delete;

  // Host side used by the trampoline.
  void attach(Runtime& rt, std::vector<TrampolinePlan> trampolines) {
    runtime_ = &rt;
    trampolines_ = std::move(trampolines);
  }

  const WidgetStore& store() const { return store_; }

  // -- native toolkit API ---------------------------------------------------

  void init() { store_.initialized = true; }

  ForeignRef button_new(const CString& label) { return create("MockButton", {{"label", label.value_or("")}}); }
  ForeignRef toggle_new(const CString& label) { return create("MockToggle", {{"label", label.value_or("")}}); }
  ForeignRef window_new() { return create("MockWindow", {}); }
  ForeignRef entry_new(const std::string& text) { return create("MockEntry", {{"text", text}}); }

  std::int32_t toggle_get_active(ForeignRef w) { return widget(w, "MockToggle").state.at("active"); }

  void toggle_set_active(ForeignRef w, std::int32_t active) {
    Widget& t = widget(w, "MockToggle");
    const int next = active != 0 ? 1 : 0;
    if (t.state["active"] == next) return;
    t.state["active"] = next;
    emit(w, "toggled");
  }

  void container_add(ForeignRef parent, ForeignRef child) {
    Widget& p = widget(parent, "MockWidget");
    Widget& c = widget(child, "MockWidget");
    if (c.parent != 0) throw std::runtime_error("widget " + std::to_string(c.wid) + " already has a parent");
    for (WidgetId up = p.wid; up != 0; up = store_.widgets.at(up).parent)
      if (up == c.wid) throw std::runtime_error("container_add would create a cycle");
    p.children.push_back(c.wid);
    c.parent = p.wid;
  }

  void widget_show_all(ForeignRef w) {
    std::vector<WidgetId> todo{widget(w, "MockWidget").wid};
    while (!todo.empty()) {
      Widget& cur = store_.widgets.at(todo.back());
      todo.pop_back();
      cur.state["visible"] = 1;
      todo.insert(todo.end(), cur.children.begin(), cur.children.end());
    }
  }

  void signal_connect(ForeignRef w, const CString& signal, const CString& host_fn) {
    if (!signal || !host_fn) throw std::runtime_error("signal_connect: NULL signal or handler name");
    widget(w, "MockWidget").props[std::string(kCallbackPropertyPrefix) + *signal] = *host_fn;
  }

  std::string entry_get_text(ForeignRef w) { return widget(w, "MockEntry").props["text"]; }
  void entry_set_text(ForeignRef w, const std::string& text) { widget(w, "MockEntry").props["text"] = text; }

  /// The generic trampoline. Logs the emission, then dispatches to the
  /// stored host function; handler failures surface as ForeignFault.
  void emit(ForeignRef w, std::string_view signal) {
    const Widget& source = widget(w, "MockWidget");
    const std::string key = std::string(kCallbackPropertyPrefix) + std::string(signal);
    auto it = source.props.find(key);
    const std::string handler = it == source.props.end() ? std::string() : it->second;
    store_.emit_log.push_back({source.wid, std::string(signal), handler});
    if (handler.empty()) return;

    if (!runtime_) throw std::runtime_error("emit: no host runtime attached");
    const TrampolinePlan* plan = nullptr;
    for (const auto& t : trampolines_)
      if (t.signal == signal) plan = &t;
    if (!plan) throw std::runtime_error("emit: no trampoline for signal '" + std::string(signal) + "'");

    const std::vector<ForeignValue> foreign = emission_args(source, signal);
    if (foreign.size() != plan->arg_marshals.size())
      throw std::runtime_error("emit: signal '" + std::string(signal) + "' carries " + std::to_string(foreign.size()) +
                               " argument(s), trampoline expects " + std::to_string(plan->arg_marshals.size()));
    const std::string where = "trampoline " + plan->property_key;
    std::vector<Value> host;
    host.reserve(foreign.size());
    for (std::size_t i = 0; i < foreign.size(); ++i)
      host.push_back(runtime_->marshal_out(plan->arg_marshals[i], foreign[i], "", where));
    try {
      runtime_->feval(handler, host);
    } catch (const InterpError& e) {
      throw InterpError(InterpError::Kind::ForeignFault,
                        "handler '" + handler + "' for signal '" + std::string(signal) + "' failed: " + e.what());
    }
  }

  // -- ForeignEnv -----------------------------------------------------------

  ForeignValue invoke(std::string_view cname, std::span<const ForeignValue> args) override {
    auto want = [&](std::size_t n) {
      if (args.size() != n)
        throw std::runtime_error(std::string(cname) + ": foreign call with " + std::to_string(args.size()) +
                                 " argument(s), expected " + std::to_string(n));
    };
    if (cname == "mock_init") {
      want(0);
      init();
      return std::monostate{};
    }
    if (cname == "mock_button_new") {
      want(1);
      return button_new(cstr(args[0]));
    }
    if (cname == "mock_toggle_new") {
      want(1);
      return toggle_new(cstr(args[0]));
    }
    if (cname == "mock_toggle_get_active") {
      want(1);
      return toggle_get_active(ref(args[0]));
    }
    if (cname == "mock_toggle_set_active") {
      want(2);
      toggle_set_active(ref(args[0]), integer(args[1]));
      return std::monostate{};
    }
    if (cname == "mock_window_new") {
      want(0);
      return window_new();
    }
    if (cname == "mock_container_add") {
      want(2);
      container_add(ref(args[0]), ref(args[1]));
      return std::monostate{};
    }
    if (cname == "mock_widget_show_all") {
      want(1);
      widget_show_all(ref(args[0]));
      return std::monostate{};
    }
    if (cname == "mock_signal_connect") {
      want(3);
      signal_connect(ref(args[0]), cstr(args[1]), cstr(args[2]));
      return std::monostate{};
    }
    if (cname == "mock_entry_get_text") {
      want(1);
      return CString{entry_get_text(ref(args[0]))};
    }
    throw std::runtime_error("no foreign symbol '" + std::string(cname) + "'");
  }

  void release(MarshalRule rule, const ForeignValue& value) override {
    if (rule == MarshalRule::StringToCstr)
      if (const auto* s = std::get_if<CString>(&value); s && *s) ++store_.released_cstrs;
  }

  std::string class_of(ForeignRef r) const override {
    auto it = store_.widgets.find(r.id);
    return it == store_.widgets.end() ? std::string() : it->second.cls;
  }

  // -- UI specs ----------------------------------------------------------------

  UiHandle ui_load(std::string_view text) {
    const UiSpec spec = parse_ui_spec(text);
    LoadedUi ui;
    for (const auto& w : spec.widgets) {
      std::map<std::string, std::string> props(w.props.begin(), w.props.end());
      const ForeignRef r = create(w.cls, std::move(props));
      ui.widgets[w.name] = r.id;
      if (w.parent) container_add(ForeignRef{ui.widgets.at(*w.parent)}, r);
    }
    ui.handlers = spec.handlers;
    uis_.push_back(std::move(ui));
    return UiHandle{uis_.size() - 1};
  }

  UiHandle ui_load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UiError("cannot read UI spec '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ui_load(ss.str());
  }

  ForeignRef ui_widget_ref(UiHandle ui, std::string_view name) const {
    const LoadedUi& loaded = loaded_ui(ui);
    auto it = loaded.widgets.find(std::string(name));
    if (it == loaded.widgets.end()) throw UiError("unknown widget name '" + std::string(name) + "'");
    return ForeignRef{it->second};
  }

  Value ui_get_widget(UiHandle ui, std::string_view name) {
    const ForeignRef r = ui_widget_ref(ui, name);
    if (!runtime_) throw std::runtime_error("ui_get_widget: no host runtime attached");
    return runtime_->box(r, class_of(r));
  }

  /// Connects every handler row. Strict: if any named host function is
  /// undefined, nothing is connected and the error names it.
  std::size_t ui_autoconnect(UiHandle ui) {
    const LoadedUi& loaded = loaded_ui(ui);
    if (!runtime_) throw std::runtime_error("ui_autoconnect: no host runtime attached");
    for (const auto& h : loaded.handlers)
      if (!runtime_->symbols().has_function(h.host_fn))
        throw UiError("autoconnect: host function '" + h.host_fn + "' is not defined", h.line);
    for (const auto& h : loaded.handlers)
      signal_connect(ForeignRef{loaded.widgets.at(h.widget)}, h.signal, h.host_fn);
    return loaded.handlers.size();
  }

  /// Host-callable helpers that are not part of the generated glue:
  /// mock_emit (event injection), mock_entry_get_text, mock_ui_get_widget.
  void install_builtins(Runtime& rt) {
    auto& st = rt.symbols();
    st.define_builtin("mock_emit", [this](Runtime& r, std::span<const Value> a) {
      expect_args(a, 2, "mock_emit");
      const ForeignRef w = r.unbox(a[0], "MockWidget");
      if (!a[1].is_text()) throw InterpError(InterpError::Kind::TypeMismatch, "mock_emit: signal must be text");
      emit(w, a[1].as_text());
      return std::vector<Value>{};
    });
    st.define_builtin("mock_entry_get_text", [this](Runtime& r, std::span<const Value> a) {
      expect_args(a, 1, "mock_entry_get_text");
      return std::vector<Value>{Value::text(entry_get_text(r.unbox(a[0], "MockEntry")))};
    });
    st.define_builtin("mock_ui_get_widget", [this](Runtime&, std::span<const Value> a) {
      expect_args(a, 2, "mock_ui_get_widget");
      if (!a[0].is_scalar() || !a[1].is_text())
        throw InterpError(InterpError::Kind::TypeMismatch, "mock_ui_get_widget: expected (ui scalar, name text)");
      const double idx = a[0].as_scalar();
      if (!(idx >= 0) || idx >= static_cast<double>(uis_.size()) || idx != static_cast<double>(static_cast<std::size_t>(idx)))
        throw InterpError(InterpError::Kind::TypeMismatch, "mock_ui_get_widget: no such UI");
      try {
        return std::vector<Value>{ui_get_widget(UiHandle{static_cast<std::size_t>(idx)}, a[1].as_text())};
      } catch (const UiError& e) {
        throw InterpError(InterpError::Kind::ForeignFault, std::string("mock_ui_get_widget: ") + e.what());
      }
    });
  }

 private:
  struct LoadedUi {
    std::map<std::string, WidgetId> widgets;
    std::vector<UiHandlerSpec> handlers;
  };

  static void expect_args(std::span<const Value> a, std::size_t n, const char* fn) {
    if (a.size() != n)
      throw InterpError(InterpError::Kind::Arity, std::string(fn) + ": expected " + std::to_string(n) +
                                                      " argument(s), got " + std::to_string(a.size()));
  }

  static CString cstr(const ForeignValue& v) {
    if (const auto* s = std::get_if<CString>(&v)) return *s;
    throw std::runtime_error("foreign argument is not a C string");
  }
  static ForeignRef ref(const ForeignValue& v) {
    if (const auto* r = std::get_if<ForeignRef>(&v)) return *r;
    throw std::runtime_error("foreign argument is not an object pointer");
  }
  static std::int32_t integer(const ForeignValue& v) {
    if (const auto* i = std::get_if<std::int32_t>(&v)) return *i;
    throw std::runtime_error("foreign argument is not an int");
  }

  const LoadedUi& loaded_ui(UiHandle ui) const {
    if (ui.index >= uis_.size()) throw UiError("invalid UI handle");
    return uis_[ui.index];
  }

  ForeignRef create(const std::string& cls, std::map<std::string, std::string> props) {
    Widget w;
    w.wid = store_.next_wid++;
    w.cls = cls;
    w.props = std::move(props);
    w.state["visible"] = 0;
    if (class_is_a(cls, "MockToggle")) w.state["active"] = 0;
    const WidgetId id = w.wid;
    store_.widgets.emplace(id, std::move(w));
    return ForeignRef{id};
  }

  Widget& widget(ForeignRef r, std::string_view cls) {
    if (r.is_null()) throw std::runtime_error("NULL widget");
    auto it = store_.widgets.find(r.id);
    if (it == store_.widgets.end()) throw std::runtime_error("no widget " + std::to_string(r.id));
    if (!class_is_a(it->second.cls, cls))
      throw std::runtime_error("widget " + std::to_string(r.id) + " (" + it->second.cls + ") is not a " +
                               std::string(cls));
    return it->second;
  }

  // What the toolkit passes to a signal's handler: the emitter, plus the
  // new state for "toggled".
  static std::vector<ForeignValue> emission_args(const Widget& w, std::string_view signal) {
    std::vector<ForeignValue> args{ForeignRef{w.wid}};
    if (signal == "toggled") {
      auto it = w.state.find("active");
      args.emplace_back(static_cast<std::int32_t>(it == w.state.end() ? 0 : it->second));
    }
    return args;
  }

  WidgetStore store_;
  std::vector<LoadedUi> uis_;
  Runtime* runtime_ = nullptr;
  std::vector<TrampolinePlan> trampolines_;
};

}  // namespace gluec::mock
