#pragma once

// Hand-rolled generators for property tests. Everything is driven by an
// explicit seed so a failing case can be replayed.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gluec/gluec.hpp"

namespace testsupport::gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Inclusive bounds.
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::uint64_t u64() { return eng_(); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(uniform(0, static_cast<int>(xs.size()) - 1))];
  }

 private:
  std::mt19937_64 eng_;
};

inline std::string ident(Rng& r, int max_len = 8) {
  static const std::string first = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
  static const std::string rest = first + "0123456789*-";
  std::string s(1, first[static_cast<std::size_t>(r.uniform(0, static_cast<int>(first.size()) - 1))]);
  const int n = r.uniform(0, max_len - 1);
  for (int i = 0; i < n; ++i) s.push_back(rest[static_cast<std::size_t>(r.uniform(0, static_cast<int>(rest.size()) - 1))]);
  return s;
}

// Arbitrary bytes, biased towards the characters that matter to the reader.
inline std::string text_bytes(Rng& r, int max_len = 12) {
  static const std::vector<std::string> pieces{"a", "Z", " ", "\"", "\\", "(", ")", ";", "\n", "\t", "@X@", "\xc3\xa9", "0"};
  std::string s;
  const int n = r.uniform(0, max_len);
  for (int i = 0; i < n; ++i) s += r.coin(0.8) ? r.pick(pieces) : std::string(1, static_cast<char>(r.uniform(1, 255)));
  return s;
}

inline gluec::SExpr sexpr(Rng& r, int depth = 0) {
  const int kind = r.uniform(0, depth >= 4 ? 2 : 4);
  switch (kind) {
    case 0: return gluec::SExpr::atom(ident(r));
    case 1: return gluec::SExpr::str(text_bytes(r));
    case 2: {
      const std::int64_t v = r.coin(0.1) ? (r.coin() ? INT64_MAX : INT64_MIN)
                                         : static_cast<std::int64_t>(r.u64() % 2000001) - 1000000;
      return gluec::SExpr::integer_value(v);
    }
    default: {
      std::vector<gluec::SExpr> kids;
      const int n = r.uniform(0, 4);
      for (int i = 0; i < n; ++i) kids.push_back(sexpr(r, depth + 1));
      return gluec::SExpr::list(std::move(kids));
    }
  }
}

// Random byte strings for the parser fuzz. Half are raw noise, half are
// token soup that often gets past the lexer and into parse_defs.
inline std::string fuzz_input(Rng& r) {
  static const std::vector<std::string> tokens{
      "(", ")", "(", ")", " ", "\n", "\"", "\\\"", "\\", ";", "object", "enum", "function", "callback", "signal",
      "parent", "none", "returns", "transfer", "full", "param", "ctype", "\"int*\"", "\"const char*\"", "void",
      "nullable", "value", "on", "handler", "A", "B", "0", "-1", "99999999999999999999", "\xff", "\x01", "@"};
  std::string s;
  const int n = r.uniform(0, 64);
  if (r.coin()) {
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>(r.uniform(0, 255)));
  } else {
    for (int i = 0; i < n; ++i) {
      const std::string& t = r.pick(tokens);
      s += t;
      if (r.coin(0.4)) s.push_back(' ');
    }
  }
  return s;
}

// -- randomized corpora -------------------------------------------------------

// Whitespace normalization written independently of the library: tokens
// joined by single blanks, then blanks beside '*' dropped.
inline std::string oracle_normalize(std::string_view s) {
  std::string joined;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (!joined.empty()) joined.push_back(' ');
    joined += word;
    word.clear();
  };
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') flush();
    else word.push_back(c);
  }
  flush();
  std::string out;
  for (std::size_t i = 0; i < joined.size(); ++i) {
    if (joined[i] == ' ' && ((i + 1 < joined.size() && joined[i + 1] == '*') || (i > 0 && joined[i - 1] == '*')))
      continue;
    out.push_back(joined[i]);
  }
  return out;
}

// True iff `ctype` is a pointer whose pointee the table maps to a scalar.
inline bool oracle_scalar_pointer(const gluec::TypemapTable& table, const gluec::TypeExpr& t) {
  if (t.kind != gluec::TypeExpr::Kind::Ctype) return false;
  const std::string n = oracle_normalize(t.name);
  if (n.empty() || n.back() != '*') return false;
  const std::string pointee = oracle_normalize(n.substr(0, n.size() - 1));
  for (const auto& [_, e] : table.entries())
    if (oracle_normalize(e.ctype) == pointee && e.host == gluec::HostType::Scalar) return true;
  return false;
}

struct RandomModule {
  gluec::ApiCorpus corpus;
  gluec::TypemapTable table;
  gluec::OverrideSet overrides;
};

/// A corpus of `nfunctions` random functions over the given typemap, with a
/// few objects, one enum and one callback to reference. Roughly one in
/// eight functions gets a Text override, one in sixteen a Skip.
inline RandomModule random_module(Rng& r, const gluec::TypemapTable& table, int nfunctions) {
  using gluec::TypeExpr;
  RandomModule m;
  m.table = table;
  std::vector<std::string> objects{"Root"};
  m.corpus.objects["Root"] = {"Root", std::nullopt, {}};
  for (int i = 1, n = r.uniform(1, 4); i <= n; ++i) {
    std::string name = "Obj" + std::to_string(i);
    m.corpus.objects[name] = {name, r.pick(objects), {}};
    objects.push_back(name);
  }
  m.corpus.enums["Mode"] = {"Mode", {{"A", 0}, {"B", 1}}, {}};
  m.corpus.callbacks["Cb"] = {"Cb", {}, TypeExpr::void_type(), {}};

  static const std::vector<std::string> ctypes{
      "int",    "double",    "const char*", "char*",   "gboolean",    "int*",     "int *",      " int  * ",
      "double*", "double *", "gboolean*",   "char**",  "void*",       "float",    "unsigned",   "const  char *",
      "int**",  "const int*"};
  auto random_type = [&](bool is_return) -> TypeExpr {
    const int k = r.uniform(0, 9);
    if (is_return && k == 0) return TypeExpr::void_type();
    if (k <= 5) return TypeExpr::ctype(r.pick(ctypes));
    if (k <= 7) return TypeExpr::object(r.pick(objects));
    if (k == 8) return TypeExpr::enumeration("Mode");
    return TypeExpr::callback("Cb");
  };

  for (int i = 0; i < nfunctions; ++i) {
    gluec::FunctionDecl fn;
    fn.cname = "fn_" + std::to_string(i);
    fn.returns = random_type(true);
    for (int p = 0, np = r.uniform(0, 4); p < np; ++p)
      fn.params.push_back({"p" + std::to_string(p), random_type(false), r.coin(0.2)});
    const int o = r.uniform(0, 15);
    if (o < 2) m.overrides.entries[fn.cname] = {gluec::OverrideEntry::Kind::Text, "/* hand glue */\n", {}};
    else if (o == 2) m.overrides.entries[fn.cname] = {gluec::OverrideEntry::Kind::Skip, "", {}};
    m.corpus.functions[fn.cname] = std::move(fn);
  }
  return m;
}

// -- argument lists for the fixture functions --------------------------------

// Either a literal or "the k-th widget of the setup sequence".
using Arg = std::variant<gluec::Value, int>;

struct Call {
  std::string fn;
  std::vector<Arg> args;
};

// Setup widgets: 0 window, 1 button, 2 toggle, 3 toggle, 4 button, 5 window.
inline std::vector<Call> setup_calls() {
  using gluec::Value;
  return {
      {"mock_window_new", {}},
      {"mock_button_new", {Value::text("b1")}},
      {"mock_toggle_new", {Value::text("t1")}},
      {"mock_toggle_new", {Value::nil()}},
      {"mock_button_new", {Value::text("")}},
      {"mock_window_new", {}},
  };
}
inline constexpr int kSetupWidgets = 6;
inline const std::vector<int> kToggleSlots{2, 3};

/// A valid argument list for a generatable fixture function.
inline Call valid_call(Rng& r, const std::string& fn) {
  using gluec::Value;
  auto any_widget = [&] { return Arg{r.uniform(0, kSetupWidgets - 1)}; };
  auto label = [&]() -> Arg { return r.coin(0.15) ? Value::nil() : Value::text(text_bytes(r)); };
  if (fn == "mock_init" || fn == "mock_window_new") return {fn, {}};
  if (fn == "mock_button_new" || fn == "mock_toggle_new") return {fn, {label()}};
  if (fn == "mock_toggle_get_active") return {fn, {Arg{r.pick(kToggleSlots)}}};
  if (fn == "mock_toggle_set_active") {
    static const std::vector<double> states{0, 1, -1, 2, 0.5, -0.9, 7.25, 2147483647.0, -2147483647.5, 1e9};
    return {fn, {Arg{r.pick(kToggleSlots)}, Value::scalar(r.coin(0.3) ? r.real(-1e6, 1e6) : r.pick(states))}};
  }
  if (fn == "mock_container_add") {
    // Setup widgets have no parent and no children: any distinct pair works.
    const int parent = r.uniform(0, kSetupWidgets - 1);
    int child = r.uniform(0, kSetupWidgets - 2);
    if (child >= parent) ++child;
    return {fn, {Arg{parent}, Arg{child}}};
  }
  if (fn == "mock_widget_show_all") return {fn, {any_widget()}};
  if (fn == "mock_signal_connect") {
    static const std::vector<std::string> signals{"clicked", "toggled", "destroy"};
    return {fn, {any_widget(), Value::text(r.pick(signals)), Value::text(ident(r))}};
  }
  throw std::logic_error("valid_call: no generator for " + fn);
}

inline std::vector<gluec::Value> resolve_args(const std::vector<Arg>& args, const std::vector<gluec::Value>& widgets) {
  std::vector<gluec::Value> out;
  for (const auto& a : args) {
    if (const auto* v = std::get_if<gluec::Value>(&a)) out.push_back(*v);
    else out.push_back(widgets.at(static_cast<std::size_t>(std::get<int>(a))));
  }
  return out;
}

}  // namespace testsupport::gen
