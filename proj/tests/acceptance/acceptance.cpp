// Acceptance run: one PASS/FAIL line per criterion, each timed against its
// budget. Exit status is non-zero if any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "equivalence.hpp"
#include "fixtures.hpp"
#include "gen.hpp"
#include "plan_oracle.hpp"

using namespace gluec;
namespace fs = std::filesystem;
namespace gen = testsupport::gen;
namespace oracle = testsupport::oracle;

namespace {

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

// ---------------------------------------------------------------------------

void glue_order() {
  const auto in = testsupport::fixture_inputs();
  const auto m = plan_module(in.corpus, in.table, in.overrides);
  require(m.functions.size() == m.report.generatable(), "not every generatable function was planned");
  require(m.functions.size() == 9, "expected 9 generatable fixture functions, got " + std::to_string(m.functions.size()));
  for (const auto& p : m.functions) {
    const auto& fn = in.corpus.functions.at(p.cname);
    if (auto v = oracle::order_violation(p, static_cast<int>(fn.params.size()))) require(false, p.cname + ": " + *v);
    require(p.steps.size() == oracle::expected_step_count(fn, in.table), p.cname + ": step-count law");
    require(!check_plan(p), p.cname + ": check_plan rejects it");
  }
}

bool has_scalar_pointer(const TypemapTable& table, const FunctionDecl& fn) {
  bool any = gen::oracle_scalar_pointer(table, fn.returns);
  for (const auto& p : fn.params) any |= gen::oracle_scalar_pointer(table, p.type);
  return any;
}

bool cites_undecidability(const GenStatus& st) {
  for (const auto& r : st.reasons)
    if (r.find("out-parameter") != std::string::npos && r.find("array") != std::string::npos) return true;
  return false;
}

void ambiguity_gate() {
  const auto in = testsupport::fixture_inputs();
  std::size_t gated = 0;
  for (const auto& [name, fn] : in.corpus.functions) {
    if (!has_scalar_pointer(in.table, fn) || in.overrides.find(name)) continue;
    const auto st = classify_function(in.table, in.corpus, fn, in.overrides);
    require(st.kind == GenStatus::Kind::NeedsOverride, name + " is not NeedsOverride");
    require(cites_undecidability(st), name + ": reason does not cite out-parameter/array undecidability");
    ++gated;
  }
  require(gated >= 1, "fixture has no scalar-pointer function without override");

  gen::Rng r(0xa11);
  std::size_t candidates = 0;
  for (int i = 0; i < 500; ++i) {
    const auto m = gen::random_module(r, in.table, 10);
    for (const auto& [name, fn] : m.corpus.functions) {
      if (!has_scalar_pointer(m.table, fn)) continue;
      ++candidates;
      const auto st = classify_function(m.table, m.corpus, fn, m.overrides);
      require(!st.generatable(), "false Generatable: " + name + " in random corpus " + std::to_string(i));
      if (!m.overrides.find(name)) require(cites_undecidability(st), name + ": reason lacks undecidability");
    }
  }
  require(candidates > 0, "random corpora produced no scalar-pointer functions");
}

void backend_equivalence() {
  gen::Rng r(0xbeef);
  const auto fns = oracle::generatable_fixture_functions();
  require(fns.size() == 9, "hand-binding oracle does not cover the 9 generatable functions");
  for (const auto& fn : fns)
    for (int i = 0; i < 20; ++i) {
      const auto why = oracle::compare_backends(r.u64(), gen::valid_call(r, fn));
      require(why.empty(), why);
    }
}

void handle_safety() {
  auto s = testsupport::fixture_session(99);
  auto& rt = s->runtime;
  const std::vector<std::string> classes{"MockWidget", "MockButton", "MockToggle", "MockWindow", "MockEntry", "Nope"};
  std::vector<HandleId> live, dead;
  for (int i = 0; i < 130; ++i) {
    const char* ctor = i % 3 == 0 ? "mock_window_new" : i % 3 == 1 ? "mock_button_new" : "mock_toggle_new";
    const auto v = i % 3 == 0 ? rt.feval(ctor, std::span<const Value>{})[0] : rt.feval(ctor, {Value::text("w")})[0];
    live.push_back(v.as_handle());
  }
  for (int i = 0; i < 30; ++i) {
    rt.registry().release(live.back());
    dead.push_back(live.back());
    live.pop_back();
  }
  require(rt.registry().live_count() == 100, "expected 100 live handles");
  const std::set<std::pair<std::uint64_t, std::uint64_t>> live_ids = [&] {
    std::set<std::pair<std::uint64_t, std::uint64_t>> ids;
    for (const auto& h : live) ids.insert({h.index, h.nonce});
    return ids;
  }();

  gen::Rng r(0xf0);
  auto forge = [&]() -> HandleId {
    for (;;) {
      HandleId h;
      switch (r.uniform(0, 4)) {
        case 0: h = {static_cast<std::uint64_t>(r.uniform(0, 200)), r.u64(), r.pick(classes)}; break;
        case 1: h = r.pick(live); h.nonce ^= 1ULL << r.uniform(0, 63); break;
        case 2: h = r.pick(live); h.index = (h.index + static_cast<std::uint64_t>(r.uniform(1, 99))) % 130; break;
        case 3: h = r.pick(dead); break;
        default: h = {r.u64(), r.u64(), r.pick(classes)}; break;
      }
      if (!live_ids.count({h.index, h.nonce})) return h;
    }
  };

  const auto state = s->toolkit.store().dump();
  std::size_t unboxed = 0, typed = 0;
  for (int i = 0; i < 10000; ++i) {
    const Value v = Value::handle(forge());
    try {
      if (i % 4 == 0) rt.feval("mock_widget_show_all", {v});
      else (void)rt.unbox(v, r.pick(classes));
      ++unboxed;
    } catch (const InterpError& e) {
      const auto k = e.kind();
      if (k == InterpError::Kind::StaleHandle || k == InterpError::Kind::TypeMismatch ||
          k == InterpError::Kind::ClassMismatch)
        ++typed;
    }
  }
  require(unboxed == 0, std::to_string(unboxed) + " forged handles were unboxed");
  require(typed == 10000, "only " + std::to_string(typed) + " of 10000 errors were typed handle errors");
  require(s->toolkit.store().dump() == state, "forged calls changed toolkit state");
}

void callback_trampoline() {
  {
    auto s = testsupport::fixture_session();
    testsupport::Recorder a, b;
    s->runtime.symbols().define_builtin("h_a", a.builtin());
    s->runtime.symbols().define_builtin("h_b", b.builtin());
    const auto w = s->runtime.feval("mock_button_new", {Value::text("ok")})[0];
    s->runtime.feval("mock_signal_connect", {w, Value::text("clicked"), Value::text("h_a")});
    s->runtime.feval("mock_emit", {w, Value::text("clicked")});
    require(a.calls.size() == 1, "connect+emit did not deliver exactly one call");
    require(!a.calls[0].empty() && a.calls[0][0] == w, "first handler argument is not the widget handle");

    s->runtime.feval("mock_signal_connect", {w, Value::text("clicked"), Value::text("h_b")});
    s->runtime.feval("mock_emit", {w, Value::text("clicked")});
    require(a.calls.size() == 1 && b.calls.size() == 1, "reconnect did not overwrite the handler");
  }

  auto s = testsupport::fixture_session();
  auto& rt = s->runtime;
  auto& tk = s->toolkit;
  const auto ui = tk.ui_load(read_file(testsupport::data_path("modulation.ui")));
  rt.global_set("ui", Value::scalar(static_cast<double>(ui.index)));
  demo::install_handlers(rt);
  require(tk.ui_autoconnect(ui) == 4, "autoconnect did not wire 4 handlers");

  rt.feval("mock_toggle_set_active", {tk.ui_get_widget(ui, "radiobutton2"), Value::scalar(1)});
  rt.feval("mock_emit", {tk.ui_get_widget(ui, "radiobutton2"), Value::text("clicked")});
  rt.feval("mock_emit", {tk.ui_get_widget(ui, "button1"), Value::text("clicked")});

  std::vector<std::string> handled;
  for (const auto& e : tk.store().emit_log)
    if (!e.handler.empty()) handled.push_back(e.handler);
  require(handled == std::vector<std::string>{"on_radiobutton2_clicked", "on_button1_clicked"},
          "click sequence did not run toggle choice then plot");
  require(rt.global_get("choice") == Value::scalar(2), "choice was not recorded");
  const auto sig = rt.global_get("signal");
  require(sig.is_vector() && sig.as_vector().size() == 1001 && sig.as_vector()[0] == 2.0,
          "plot handler did not produce the dsbsc signal");
}

double closed_form(demo::Mode m, double modf, double carf, double t) {
  const double wm = 2 * std::numbers::pi * modf, wc = 2 * std::numbers::pi * carf;
  switch (m) {
    case demo::Mode::Am: return 2 * (1 + 0.5 * std::cos(wm * t)) * std::cos(wc * t);
    case demo::Mode::Dsbsc: return 2 * std::cos(wm * t) * std::cos(wc * t);
    case demo::Mode::Ssbsc: return std::cos((wc + wm) * t);
  }
  return NAN;
}

void modulation() {
  const std::string ui = read_file(testsupport::data_path("modulation.ui"));
  for (auto mode : {demo::Mode::Am, demo::Mode::Dsbsc, demo::Mode::Ssbsc}) {
    demo::Params p;
    p.mode = mode;
    auto s = testsupport::fixture_session();
    const auto res = demo::run(*s, ui, p);
    const std::string name(demo::mode_name(mode));
    require(res.signal.size() == 1001 && res.t.size() == 1001, name + ": expected 1001 samples");
    const double at0 = mode == demo::Mode::Am ? 3.0 : mode == demo::Mode::Dsbsc ? 2.0 : 1.0;
    require(res.signal[0] == at0, name + "(0) is not exactly " + std::to_string(at0));
    require(res.t[250] == 0.25, "t[250] is not 0.25");
    if (mode == demo::Mode::Dsbsc) require(std::fabs(res.signal[250] + 2.0) < 1e-9, "dsbsc(0.25) != -2");
    if (mode == demo::Mode::Ssbsc) require(std::fabs(res.signal[250] + 1.0) < 1e-9, "ssbsc(0.25) != -1");
    double worst = 0;
    for (std::size_t i = 0; i < res.signal.size(); ++i) {
      const double t = static_cast<double>(i) * (p.timed / 1000);
      worst = std::max(worst, std::fabs(res.signal[i] - closed_form(mode, p.modf, p.carf, t)));
    }
    require(worst < 1e-9, name + ": max error " + std::to_string(worst));
  }
}

struct Captured {
  int code;
  std::string out;
};

Captured run_cli(const cli::CliConfig& cfg) {
  std::ostringstream out, err;
  const int code = cli::run(cfg, out, err);
  return {code, out.str()};
}

void determinism() {
  const auto base = fs::temp_directory_path() / ("gluec_acceptance_" + std::to_string(::getpid()));
  struct Cleanup {
    fs::path p;
    ~Cleanup() { fs::remove_all(p); }
  } cleanup{base};
  std::vector<std::string> outputs;
  for (const char* sub : {"a", "b"}) {
    fs::create_directories(base / sub);
    auto cfg = testsupport::fixture_config(cli::Command::Generate);
    cfg.out_dir = (base / sub).string();
    require(run_cli(cfg).code == 0, "generate failed");
    outputs.push_back(read_file((base / sub / "glue.cc").string()));
  }
  require(outputs[0] == outputs[1], "generate is not byte-identical across runs");
  require(outputs[0] == read_file(testsupport::fixture_path("v1/golden/glue.cc")), "glue.cc differs from the golden");

  const auto c1 = run_cli(testsupport::fixture_config(cli::Command::Check));
  const auto c2 = run_cli(testsupport::fixture_config(cli::Command::Check));
  require(c1.out == c2.out, "check report is not stable");
  require(c1.out == read_file(testsupport::fixture_path("v1/golden/check.txt")), "check report differs from the golden");
}

void parser_robustness() {
  gen::Rng r(0xf422);
  std::size_t lexical = 0, parsed = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string input;
    if (i % 2 == 0) {
      const int n = r.uniform(0, 256);
      for (int k = 0; k < n; ++k) input.push_back(static_cast<char>(r.uniform(0, 255)));
    } else {
      input = gen::fuzz_input(r);
    }
    try {
      const auto forms = parse_sexprs(input);
      auto [corpus, diags] = parse_defs(forms);
      (void)corpus_validate(corpus);
      ++parsed;
    } catch (const SExprError&) {
      ++lexical;
    } catch (const std::exception& e) {
      require(false, std::string("unexpected exception: ") + e.what());
    }
  }
  require(lexical + parsed == 10000, "not every input produced a result");
  require(lexical > 0 && parsed > 0, "fuzz corpus did not exercise both outcomes");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<void()> body;
  };
  const Criterion criteria[] = {
      {"glue-logic order and step-count law", 1, glue_order},
      {"ambiguity gate", 5, ambiguity_gate},
      {"backend equivalence", 5, backend_equivalence},
      {"handle safety", 2, handle_safety},
      {"callback trampoline", 1, callback_trampoline},
      {"modulation reproduction", 1, modulation},
      {"determinism", 1, determinism},
      {"parser robustness", 5, parser_robustness},
  };

  int failed = 0;
  int n = 0;
  for (const auto& c : criteria) {
    ++n;
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body();
    } catch (const Failure& f) {
      detail = f.what;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (detail.empty() && secs >= c.budget_s) detail = "over budget";
    std::printf("%s %d %s (%.3f s, budget %.0f s)%s%s\n", detail.empty() ? "PASS" : "FAIL", n, c.name, secs,
                c.budget_s, detail.empty() ? "" : ": ", detail.c_str());
    failed += !detail.empty();
  }
  return failed ? 1 : 0;
}
