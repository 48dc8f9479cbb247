#pragma once

// Wires one parsed input set to a runtime driving the mock toolkit:
// glue plans bound, kernels and toolkit builtins installed, trampolines
// attached.

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "gluec/api_model.hpp"
#include "gluec/defs_parser.hpp"
#include "gluec/diagnostic.hpp"
#include "gluec/glue_plan.hpp"
#include "gluec/kernels.hpp"
#include "gluec/mock_toolkit.hpp"
#include "gluec/overrides.hpp"
#include "gluec/runtime.hpp"
#include "gluec/sexpr.hpp"
#include "gluec/typemap.hpp"

namespace gluec {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

struct Inputs {
  ApiCorpus corpus;
  TypemapTable table;
  OverrideSet overrides;
  Diagnostics defs_diagnostics;  // includes corpus_validate
  Diagnostics typemap_diagnostics;
  Diagnostics override_diagnostics;

  std::size_t error_count() const {
    return gluec::error_count(defs_diagnostics) + gluec::error_count(typemap_diagnostics) +
           gluec::error_count(override_diagnostics);
  }
};

/// Parses the three input texts. A lexical error in any of them is fatal
/// (SExprError); form-level problems are collected as diagnostics.
inline Inputs load_inputs(std::string_view defs, std::string_view typemap, std::string_view overrides = {}) {
  Inputs in;
  std::tie(in.corpus, in.defs_diagnostics) = parse_defs(parse_sexprs(defs));
  for (auto& d : corpus_validate(in.corpus)) in.defs_diagnostics.push_back(std::move(d));
  std::tie(in.table, in.typemap_diagnostics) = parse_typemap(parse_sexprs(typemap));
  std::tie(in.overrides, in.override_diagnostics) = parse_overrides(parse_sexprs(overrides));
  return in;
}

class Session {
 public:
  explicit Session(Inputs in, RuntimeOptions options = {})
      : inputs(std::move(in)),
        module(plan_module(inputs.corpus, inputs.table, inputs.overrides)),
        runtime(inputs.corpus, toolkit, options) {
    bind_plans(runtime, module.functions);
    kernels::install(runtime);
    toolkit.install_builtins(runtime);
    toolkit.attach(runtime, module.trampolines);
  }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  static std::unique_ptr<Session> create(Inputs in, RuntimeOptions options = {}) {
    return std::make_unique<Session>(std::move(in), options);
  }

  const ApiCorpus& corpus() const { return inputs.corpus; }

  Inputs inputs;
  ModulePlan module;
  mock::MockToolkit toolkit;
  Runtime runtime;
};

}  // namespace gluec
