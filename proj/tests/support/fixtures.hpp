#pragma once

#include <memory>
#include <string>

#include "gluec/gluec.hpp"

namespace testsupport {

inline std::string data_path(const std::string& name) { return std::string(GLUEC_DATA_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(GLUEC_FIXTURE_DIR) + "/" + name; }

inline gluec::Inputs fixture_inputs(const std::string& overrides = "mock.overrides") {
  return gluec::load_inputs(gluec::read_file(data_path("mock.defs")), gluec::read_file(data_path("mock.typemap")),
                            overrides.empty() ? std::string() : gluec::read_file(data_path(overrides)));
}

inline std::unique_ptr<gluec::Session> fixture_session(std::uint64_t seed = 7, std::size_t recursion_limit = 64) {
  gluec::RuntimeOptions opts;
  opts.seed = seed;
  opts.recursion_limit = recursion_limit;
  return gluec::Session::create(fixture_inputs(), opts);
}

inline gluec::TemplateSet default_templates() {
  return gluec::parse_templates(gluec::read_file(data_path("templates/default.tmpl")));
}

inline gluec::cli::CliConfig fixture_config(gluec::cli::Command cmd, const std::string& overrides = "mock.overrides") {
  gluec::cli::CliConfig cfg;
  cfg.command = cmd;
  cfg.defs_path = data_path("mock.defs");
  cfg.typemap_path = data_path("mock.typemap");
  cfg.overrides_path = overrides.empty() ? std::string() : data_path(overrides);
  cfg.template_path = data_path("templates/default.tmpl");
  cfg.ui_path = data_path("modulation.ui");
  return cfg;
}

// Records every call it receives; used as a host-side handler.
struct Recorder {
  std::vector<std::vector<gluec::Value>> calls;

  gluec::Builtin builtin() {
    return [this](gluec::Runtime&, std::span<const gluec::Value> args) {
      calls.emplace_back(args.begin(), args.end());
      return std::vector<gluec::Value>{};
    };
  }
};

}  // namespace testsupport
