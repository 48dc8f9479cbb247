#pragma once

// The three command-line operations. Each returns the process exit status
// (0 ok, 1 validation failure, 2 I/O, parse-fatal or runtime failure) and
// writes its report to `out`, problems to `err`.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <system_error>
#include <vector>

#include "gluec/diagnostic.hpp"
#include "gluec/emitter.hpp"
#include "gluec/glue_plan.hpp"
#include "gluec/modulation.hpp"
#include "gluec/session.hpp"

#ifndef GLUEC_DATA_DIR
#define GLUEC_DATA_DIR "data"
#endif

namespace gluec::cli {

enum class Command { Check, Generate, Demo };

struct CliConfig {
  Command command = Command::Check;
  std::string defs_path = GLUEC_DATA_DIR "/mock.defs";
  std::string typemap_path = GLUEC_DATA_DIR "/mock.typemap";
  std::string overrides_path;  // optional
  std::string template_path = GLUEC_DATA_DIR "/templates/default.tmpl";
  std::string out_dir = ".";
  std::string ui_path = GLUEC_DATA_DIR "/modulation.ui";
  demo::Params demo;
};

namespace detail {

inline Inputs read_inputs(const CliConfig& cfg) {
  const std::string defs = read_file(cfg.defs_path);
  const std::string typemap = read_file(cfg.typemap_path);
  const std::string overrides = cfg.overrides_path.empty() ? std::string() : read_file(cfg.overrides_path);
  return load_inputs(defs, typemap, overrides);
}

inline void print_diagnostics(std::ostream& os, const std::string& path, const Diagnostics& diags) {
  for (const auto& d : diags) os << path << ':' << d << '\n';
}

inline void print_input_diagnostics(std::ostream& os, const CliConfig& cfg, const Inputs& in) {
  print_diagnostics(os, cfg.defs_path, in.defs_diagnostics);
  print_diagnostics(os, cfg.typemap_path, in.typemap_diagnostics);
  print_diagnostics(os, cfg.overrides_path, in.override_diagnostics);
}

// Loads inputs or reports why not; nullopt means exit 2.
inline std::optional<Inputs> try_read_inputs(const CliConfig& cfg, std::ostream& err) {
  try {
    return read_inputs(cfg);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const SExprError& e) {
    err << "error: " << e.what() << '\n';
  }
  return std::nullopt;
}

}  // namespace detail

inline int cmd_check(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  auto in = detail::try_read_inputs(cfg, err);
  if (!in) return 2;
  detail::print_input_diagnostics(out, cfg, *in);
  const ModulePlan module = plan_module(in->corpus, in->table, in->overrides);
  out << module.report.render();
  const bool ok = in->error_count() == 0 && error_count(module.report.diagnostics) == 0 &&
                  module.report.unresolved().empty();
  return ok ? 0 : 1;
}

/// Renders the glue module and writes it atomically: every unit goes to a
/// temporary in out_dir first and is renamed into place only once all of
/// them were written.
inline int cmd_generate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  auto in = detail::try_read_inputs(cfg, err);
  if (!in) return 2;
  detail::print_input_diagnostics(err, cfg, *in);
  if (in->error_count() != 0) return 1;

  const ModulePlan module = plan_module(in->corpus, in->table, in->overrides);
  if (error_count(module.report.diagnostics) != 0) {
    err << module.report.render();
    return 1;
  }
  for (const auto& name : module.report.unresolved())
    err << "warning: " << name << ": needs a manual override, omitted from output\n";

  std::vector<EmitUnit> units;
  try {
    units = render_module(module.functions, in->overrides, parse_templates(read_file(cfg.template_path)));
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const EmitError& e) {
    err << "error: " << cfg.template_path << ": " << e.what() << '\n';
    return 2;
  }

  std::error_code ec;
  const fs::path dir(cfg.out_dir);
  if (!fs::is_directory(dir, ec)) {
    err << "error: output directory '" << cfg.out_dir << "' does not exist\n";
    return 2;
  }

  std::vector<std::pair<fs::path, fs::path>> staged;  // temp -> final
  auto discard = [&] {
    for (const auto& [tmp, _] : staged) fs::remove(tmp, ec);
  };
  std::mt19937_64 rng(std::random_device{}());
  for (const auto& unit : units) {
    const fs::path final_path = dir / unit.filename;
    const fs::path tmp = dir / ("." + unit.filename + ".tmp" + std::to_string(rng() % 1000000));
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (f) {
      staged.emplace_back(tmp, final_path);
      f.write(unit.content.data(), static_cast<std::streamsize>(unit.content.size()));
      f.close();
    }
    if (!f) {
      err << "error: cannot write '" << tmp.string() << "'\n";
      discard();
      return 2;
    }
  }
  for (const auto& [tmp, final_path] : staged) {
    fs::rename(tmp, final_path, ec);
    if (ec) {
      err << "error: cannot rename into '" << final_path.string() << "': " << ec.message() << '\n';
      discard();
      return 2;
    }
  }
  for (const auto& unit : units) out << unit.filename << ": " << unit.content.size() << " bytes\n";
  return 0;
}

inline int cmd_demo(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.demo.timed > 0)) {
    err << "error: --timed must be > 0\n";
    return 2;
  }
  auto in = detail::try_read_inputs(cfg, err);
  if (!in) return 2;
  if (in->error_count() != 0) {
    detail::print_input_diagnostics(err, cfg, *in);
    return 2;
  }
  try {
    const std::string ui = read_file(cfg.ui_path);
    auto session = Session::create(std::move(*in));
    out << demo::run(*session, ui, cfg.demo).text;
    return 0;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const mock::UiError& e) {
    err << "error: " << cfg.ui_path << ": " << e.what() << '\n';
  } catch (const InterpError& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

inline int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::Check: return cmd_check(cfg, out, err);
    case Command::Generate: return cmd_generate(cfg, out, err);
    case Command::Demo: return cmd_demo(cfg, out, err);
  }
  return 2;
}

}  // namespace gluec::cli
