#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gluec/commands.hpp"

int main(int argc, char** argv) {
  using gluec::cli::Command;
  gluec::cli::CliConfig cfg;

  CLI::App app{"gluec: glue generator and runtime for the mock widget toolkit"};
  app.require_subcommand(1);

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--defs", cfg.defs_path, "API definitions file")->capture_default_str();
    sub->add_option("--typemap", cfg.typemap_path, "type-mapping file")->capture_default_str();
    sub->add_option("--overrides", cfg.overrides_path, "manual overrides file");
  };

  auto* check = app.add_subcommand("check", "validate inputs and print the coverage report");
  add_inputs(check);

  auto* generate = app.add_subcommand("generate", "emit glue source");
  add_inputs(generate);
  generate->add_option("--templates", cfg.template_path, "template file")->capture_default_str();
  generate->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();

  auto* demo = app.add_subcommand("demo", "run the modulation demo headlessly");
  add_inputs(demo);
  std::string mode = "am";
  demo->add_option("--modf", cfg.demo.modf, "modulating frequency")->capture_default_str();
  demo->add_option("--carf", cfg.demo.carf, "carrier frequency")->capture_default_str();
  demo->add_option("--timed", cfg.demo.timed, "duration")->capture_default_str();
  demo->add_option("--mode", mode, "am | dsbsc | ssbsc")
      ->capture_default_str()
      ->check(CLI::IsMember({"am", "dsbsc", "ssbsc"}));
  demo->add_option("--ui", cfg.ui_path, "UI spec")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (check->parsed()) cfg.command = Command::Check;
  if (generate->parsed()) cfg.command = Command::Generate;
  if (demo->parsed()) {
    cfg.command = Command::Demo;
    cfg.demo.mode = *gluec::demo::parse_mode(mode);
  }
  return gluec::cli::run(cfg, std::cout, std::cerr);
}
