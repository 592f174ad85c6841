#include <CLI11.hpp>

#include "argus/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"argus - assurance case checker with a finite-state verification engine"};
  app.require_subcommand(1);

  argus::CliConfig cfg;
  std::string boundStr;

  auto addCommon = [&](CLI::App* sub, bool withOut) {
    sub->add_option("inputs", cfg.inputs, ".ial and .gcl input files")
        ->required()
        ->expected(-1);
    sub->add_option("--format", cfg.format, "output format (text|json)")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--state-bound", cfg.stateBound, "state enumeration bound");
    sub->add_option("--color", cfg.color, "diagnostic color (auto|never)")
        ->check(CLI::IsMember({"auto", "never"}));
    if (withOut) sub->add_option("--out", cfg.out, "output file (default: stdout)");
  };

  auto* check = app.add_subcommand("check", "parse and validate the assurance model");
  addCommon(check, false);
  auto* verify = app.add_subcommand("verify", "discharge the formal obligations");
  addCommon(verify, false);
  auto* status = app.add_subcommand("status", "report claim support status");
  addCommon(status, false);
  auto* render = app.add_subcommand("render", "emit a DOT (or JSON) view of the argument");
  addCommon(render, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << "\n\n" << app.help();
    return 3;
  }

  if (check->parsed()) return argus::cmd_check(cfg, std::cout, std::cerr);
  if (verify->parsed()) return argus::cmd_verify(cfg, std::cout, std::cerr);
  if (status->parsed()) return argus::cmd_status(cfg, std::cout, std::cerr);
  return argus::cmd_render(cfg, std::cout, std::cerr);
}
