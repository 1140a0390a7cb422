#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = singlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"singlab: numerical experiments for Delta u = m u^-alpha"};
  std::string subcommand, config_path, out_dir = "out";
  std::vector<std::string> overrides;
  bool quiet = false, print_config = false;

  std::string names;
  for (const auto& s : cli::subcommands()) names += (names.empty() ? "" : ", ") + s;
  app.add_option("subcommand", subcommand, "one of: " + names)->check(CLI::IsMember(cli::subcommands()));
  app.add_option("--config", config_path, "config file (sectioned key = value)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--override", overrides, "section.key=value, repeatable")->take_all();
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.add_flag("--print-config", print_config, "print the effective config and exit");
  app.footer("Exit codes: 0 success, 2 nonexistence detected, 3 non-convergence, 4 config error.\n\n"
             "Config keys and defaults:\n\n" +
             singlab::config_reference());

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::config_error;
  }

  std::ostringstream sink;
  std::ostream& log = quiet ? static_cast<std::ostream&>(sink) : std::cerr;
  singlab::Config config;
  try {
    if (!config_path.empty()) config = singlab::Config::load(config_path);
    for (const auto& o : overrides) config.apply_override(o);
  } catch (const singlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    if (!subcommand.empty()) cli::write_diagnostic(out_dir, subcommand, cli::config_error, e.what());
    return cli::config_error;
  }
  if (print_config) {
    std::cout << config.canonical();
    return cli::ok;
  }
  if (subcommand.empty()) {
    std::cerr << "missing subcommand; see --help\n";
    return cli::config_error;
  }

  try {
    const auto o = cli::run(subcommand, config, out_dir, log);
    log << subcommand << ": " << o.status << " (exit " << o.exit_code << ")\n";
    if (o.exit_code != cli::ok && !o.message.empty()) std::cerr << o.message << "\n";
    return o.exit_code;
  } catch (const singlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    cli::write_diagnostic(out_dir, subcommand, cli::config_error, e.what());
    return cli::config_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    cli::write_diagnostic(out_dir, subcommand, cli::config_error, e.what());
    return cli::config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    cli::write_diagnostic(out_dir, subcommand, cli::no_convergence, e.what());
    return cli::no_convergence;
  }
}
