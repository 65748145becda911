// cqd: command-line front end for the classical/quantum density toolkit.
//
//   cqd <command> [--config PATH] [--out DIR] [--seed N] [--format csv]
//                 [--set section.key=value]... [--print-config]

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqd/commands.hpp"
#include "cqd/config.hpp"

int main(int argc, char** argv) {
  using namespace cqd;
  CLI::App app{"Classical and quantum probability densities for linear-potential wells"};
  app.set_help_flag("-h,--help", "Show help");

  std::string command, config_path, out_dir, format;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool print_config = false;

  app.add_option("command", command, "classical | eigensolve | momentum | table1 | sweep | bounce-sim")->required();
  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--out", out_dir, "Output directory (overrides output.directory)");
  app.add_option("--seed", seed, "Sampling seed (overrides task.seed)");
  app.add_option("--format", format, "Output format; only csv");
  app.add_option("--set", overrides, "Override one key: section.key=value");
  app.add_flag("--print-config", print_config, "Print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << cli::diagnostic("usage", "", e.what()) << '\n';
    return cli::kConfigFailure;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& o : overrides) apply_override(cfg, o);
    if (!out_dir.empty()) apply_override(cfg, "output.directory=" + out_dir);
    if (seed) cfg.task.seed = *seed;
    if (!format.empty()) apply_override(cfg, "output.format=" + format);
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << cli::diagnostic("config", e.key(), e.what()) << '\n';
    return cli::kConfigFailure;
  }

  if (print_config) {
    std::cout << emit_config(cfg);
    return cli::kSuccess;
  }
  const auto& names = cli::command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    std::cerr << cli::diagnostic("config", "", "unknown command '" + command + "'") << '\n';
    return cli::kConfigFailure;
  }
  return cli::run_command(command, cfg, std::cout, std::cerr);
}
