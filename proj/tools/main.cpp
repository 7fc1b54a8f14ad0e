#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "aoigame/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = aoigame::cli;
  CLI::App app{"AoI sampling game solver, mechanism designer and simulators"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  for (const auto& name : cli::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Scenario file (JSON)")->required();
    sub->add_option("--out", out_path, "Output path (default stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "Overrides the scenario seed");
    sub->add_option("--jobs", jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::ok : cli::config_error;
  }
  auto* sub = app.get_subcommands().front();

  try {
    const auto cfg = cli::load_config(config_path);
    cli::RunOptions opts;
    opts.format = format;
    opts.jobs = jobs;
    if (sub->count("--seed")) opts.seed = seed;
    if (out_path.empty()) {
      cli::run_command(sub->get_name(), cfg, opts, std::cout);
    } else {
      std::ofstream out(out_path);
      if (!out) throw cli::ConfigError("cannot open output file " + out_path);
      cli::run_command(sub->get_name(), cfg, opts, out);
    }
  } catch (...) {
    return cli::exit_code_for(std::current_exception(), std::cerr);
  }
  return cli::ok;
}
