// Sweep and simulation driver for the bioFET receiver model. Modes mirror the
// library: response | sensitivity | snr | lod | simulate | validate.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "biofet/sweep.hpp"
#include "biofet/version.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int run_mode(biofet::RunMode mode, const CommonOptions& opt) {
  using namespace biofet;
  RunConfig config = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
  if (!opt.preset.empty()) apply_preset(config, opt.preset);
  config.mode = mode;
  if (opt.seed_set) config.seed = opt.seed;
  if (!opt.out_path.empty()) config.output_path = opt.out_path;

  std::string trace_csv;
  ResultTable table;
  switch (mode) {
    case RunMode::validate: table = run_validate(config); break;
    case RunMode::simulate: table = run_simulate(config, trace_csv); break;
    default: table = run_sweep(config); break;
  }

  const bool write_trace = mode == RunMode::simulate;
  if (config.output_path.empty()) {
    if (write_trace) std::cout << trace_csv;
    table.write_csv(write_trace ? std::cerr : std::cout);
  } else {
    std::ofstream out(config.output_path);
    if (!out) {
      std::cerr << "error: cannot write '" << config.output_path << "'\n";
      return 1;
    }
    if (write_trace)
      out << trace_csv;
    else
      table.write_csv(out);
    table.write_csv(std::cerr);
  }

  for (const auto& err : table.row_errors) std::cerr << "error: " << err << '\n';
  if (!table.ok()) return 1;
  if (mode == RunMode::validate) {
    for (const auto& row : table.rows)
      if (row.back() != "pass") return 1;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"bioFET molecular-communication receiver model"};
  app.set_version_flag("--version", biofet::version);
  app.require_subcommand(1);

  CommonOptions opt;
  const std::vector<std::pair<std::string, biofet::RunMode>> modes = {
      {"response", biofet::RunMode::response},
      {"sensitivity", biofet::RunMode::sensitivity},
      {"snr", biofet::RunMode::snr},
      {"lod", biofet::RunMode::lod},
      {"simulate", biofet::RunMode::simulate},
      {"validate", biofet::RunMode::validate},
  };

  biofet::RunMode selected = biofet::RunMode::response;
  for (const auto& [name, mode] : modes) {
    auto* sub = app.add_subcommand(name, name + " mode");
    sub->add_option("--config", opt.config_path, "config file (key = value sections)");
    sub->add_option("--preset", opt.preset, "named sweep preset (table1, fig7a..fig10d)");
    sub->add_option("--seed", opt.seed, "RNG seed (default fixed, not wall clock)")
        ->each([&](const std::string&) { opt.seed_set = true; });
    sub->add_option("--out", opt.out_path, "output CSV path (default stdout)");
    sub->callback([&selected, mode]() { selected = mode; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run_mode(selected, opt);
  } catch (const biofet::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
}
