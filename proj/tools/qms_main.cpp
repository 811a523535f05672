#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "qms/error.hpp"
#include "qms/runner.hpp"

namespace {

using qms::cli::RunConfig;

RunConfig build_config(const std::string& config_path, const std::vector<std::string>& overrides) {
  RunConfig c;
  if (!config_path.empty()) c = qms::cli::load_config(config_path, c);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw qms::Error(qms::ErrorCode::InvalidParameter, "override '" + kv + "' is not key=value");
    qms::cli::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return c;
}

void emit(const qms::cli::Report& report, const std::string& out) {
  qms::cli::write_report(report, out);
  fmt::print("{}\nwrote {}.csv {}.json\n", report.summary, out, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Metropolis solver: classical and quantum walk time-to-solution"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run one configuration and write <out>.csv and <out>.json");
  run->add_option("-c,--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("settings", overrides, "key=value overrides applied after the config file");

  std::string source;
  auto* resources = app.add_subcommand("resources", "Qubit count and statevector memory for a problem");
  resources->add_option("problem", source, "problem file or nqueens:<n>[:fixed=<col>,<row>]")->required();

  std::vector<std::string> sources;
  std::vector<std::string> pin_sets;
  auto* sweep = app.add_subcommand("sweep", "Compare over many instances and fit the TTS scaling law");
  sweep->add_option("-c,--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  sweep->add_option("--fixed-queens", pin_sets,
                    "add single-pin n-queens instances: <n> or <n>:<limit>")
      ->allow_extra_args(false);
  sweep->add_option("--source", sources, "add one problem source")->allow_extra_args(false);
  sweep->add_option("settings", overrides, "key=value overrides");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*resources) {
      const auto e = qms::cli::estimate_resources(source);
      fmt::print("qubits {}\nmemory_bytes {}\n", e.qubits, e.memory_bytes);
      fmt::print("state {} move_id {} move_value {} coin {} ancilla {}\n", e.layout.state_bits,
                 e.layout.move_id_bits, e.layout.move_value_bits, e.layout.coin_bits,
                 e.layout.ancilla_bits);
      return 0;
    }

    RunConfig config = build_config(config_path, overrides);
    if (*run) {
      emit(qms::cli::run(config), config.out);
      return 0;
    }

    for (const auto& set : pin_sets) {
      const auto colon = set.find(':');
      const int n = std::stoi(set.substr(0, colon));
      const std::size_t limit = colon == std::string::npos ? 0 : std::stoul(set.substr(colon + 1));
      const auto more = qms::cli::fixed_queen_sources(n, limit);
      sources.insert(sources.end(), more.begin(), more.end());
    }
    if (sources.empty())
      throw qms::Error(qms::ErrorCode::InvalidParameter, "sweep needs at least one instance");
    config.problem = sources.front();
    config.validate();
    emit(qms::cli::run_sweep(config, sources), config.out);
    return 0;
  } catch (const qms::Error& e) {
    fmt::print(stderr, "qms: {}\n", e.what());
    return qms::cli::exit_status(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "qms: {}\n", e.what());
    return 1;
  }
}
