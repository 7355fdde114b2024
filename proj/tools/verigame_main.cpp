#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "verigame/config.hpp"
#include "verigame/sim.hpp"

namespace fs = std::filesystem;
using namespace verigame;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitReplay = 3;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// Write-then-rename so partial output never lands under the final name.
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::InvalidConfig, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

sim::FlatConfig load_flat(const std::string& config_path,
                          std::optional<std::uint64_t> seed_override) {
  sim::FlatConfig flat = config_path.empty()
                             ? sim::FlatConfig{}
                             : sim::FlatConfig::parse(read_file(config_path));
  if (seed_override) flat.set("seed", std::to_string(*seed_override));
  return flat;
}

int cmd_run(const std::string& config_path,
            std::optional<std::uint64_t> seed_override, const fs::path& out_dir,
            bool quiet) {
  sim::FlatConfig flat = load_flat(config_path, seed_override);
  sim::ScenarioConfig config = sim::ScenarioConfig::from_flat(flat);
  sim::RunResult result = sim::run(config);

  std::string csv = sim::metrics_csv_header() + "\n" +
                    sim::metrics_csv_row(config.seed, result.metrics) + "\n";
  write_atomic(out_dir / "metrics.csv", csv);

  std::string log_text;
  for (const auto& line : result.log_lines) {
    log_text += line;
    log_text += '\n';
  }
  write_atomic(out_dir / "events.ndjson", log_text);

  if (!quiet) {
    std::cout << "tasks=" << result.metrics.tasks_finalized
              << " incorrect_finalized_rate="
              << result.metrics.incorrect_finalized_rate
              << " challenges=" << result.metrics.challenges_issued
              << " burned=" << result.metrics.total_burned
              << " records=" << result.metrics.log_records << "\n"
              << "balances " << result.metrics.balance_digest << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path,
              std::optional<std::uint64_t> seed_override,
              const fs::path& out_dir, bool quiet) {
  sim::FlatConfig flat = load_flat(config_path, seed_override);
  std::vector<sim::SweepAxis> axes = sim::sweep_axes_from_config(flat);
  std::vector<sim::SweepRow> rows = sim::sweep(flat, axes);
  write_atomic(out_dir / "sweep.csv", sim::sweep_csv(rows));
  if (!quiet)
    std::cout << "cells=" << rows.size() << " axes=" << axes.size() << "\n";
  return kExitOk;
}

int cmd_replay(const std::string& log_path, bool quiet) {
  std::vector<std::string> lines = read_lines(log_path);
  sim::ReplayState state = sim::replay(lines);
  if (!quiet) {
    std::cout << "records=" << state.records << " accounts="
              << state.balances.size() << " burned=" << state.burned
              << " deposited=" << state.deposited << "\n"
              << "balances " << state.balance_digest << "\n";
  }
  return kExitOk;
}

int cmd_check_eq(const std::string& config_path,
                 const fs::path& out_dir, bool quiet) {
  sim::FlatConfig flat = config_path.empty()
                             ? sim::FlatConfig{}
                             : sim::FlatConfig::parse(read_file(config_path));
  sim::CheckEqParams params = sim::check_eq_params_from_config(flat);
  std::vector<sim::CheckEqRow> rows = sim::check_equilibrium(params);
  write_atomic(out_dir / "checkeq.csv", sim::check_eq_csv(rows));
  if (!quiet) {
    int solver_rows = 0, in_equilibrium = 0;
    for (const auto& row : rows) {
      if (row.role != agents::Role::Solver) continue;
      ++solver_rows;
      if (row.equilibrium) ++in_equilibrium;
    }
    std::cout << "cells=" << solver_rows
              << " solver_equilibrium=" << in_equilibrium
              << " deviation_profitable=" << (solver_rows - in_equilibrium)
              << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::string& metrics_path) {
  std::vector<std::string> lines = read_lines(metrics_path);
  if (lines.size() < 2)
    fail(ErrorCode::InvalidConfig, "metrics file has no data rows");
  std::vector<std::string> header;
  {
    std::istringstream h(lines.front());
    std::string col;
    while (std::getline(h, col, ',')) header.push_back(col);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> cells;
    std::istringstream row(lines[i]);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    std::cout << "row " << i << "\n";
    for (std::size_t c = 0; c < header.size() && c < cells.size(); ++c)
      std::cout << "  " << header[c] << ": " << cells[c] << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collateralized verification game simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* cmd, bool wants_config) {
    if (wants_config) cmd->add_option("--config", config_path, "scenario config file");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_flag("--quiet", quiet, "suppress the summary line");
    cmd->add_option("--seed", seed_value, "seed override")
        ->each([&](const std::string&) { seed_override = seed_value; });
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario");
  add_common(run_cmd, true);
  run_cmd->get_option("--config")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid");
  add_common(sweep_cmd, true);
  sweep_cmd->get_option("--config")->required();

  std::string replay_path;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "verify and reconstruct an event log");
  replay_cmd->add_option("log", replay_path, "events.ndjson path")->required();
  replay_cmd->add_flag("--quiet", quiet, "suppress the summary line");

  CLI::App* check_cmd = app.add_subcommand(
      "check-eq", "per-role deviation table over a bond/probability grid");
  add_common(check_cmd, true);

  std::string report_path;
  CLI::App* report_cmd =
      app.add_subcommand("report", "render a metrics CSV as text");
  report_cmd->add_option("metrics", report_path, "metrics.csv path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(run_cmd))
      return cmd_run(config_path, seed_override, out_dir, quiet);
    if (app.got_subcommand(sweep_cmd))
      return cmd_sweep(config_path, seed_override, out_dir, quiet);
    if (app.got_subcommand(replay_cmd)) return cmd_replay(replay_path, quiet);
    if (app.got_subcommand(check_cmd))
      return cmd_check_eq(config_path, out_dir, quiet);
    if (app.got_subcommand(report_cmd)) return cmd_report(report_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BrokenChain ? kExitReplay : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitUsage;
}
