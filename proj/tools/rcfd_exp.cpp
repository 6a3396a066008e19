// Command-line front end: analytic tables, simulations, figure sweeps and
// the acceptance suite.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure,
// 3 acceptance-check failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcfd/exp/acceptance.hpp"
#include "rcfd/exp/config.hpp"
#include "rcfd/exp/experiments.hpp"

namespace {

using namespace rcfd::exp;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;
constexpr int kAcceptanceFailed = 3;

struct Globals {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  bool quiet = false;
};

ExperimentConfig load(const Globals& g, std::vector<std::string> overrides)
{
  std::string text;
  std::string source = "config";
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) {
      throw ConfigErrors({{ExpErrc::InvalidValue, g.config_path, "", "cannot read config file"}});
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    source = g.config_path;
  }
  if (g.seed_set) {
    overrides.push_back("seed=" + std::to_string(g.seed));
  }
  return parse_config(text, source, overrides);
}

// Writes to --out, or stdout when it is empty.
void emit(const Globals& g, const CsvTable& t)
{
  if (g.out_path.empty()) {
    t.write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(g.out_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + g.out_path);
  }
  t.write(out);
  if (!out) {
    throw std::runtime_error("write to " + g.out_path + " failed");
  }
}

Progress progress_printer(const Globals& g, const std::string& label)
{
  if (g.quiet) {
    return {};
  }
  return [label, last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
    const std::size_t pct = total == 0 ? 100 : done * 100 / total;
    if (pct / 10 != last / 10 || done == total) {
      std::cerr << label << ": " << done << "/" << total << "\n";
      last = pct;
    }
  };
}

bool any_error(const CsvTable& t)
{
  const std::size_t col = t.header.size() - 1;
  if (t.header.empty() || t.header[col] != "error") {
    return false;
  }
  for (const auto& row : t.rows) {
    if (col < row.size() && !row[col].empty()) {
      return true;
    }
  }
  return false;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"RCFD channel access: analysis, simulation and experiment sweeps"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "key = value configuration file");
  app.add_option("--out", g.out_path, "CSV output path (default stdout)");
  auto* seed_opt = app.add_option("--seed", g.seed, "base seed, overrides the config");
  app.add_option("--jobs", g.jobs, "maximum concurrent runs (0 = hardware threads)")
    ->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", g.quiet, "no progress on stderr");

  std::vector<std::string> overrides;
  auto* analytic_cmd = app.add_subcommand("analytic", "analysis table for N in {2, 10, 20, 50}");
  analytic_cmd->add_option("overrides", overrides, "key=value settings");

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate the configured topology");
  simulate_cmd->add_option("overrides", overrides, "key=value settings");

  std::string figure;
  auto* sweep_cmd = app.add_subcommand("sweep", "reproduce one figure as CSV");
  sweep_cmd->add_option("figure", figure, "throughput-vs-n, throughput-vs-length, "
                                          "sim-grid-caseI, sim-grid-caseII or sim-random")
    ->required();
  sweep_cmd->add_option("overrides", overrides, "key=value settings");

  AcceptanceOptions acc;
  std::vector<int> only;
  bool quick = false;
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  verify_cmd->add_option("--only", only, "criteria to run (default all)")->delimiter(',');
  verify_cmd->add_option("--repetitions", acc.repetitions, "repetitions per simulated point");
  verify_cmd->add_option("--duration", acc.duration_s, "measured seconds per run");
  verify_cmd->add_flag("--quick", quick, "smaller campaign: grids 3-4, N 10-20, 2 repetitions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  g.seed_set = seed_opt->count() > 0;

  try {
    if (*verify_cmd) {
      acc.jobs = g.jobs;
      acc.seed = g.seed_set ? g.seed : 1;
      acc.only = only;
      if (quick) {
        acc.grids = {3, 4, 1};
        acc.nodes = {10, 20, 10};
        acc.repetitions = 2;
        acc.duration_s = std::min(acc.duration_s, 5.0);
      }
      acc.on_result = [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; };
      if (!g.quiet) {
        acc.on_note = [](const std::string& s) { std::cerr << s << "\n"; };
      }
      const auto results = run_acceptance(acc);
      int failed = 0;
      for (const auto& r : results) {
        failed += r.pass ? 0 : 1;
      }
      std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
                << "\n";
      return failed == 0 ? kOk : kAcceptanceFailed;
    }

    const ExperimentConfig cfg = load(g, overrides);
    CsvTable table;
    if (*analytic_cmd) {
      table = analytic_table(cfg);
    } else if (*simulate_cmd) {
      table = simulate(cfg, g.jobs, progress_printer(g, "simulate"));
    } else {
      Figure f;
      try {
        f = parse_figure(figure);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
      }
      table = sweep(f, cfg, g.jobs, progress_printer(g, figure));
    }
    emit(g, table);
    return any_error(table) ? kRuntimeError : kOk;
  } catch (const ConfigErrors& e) {
    for (const ConfigIssue& i : e.issues()) {
      std::cerr << "error: " << i.where << ": " << to_string(i.code) << ": " << i.message << "\n";
    }
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
