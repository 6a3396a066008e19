// Analytic tables, figure sweeps and simulation campaigns.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcfd/exp/config.hpp"
#include "rcfd/exp/csv.hpp"
#include "rcfd/sim/engine.hpp"

namespace rcfd::exp {

enum class Figure { ThroughputVsN, ThroughputVsLength, SimGridCaseI, SimGridCaseII, SimRandom };

const char* to_string(Figure f);
/// Throws std::invalid_argument for an unknown name.
Figure parse_figure(const std::string& name);
const std::vector<Figure>& all_figures();

/// Stated in every simulation output.
extern const char* const kFidelityNote;

/// One simulated network setting.
struct SimPoint {
  TopologyKind kind = TopologyKind::Grid;
  /// Grid side g, or node count N for random placement.
  int size = 3;
  int length_bytes = 1000;
  double rate_mbps = 6;
  /// Coverage radius for random placement.
  double r = 60;
  double loss_p = 0;
};

int point_nodes(const SimPoint& p);

/// Seed of repetition k. Every protocol sees the same seed, topology and
/// traffic draws at a given repetition.
std::uint64_t repetition_seed(std::uint64_t base, int rep);

sim::Topology build_topology(const ExperimentConfig& cfg, const SimPoint& p, std::uint64_t seed);

sim::SimConfig make_sim_config(const ExperimentConfig& cfg, const SimPoint& p,
                               analytic::Protocol protocol, std::uint64_t seed);

struct SimRun {
  std::size_t point = 0;
  analytic::Protocol protocol = analytic::Protocol::Rcfd;
  int rep = 0;
  std::uint64_t seed = 0;
  sim::SimMetrics metrics;
  /// Empty unless the run failed.
  std::string error;
};

/// Called after each finished run with the count done so far.
using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (point, protocol, repetition) of cfg.protocols and
/// cfg.repetitions on at most `jobs` threads. Results are ordered by point,
/// then protocol, then repetition.
std::vector<SimRun> run_campaign(const ExperimentConfig& cfg, const std::vector<SimPoint>& points,
                                 int jobs, const Progress& progress = {});

/// Mean and sample standard deviation over repetitions.
struct Summary {
  double mean = 0;
  double sd = 0;
};
Summary summarize(const std::vector<double>& xs);

/// Repetition-averaged metrics of one protocol at one point.
struct PointSummary {
  std::size_t point = 0;
  analytic::Protocol protocol = analytic::Protocol::Rcfd;
  int runs = 0;
  Summary gamma;
  Summary delta;
  Summary jain;
  Summary delay_delivered;
  Summary utilization;
  double data_frames = 0;
  double data_collisions = 0;
  double secondary_collisions = 0;
  double delivered = 0;
  double discarded_retry = 0;
  double discarded_overflow = 0;
  double discarded_age = 0;
  std::string error;
};

std::vector<PointSummary> summarize_campaign(const ExperimentConfig& cfg,
                                             const std::vector<SimPoint>& points,
                                             const std::vector<SimRun>& runs);

/// Network settings of a simulation figure. The figure fixes payload and
/// rate; the sizes come from cfg.grid_range or cfg.nodes_range.
std::vector<SimPoint> figure_points(Figure f, const ExperimentConfig& cfg);

/// Analysis table: FD MAC, BACK2F and RCFD, then the DCF variants, for
/// N in {2, 10, 20, 50}, with the solve time of each row.
CsvTable analytic_table(const ExperimentConfig& cfg);

/// Throws ConfigErrors with CapacityExceeded before any run when a size in
/// the sweep exceeds the RCFD capacity.
CsvTable sweep(Figure f, const ExperimentConfig& cfg, int jobs, const Progress& progress = {});

/// Per-repetition rows for the configured topology.
CsvTable simulate(const ExperimentConfig& cfg, int jobs, const Progress& progress = {});

} // namespace rcfd::exp
