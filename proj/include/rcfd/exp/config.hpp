// Experiment configuration: plain key = value text plus command-line
// overrides, validated as a whole so every problem is reported at once.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rcfd/analytic/phy_timings.hpp"
#include "rcfd/analytic/throughput.hpp"
#include "rcfd/mac/packet_queue.hpp"
#include "rcfd/sim/config.hpp"
#include "rcfd/sim/topology.hpp"

namespace rcfd::exp {

enum class ExpErrc { Syntax, UnknownKey, InvalidValue, DuplicateKey, CapacityExceeded };

const char* to_string(ExpErrc code);

struct ConfigIssue {
  ExpErrc code = ExpErrc::InvalidValue;
  /// Where the value came from, e.g. "run.cfg:3" or "argument 2".
  std::string where;
  std::string key;
  std::string message;
};

class ConfigErrors : public std::runtime_error {
public:
  explicit ConfigErrors(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }
  bool has(ExpErrc code) const;

private:
  std::vector<ConfigIssue> issues_;
};

/// Inclusive integer range with a positive step.
struct IntRange {
  int first = 0;
  int last = 0;
  int step = 1;
  std::vector<int> values() const;
  bool operator==(const IntRange&) const = default;
};

enum class TopologyKind { Grid, Random };

struct ExperimentConfig {
  std::vector<analytic::Protocol> protocols{analytic::Protocol::Rcfd, analytic::Protocol::Back2f,
                                            analytic::Protocol::FdMac, analytic::Protocol::Dcf,
                                            analytic::Protocol::DcfRtsCts};
  /// Node count for analytic runs and random topologies.
  int n = 10;
  TopologyKind topology = TopologyKind::Grid;
  /// Grid side g; the grid has g^2 nodes spaced d apart.
  int grid = 3;
  double d = 100;
  /// Random topologies: square side l and coverage radius r.
  double l = 500;
  double r = 60;
  int length_bytes = 1000;
  double rate_mbps = 6;

  analytic::PhyTimings timings;
  /// Unset picks calibrated for the analysis and ofdm-exact for simulation.
  std::optional<analytic::TdMode> td_mode;
  double td_override_us = 0;
  analytic::FdSuccessModel fd_model = analytic::FdSuccessModel::PairAware;

  sim::TrafficParams traffic;
  double duration_s = 20;
  int repetitions = 10;
  std::uint64_t seed = 1;
  /// Unset means 0 on grids and 0.1 on random topologies.
  std::optional<double> loss_p;
  int queue_capacity = 1000;
  double max_age_s = 1;
  int max_attempts = 7;
  mac::FdPairingRule pairing = mac::FdPairingRule::FullQueue;
  int modulation_order = 0;

  IntRange n_range{2, 50, 1};
  IntRange length_range{100, 2300, 100};
  IntRange grid_range{3, 10, 1};
  IntRange nodes_range{10, 50, 10};

  analytic::TdSpec analytic_td() const;
  analytic::TdSpec sim_td() const;
  double effective_loss_p(TopologyKind kind) const;
  /// Every key with its effective value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// One key = value assignment and where it came from.
struct Assignment {
  std::string key;
  std::string value;
  std::string where;
};

/// Splits configuration text into assignments. '#' starts a comment; blank
/// lines are skipped. Malformed lines are appended to issues.
std::vector<Assignment> parse_lines(const std::string& text, const std::string& source,
                                    std::vector<ConfigIssue>& issues);

/// Builds a configuration from file assignments, then applies overrides on
/// top. Throws ConfigErrors listing every problem found.
ExperimentConfig build_config(const std::vector<Assignment>& file,
                              const std::vector<Assignment>& overrides);

/// Reads text and "key=value" override strings. Throws ConfigErrors.
ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::vector<std::string>& overrides);

/// Checks that an RCFD run with n nodes fits the configured modulation
/// order. Throws ConfigErrors with CapacityExceeded.
void check_capacity(const ExperimentConfig& cfg, int n);

/// Node count of the single configured topology.
int topology_nodes(const ExperimentConfig& cfg);

const char* to_string(TopologyKind kind);

} // namespace rcfd::exp
