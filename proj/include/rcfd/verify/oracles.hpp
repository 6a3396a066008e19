// Independent reference computations used to check the implementation.
//
// Each oracle reaches its answer by a different route than the code under
// test: exhaustive enumeration of random outcomes, or direct Monte Carlo of
// the underlying process.

#pragma once

#include <cstdint>
#include <vector>

#include "rcfd/core/contention.hpp"

namespace rcfd::verify {

/// Probability that exactly j of i uniform draws on S slots tie at the
/// minimum, by enumerating all S^i outcomes.
double enumerate_p_j_given_i(int i, int j, int s);

/// Round-1 statistics after the previous state (k, b, l), by enumerating
/// every draw vector of the process the chain describes: round-2 losers sit
/// at slot 0, round-2 winners draw fresh on [0, S-1], and round-1 losers
/// hold a residual uniform on [1, S-b-1].
struct FirstRoundTable {
  /// p_a[a] = P(lowest slot = a).
  std::vector<double> p_a;
  /// p_i[a][i] = P(i nodes at the lowest slot | lowest slot = a); zero rows
  /// where p_a[a] = 0.
  std::vector<std::vector<double>> p_i;
};
FirstRoundTable enumerate_first_round(int n, int s, int k, int b, int l);

struct Estimate {
  double mean = 0;
  double std_error = 0;
};

/// Slot-level simulation of N saturated binary exponential backoff stations
/// with window W and stage cap m. Returns the per-station transmit
/// probability per slot with a batch-means standard error.
Estimate bianchi_monte_carlo(int n, int w, int m, std::int64_t slots, std::uint64_t seed);

/// Renewal-reward simulation of slotted channel usage: each slot is idle,
/// a success or a collision with the given probabilities and durations.
Estimate renewal_reward_eta(double p_tr, double p_s, double t_d, double t_slot, double t_s,
                            double t_c, std::int64_t slots, std::uint64_t seed);

/// How round-1 losers enter the next contention in the two-round backoff.
enum class ResidualModel {
  /// Keep myback - minback exactly, as the algorithm does.
  Carry,
  /// Redraw the residual uniformly on its admissible range, as the chain
  /// assumes.
  Resample,
};

/// Success probability of two-round backoff in one collision domain with N
/// saturated nodes, one sample per contention.
Estimate back2f_monte_carlo(int n, int s, std::int64_t slots, std::uint64_t seed,
                            ResidualModel model);

/// Conflict tallies from running the contention logic over all small
/// networks.
struct EnumerationStats {
  std::uint64_t topologies = 0;
  std::uint64_t configurations = 0;
  /// A destination receiving two transmissions from within its range, or a
  /// node sending to one peer while receiving from another.
  std::uint64_t destination_conflicts = 0;
  /// A destination whose intended frame overlaps any other in-range
  /// transmission other than its own.
  std::uint64_t receiver_interference = 0;
  /// Secondary transmissions whose peer did not transmit a primary, among
  /// single-domain networks.
  std::uint64_t pairing_violations = 0;
  /// A node elected both as primary transmitter and RTS receiver.
  std::uint64_t role_violations = 0;
};

/// Enumerates every labeled graph on N nodes for N in [2, max_n], every
/// assignment of head-packet destinations (none or one neighbor per node),
/// and every round-1 draw vector, for each even S in [2, max_s] and m in
/// {1, 2} whose capacity covers N.
EnumerationStats enumerate_rcfd(int max_n, int max_s);

/// Counts transmit sets that violate the destination rule or the receiver
/// interference rule for the given decisions.
struct ConflictCount {
  int destination = 0;
  int interference = 0;
};
ConflictCount count_conflicts(const std::vector<std::vector<core::NodeId>>& neighbors,
                              const std::vector<core::SlotResult>& results);

} // namespace rcfd::verify
