// Markov chain of two-round frequency-domain backoff.
//
// A state (x, c, y) records how many nodes won round 1, the lowest round-1
// slot, and how many of those won round 2. The transition from (k, b, l) to
// (i, a, j) factors as p(j | i) * p(i | a, k, b, l) * p(a | k, b, l).
// Round-1 losers keep the residual of their draw; the chain treats those
// residuals as uniform over their admissible range.

#pragma once

#include <cstdint>
#include <vector>

namespace rcfd::analytic {

struct MarkovState {
  int x = 1; ///< round-1 winners, 1..N
  int c = 0; ///< lowest round-1 slot, 0..S-1
  int y = 1; ///< round-2 winners, 1..x
  bool operator==(const MarkovState&) const = default;
};

/// Number of states: (S-1) N (N+1) / 2 for c < S-1, plus N with c = S-1.
std::int64_t back2f_state_count(int n, int s);

/// Probability that j of i round-2 contenders share the lowest of S slots.
double p_j_given_i(int i, int j, int s);

/// Probability of i round-1 winners given the lowest slot a and the
/// previous state (k, b, l).
double p_i_given_akbl(int i, int a, int k, int b, int l, int n, int s);

/// Probability that the lowest round-1 slot is a given the previous state.
double p_a_given_kbl(int a, int k, int b, int l, int n, int s);

/// One-step transition probability between two states.
double back2f_transition(const MarkovState& from, const MarkovState& to, int n, int s);

/// All states in a fixed order: c ascending, then x, then y.
std::vector<MarkovState> back2f_states(int n, int s);

struct Back2fSolveOptions {
  /// Stop when the L1 change between iterates drops below this value.
  double tolerance = 1e-10;
  int max_iterations = 200000;
};

struct Back2fStationary {
  int n = 0;
  int s = 0;
  /// States and their stationary mass, in back2f_states order.
  std::vector<MarkovState> states;
  std::vector<double> pi;
  /// Mass of the states with a single round-2 winner.
  double p_s = 0;
  int iterations = 0;
  double last_change = 0;
};

/// Power iteration that never forms the transition matrix. Sources are
/// grouped by (k, l) when k != l, by b alone when k = l = N, and by (k, b)
/// when k = l < N; each group maps to the next round-1 outcome through a
/// precomputed coefficient table. Throws NonConvergence past the cap.
Back2fStationary back2f_stationary(int n, int s, const Back2fSolveOptions& options = {});

/// Applies the transition operator once by explicit summation over all state
/// pairs. Quadratic in the state count; intended for verification only.
std::vector<double> back2f_apply_naive(const std::vector<double>& pi, int n, int s);

} // namespace rcfd::analytic
