// The acceptance checks, one result per criterion, with pinned tolerances.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcfd/exp/config.hpp"

namespace rcfd::exp {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  /// Measured values next to their targets.
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  int jobs = 0;
  std::uint64_t seed = 1;
  /// Comparative campaign: grid sizes, random node counts, repetitions and
  /// measured time per run.
  IntRange grids{3, 6, 1};
  IntRange nodes{10, 30, 10};
  int repetitions = 10;
  double duration_s = 20;
  /// Slots of the two-round backoff Monte Carlo.
  std::int64_t monte_carlo_slots = 1000000;
  /// Criteria to run; empty runs all nine.
  std::vector<int> only;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
  /// Progress lines for long steps.
  std::function<void(const std::string&)> on_note;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS  3  title: detail (1.2 s)".
std::string format_result(const CriterionResult& r);

} // namespace rcfd::exp
