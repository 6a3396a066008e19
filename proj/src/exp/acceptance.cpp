#include "rcfd/exp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "rcfd/analytic/back2f_chain.hpp"
#include "rcfd/analytic/throughput.hpp"
#include "rcfd/common/rng.hpp"
#include "rcfd/core/contention.hpp"
#include "rcfd/core/subcarrier_map.hpp"
#include "rcfd/exp/experiments.hpp"
#include "rcfd/verify/oracles.hpp"

namespace rcfd::exp {

using analytic::Protocol;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string f4(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string g3(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const int kTableN[] = {2, 10, 20, 50};

// Compares a table row against targets; tol is absolute, or relative when
// relative is set.
struct RowCheck {
  bool pass = true;
  std::string detail;
};

template <typename F>
RowCheck check_row(F eta_of, const double* target, double tol, bool relative)
{
  RowCheck c;
  for (int i = 0; i < 4; ++i) {
    const double eta = eta_of(kTableN[i]);
    const double err = relative ? std::abs(eta - target[i]) / target[i] : std::abs(eta - target[i]);
    c.pass = c.pass && err <= tol;
    c.detail += (i == 0 ? "" : ", ") + std::string("N=") + std::to_string(kTableN[i]) + " " +
                f4(eta) + " vs " + f4(target[i]);
  }
  return c;
}

CriterionResult rcfd_table()
{
  CriterionResult r{1, "RCFD analysis table", false, "", 0};
  const auto t0 = Clock::now();
  const analytic::PhyTimings t;
  const analytic::TdSpec td{analytic::TdMode::Calibrated, 0};
  const double target[] = {1.8570, 1.0316, 0.9773, 0.9474};
  const RowCheck c = check_row(
    [&](int n) { return analytic::eta_rcfd(n, t, 1000, 6, td).eta; }, target, 0.001, false);
  r.seconds = seconds_since(t0);
  r.pass = c.pass && r.seconds < 1;
  r.detail = c.detail + "; tolerance 0.001 absolute; runtime " + g3(r.seconds) + " s (< 1 s)";
  return r;
}

CriterionResult back2f_table()
{
  CriterionResult r{2, "BACK2F analysis table via the Markov chain", false, "", 0};
  const auto t0 = Clock::now();
  const analytic::PhyTimings t;
  const analytic::TdSpec td{analytic::TdMode::Calibrated, 0};
  const double target[] = {0.9319, 0.9304, 0.9287, 0.9235};
  double solve50 = 0;
  const RowCheck c = check_row(
    [&](int n) {
      const auto s0 = Clock::now();
      const double eta = analytic::eta_back2f(n, t, 1000, 6, td).eta;
      if (n == 50) {
        solve50 = seconds_since(s0);
      }
      return eta;
    },
    target, 0.005, false);
  r.seconds = seconds_since(t0);
  r.pass = c.pass && solve50 < 300;
  r.detail = c.detail + "; tolerance 0.005 absolute; N=50 solve " + g3(solve50) + " s (< 300 s)";
  return r;
}

CriterionResult fd_table()
{
  CriterionResult r{3, "FD MAC analysis table", false, "", 0};
  const auto t0 = Clock::now();
  const analytic::PhyTimings t;
  const analytic::TdSpec td{analytic::TdMode::Calibrated, 0};
  const double target[] = {1.6908, 0.9390, 0.8840, 0.8485};
  const RowCheck c = check_row(
    [&](int n) { return analytic::eta_fd(n, t, 1000, 6, td).eta; }, target, 0.02, true);
  r.seconds = seconds_since(t0);
  r.pass = c.pass && r.seconds < 1;
  r.detail = c.detail + "; tolerance 2% relative; runtime " + g3(r.seconds) + " s (< 1 s)";
  return r;
}

// Every previous state (k, b, l) the chain can occupy.
template <typename F>
void for_each_prior(int n, int s, F f)
{
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= k; ++l) {
      const int b_max = k == n ? s - 1 : s - 2;
      for (int b = 0; b <= b_max; ++b) {
        f(k, b, l);
      }
    }
  }
}

CriterionResult factor_oracles()
{
  CriterionResult r{4, "chain factors against brute-force enumeration", false, "", 0};
  const auto t0 = Clock::now();
  long compared = 0;
  long distributions = 0;
  double worst = 0;
  double worst_sum = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int s = 2; s <= 6; ++s) {
      for (int i = 1; i <= n; ++i) {
        double sum = 0;
        for (int j = 1; j <= i; ++j) {
          const double p = analytic::p_j_given_i(i, j, s);
          worst = std::max(worst, std::abs(p - verify::enumerate_p_j_given_i(i, j, s)));
          sum += p;
          ++compared;
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1));
        ++distributions;
      }
      for_each_prior(n, s, [&](int k, int b, int l) {
        const verify::FirstRoundTable t = verify::enumerate_first_round(n, s, k, b, l);
        double sum_a = 0;
        for (int a = 0; a < s; ++a) {
          const double pa = analytic::p_a_given_kbl(a, k, b, l, n, s);
          worst = std::max(worst, std::abs(pa - t.p_a[a]));
          sum_a += pa;
          ++compared;
          if (t.p_a[a] == 0) {
            continue;
          }
          double sum_i = 0;
          for (int i = 1; i <= n; ++i) {
            const double pi = analytic::p_i_given_akbl(i, a, k, b, l, n, s);
            worst = std::max(worst, std::abs(pi - t.p_i[a][i]));
            sum_i += pi;
            ++compared;
          }
          worst_sum = std::max(worst_sum, std::abs(sum_i - 1));
          ++distributions;
        }
        worst_sum = std::max(worst_sum, std::abs(sum_a - 1));
        ++distributions;
      });
    }
  }
  r.seconds = seconds_since(t0);
  r.pass = worst < 1e-12 && worst_sum < 1e-9;
  r.detail = std::to_string(compared) + " factors, worst gap " + g3(worst) + " (< 1e-12); " +
             std::to_string(distributions) + " distributions, worst sum error " + g3(worst_sum) +
             " (< 1e-9); N <= 4, S <= 6";
  return r;
}

CriterionResult chain_vs_monte_carlo(const AcceptanceOptions& o)
{
  CriterionResult r{5, "BACK2F chain against a direct simulation of the algorithm", true, "", 0};
  const auto t0 = Clock::now();
  const std::pair<int, int> cases[] = {{3, 4}, {5, 8}};
  for (const auto& [n, s] : cases) {
    const double chain = analytic::back2f_stationary(n, s).p_s;
    const auto mc = verify::back2f_monte_carlo(n, s, o.monte_carlo_slots,
                                               derive_seed(o.seed, 0x6d63u + n),
                                               verify::ResidualModel::Carry);
    const double z = std::abs(chain - mc.mean) / mc.std_error;
    r.pass = r.pass && z <= 3;
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("N=") + std::to_string(n) +
                " S=" + std::to_string(s) + " chain " + f4(chain) + " vs simulation " +
                f4(mc.mean) + " +- " + g3(mc.std_error) + " (" + g3(z) + " SE, limit 3)";
  }
  r.detail += "; " + std::to_string(o.monte_carlo_slots) + " slots each";
  r.seconds = seconds_since(t0);
  return r;
}

CriterionResult no_collision(const AcceptanceOptions& o)
{
  CriterionResult r{6, "RCFD no-collision property", false, "", 0};
  const auto t0 = Clock::now();
  if (o.on_note) {
    o.on_note("criterion 6: enumerating every network with N <= 4, S <= 8");
  }
  const verify::EnumerationStats e = verify::enumerate_rcfd(4, 8);
  const bool enum_ok = e.destination_conflicts == 0 && e.role_violations == 0;

  ExperimentConfig cfg;
  cfg.protocols = {Protocol::Rcfd};
  cfg.repetitions = 10;
  cfg.duration_s = o.duration_s;
  cfg.seed = o.seed;
  std::vector<SimPoint> points;
  for (int g : {3, 5}) {
    cfg.grid_range = {g, g, 1};
    const auto p = figure_points(Figure::SimGridCaseI, cfg);
    points.insert(points.end(), p.begin(), p.end());
  }
  for (int n : {10, 30}) {
    cfg.nodes_range = {n, n, 1};
    const auto p = figure_points(Figure::SimRandom, cfg);
    points.insert(points.end(), p.begin(), p.end());
  }
  if (o.on_note) {
    o.on_note("criterion 6: " + std::to_string(points.size() * 10) + " RCFD runs");
  }
  const auto runs = run_campaign(cfg, points, o.jobs);
  std::uint64_t total = 0;
  std::uint64_t secondary = 0;
  std::uint64_t frames = 0;
  std::string failed;
  std::map<std::size_t, std::uint64_t> per_point;
  for (const SimRun& run : runs) {
    if (!run.error.empty()) {
      failed = run.error;
      continue;
    }
    total += run.metrics.data_collisions;
    secondary += run.metrics.secondary_collisions;
    frames += run.metrics.data_frames;
    per_point[run.point] += run.metrics.data_collisions;
  }
  r.seconds = seconds_since(t0);
  r.pass = enum_ok && total == 0 && failed.empty();
  r.detail = "enumeration: " + std::to_string(e.configurations) + " configurations, " +
             std::to_string(e.destination_conflicts) + " conflicting decisions, " +
             std::to_string(e.role_violations) + " role violations; simulation: " +
             std::to_string(total) + " data collisions in " + std::to_string(frames) +
             " data frames (" + std::to_string(secondary) + " on full-duplex replies, " +
             std::to_string(total - secondary) + " on primaries)";
  std::string where;
  for (std::size_t i = 0; i < points.size(); ++i) {
    where += (i == 0 ? "" : ", ") + std::string(to_string(points[i].kind)) + " " +
             std::to_string(points[i].size) + ": " + std::to_string(per_point[i]);
  }
  r.detail += " [" + where + "]; target 0";
  if (!failed.empty()) {
    r.detail += "; run failed: " + failed;
  }
  return r;
}

CriterionResult worked_scenarios()
{
  using core::NodeRole;
  using core::SlotParticipant;
  using core::TxDecision;
  CriterionResult r{7, "worked contention scenarios", false, "", 0};
  const auto t0 = Clock::now();
  // n1 - n2 - n3 with n1 and n3 out of range of each other.
  const std::vector<std::vector<core::NodeId>> line = {{1}, {0, 2}, {1}};
  const core::SubcarrierMap map = core::default_mapping(3, 6, 1);
  auto contender = [](core::NodeId dest, std::uint32_t sc) {
    SlotParticipant p;
    p.intent = dest;
    p.pick = core::Slot{sc - 1, 0};
    p.queued_for = {dest};
    return p;
  };

  std::vector<SlotParticipant> ht(3);
  ht[0] = contender(1, 4);
  ht[2] = contender(1, 5);
  const auto a = core::resolve_contention(line, ht, map);
  const bool one = a[0].decision == TxDecision::primary(1) && a[2].decision == TxDecision::hold() &&
                   a[1].role == NodeRole::RtsReceiver && a[1].cts_recipient == 0u &&
                   a[1].decision == TxDecision::hold();

  std::vector<SlotParticipant> fd(3);
  fd[0] = contender(1, 2);
  fd[1] = contender(0, 6);
  const auto b = core::resolve_contention(line, fd, map);
  const bool two = b[0].decision == TxDecision::primary(1) &&
                   b[1].decision == TxDecision::secondary(0) && b[2].decision == TxDecision::hold();

  r.seconds = seconds_since(t0);
  r.pass = one && two;
  r.detail = std::string("scenario 1 (n1 transmits to n2, n3 denied): ") + (one ? "ok" : "wrong") +
             "; scenario 2 (n1 primary, n2 full-duplex reply): " + (two ? "ok" : "wrong");
  return r;
}

struct Ordering {
  bool pass = true;
  std::vector<std::string> misses;
};

CriterionResult comparative(const AcceptanceOptions& o)
{
  CriterionResult r{8, "comparative simulation orderings", false, "", 0};
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  cfg.repetitions = o.repetitions;
  cfg.duration_s = o.duration_s;
  cfg.seed = o.seed;
  cfg.grid_range = o.grids;
  cfg.nodes_range = o.nodes;

  struct Scenario {
    Figure figure;
    std::vector<SimPoint> points;
    std::vector<PointSummary> sums;
  };
  std::vector<Scenario> scenarios;
  for (Figure f : {Figure::SimGridCaseI, Figure::SimGridCaseII, Figure::SimRandom}) {
    scenarios.push_back({f, figure_points(f, cfg), {}});
  }
  std::size_t total_runs = 0;
  for (const Scenario& s : scenarios) {
    total_runs += s.points.size() * cfg.protocols.size() * static_cast<std::size_t>(cfg.repetitions);
  }
  std::size_t before = 0;
  std::size_t next_note = 0;
  for (Scenario& s : scenarios) {
    const auto runs = run_campaign(cfg, s.points, o.jobs, [&](std::size_t done, std::size_t) {
      const std::size_t all = before + done;
      if (o.on_note && all * 10 >= next_note * total_runs) {
        o.on_note("criterion 8: " + std::to_string(all) + " of " + std::to_string(total_runs) +
                  " runs after " + g3(seconds_since(t0)) + " s");
        next_note = all * 10 / total_runs + 1;
      }
    });
    before += runs.size();
    s.sums = summarize_campaign(cfg, s.points, runs);
  }
  r.seconds = seconds_since(t0);

  auto get = [](const Scenario& s, std::size_t point, Protocol p) -> const PointSummary& {
    for (const PointSummary& x : s.sums) {
      if (x.point == point && x.protocol == p) {
        return x;
      }
    }
    throw std::logic_error("missing summary");
  };
  auto label = [](const Scenario& s, std::size_t i) {
    return std::string(to_string(s.figure)) + " " +
           (s.points[i].kind == TopologyKind::Grid ? "g=" : "N=") +
           std::to_string(s.points[i].size);
  };
  const Protocol time_domain[] = {Protocol::Dcf, Protocol::DcfRtsCts, Protocol::FdMac};
  const Protocol baselines[] = {Protocol::Back2f, Protocol::FdMac, Protocol::Dcf,
                                Protocol::DcfRtsCts};

  Ordering gamma;
  Ordering delay;
  Ordering fairness;
  bool errors = false;
  std::string values;
  for (const Scenario& s : scenarios) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      for (Protocol p : cfg.protocols) {
        errors = errors || !get(s, i, p).error.empty();
      }
      const PointSummary& rc = get(s, i, Protocol::Rcfd);
      double best_other = 0;
      Protocol best = Protocol::Back2f;
      for (Protocol p : baselines) {
        if (get(s, i, p).gamma.mean >= best_other) {
          best_other = get(s, i, p).gamma.mean;
          best = p;
        }
      }
      values += (values.empty() ? "" : "; ") + label(s, i) + " gamma rcfd " + f4(rc.gamma.mean) +
                " vs " + analytic::to_string(best) + " " + f4(best_other);
      if (!(rc.gamma.mean > best_other)) {
        gamma.pass = false;
        gamma.misses.push_back(label(s, i));
      }
      if (s.figure == Figure::SimGridCaseII) {
        const double freq = std::max(rc.delta.mean, get(s, i, Protocol::Back2f).delta.mean);
        double time = 1e300;
        for (Protocol p : time_domain) {
          time = std::min(time, get(s, i, p).delta.mean);
        }
        values += ", delta rcfd " + f4(rc.delta.mean) + " back2f " +
                  f4(get(s, i, Protocol::Back2f).delta.mean) + " best time-domain " + f4(time);
        if (!(freq < time)) {
          delay.pass = false;
          delay.misses.push_back(label(s, i));
        }
      }
      if (s.figure == Figure::SimRandom) {
        double other = 0;
        for (Protocol p : baselines) {
          other = std::max(other, get(s, i, p).jain.mean);
        }
        values += ", jain rcfd " + f4(rc.jain.mean) + " vs best other " + f4(other);
        if (!(rc.jain.mean > other)) {
          fairness.pass = false;
          fairness.misses.push_back(label(s, i));
        }
      }
    }
  }
  auto verdict = [](const char* what, const Ordering& ord) {
    std::string out = std::string(what) + (ord.pass ? " holds" : " fails at");
    for (std::size_t i = 0; i < ord.misses.size(); ++i) {
      out += (i == 0 ? " " : ", ") + ord.misses[i];
    }
    return out;
  };
  const bool fast = r.seconds < 1800;
  r.pass = gamma.pass && delay.pass && fairness.pass && fast && !errors;
  r.detail = verdict("gamma(rcfd) highest", gamma) + "; " +
             verdict("case II delta(rcfd, back2f) below time-domain", delay) + "; " +
             verdict("random jain(rcfd) highest", fairness) + "; " +
             std::to_string(total_runs) + " runs in " + g3(r.seconds) + " s (< 1800 s)" +
             (errors ? "; some runs failed" : "") + "; " + kFidelityNote;
  if (o.on_note) {
    o.on_note("criterion 8 means: " + values);
  }
  return r;
}

CriterionResult determinism(const AcceptanceOptions& o)
{
  CriterionResult r{9, "byte-identical output on repeated runs", false, "", 0};
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  cfg.repetitions = 2;
  cfg.duration_s = 2;
  cfg.traffic.t_s_max = 1;
  cfg.seed = o.seed;
  cfg.grid = 3;
  const std::string sim_a = simulate(cfg, 1).data_text();
  const std::string sim_b = simulate(cfg, std::max(2, o.jobs)).data_text();

  ExperimentConfig rnd = cfg;
  rnd.nodes_range = {10, 20, 10};
  const std::string sweep_a = sweep(Figure::SimRandom, rnd, 1).data_text();
  const std::string sweep_b = sweep(Figure::SimRandom, rnd, std::max(2, o.jobs)).data_text();

  ExperimentConfig ana = cfg;
  ana.length_range = {100, 2300, 200};
  const std::string len_a = sweep(Figure::ThroughputVsLength, ana, 1).data_text();
  const std::string len_b = sweep(Figure::ThroughputVsLength, ana, std::max(2, o.jobs)).data_text();

  r.seconds = seconds_since(t0);
  const bool s1 = sim_a == sim_b;
  const bool s2 = sweep_a == sweep_b;
  const bool s3 = len_a == len_b;
  r.pass = s1 && s2 && s3;
  r.detail = std::string("simulate: ") + (s1 ? "identical" : "differs") +
             ", sweep sim-random: " + (s2 ? "identical" : "differs") +
             ", sweep throughput-vs-length: " + (s3 ? "identical" : "differs") +
             " (each run serially and with a worker pool)";
  return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o)
{
  std::vector<CriterionResult> out;
  auto wanted = [&](int id) {
    return o.only.empty() || std::find(o.only.begin(), o.only.end(), id) != o.only.end();
  };
  auto add = [&](CriterionResult r) {
    if (o.on_result) {
      o.on_result(r);
    }
    out.push_back(std::move(r));
  };
  auto guarded = [&](int id, const char* title, auto fn) {
    if (!wanted(id)) {
      return;
    }
    try {
      add(fn());
    } catch (const std::exception& e) {
      add({id, title, false, std::string("threw: ") + e.what(), 0});
    }
  };
  guarded(1, "RCFD analysis table", [] { return rcfd_table(); });
  guarded(2, "BACK2F analysis table", [] { return back2f_table(); });
  guarded(3, "FD MAC analysis table", [] { return fd_table(); });
  guarded(4, "chain factors", [] { return factor_oracles(); });
  guarded(5, "chain against simulation", [&] { return chain_vs_monte_carlo(o); });
  guarded(6, "no-collision property", [&] { return no_collision(o); });
  guarded(7, "worked scenarios", [] { return worked_scenarios(); });
  guarded(8, "comparative orderings", [&] { return comparative(o); });
  guarded(9, "determinism", [&] { return determinism(o); });
  return out;
}

std::string format_result(const CriterionResult& r)
{
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.title << ": " << r.detail << " ("
     << g3(r.seconds) << " s)";
  return os.str();
}

} // namespace rcfd::exp
