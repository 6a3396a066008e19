#include "rcfd/exp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "rcfd/analytic/back2f_chain.hpp"
#include "rcfd/common/rng.hpp"
#include "rcfd/exp/pool.hpp"

namespace rcfd::exp {

using analytic::Protocol;

const char* const kFidelityNote =
  "exact ns3 curve values are not reproducible: this engine uses a range-cutoff channel with "
  "Bernoulli erasures, so only the qualitative orderings carry over";

namespace {

constexpr std::uint64_t kTopologyStream = 0x746f706f6c6f6779ULL;

struct FigureInfo {
  Figure figure;
  const char* name;
};

constexpr FigureInfo kFigures[] = {
  {Figure::ThroughputVsN, "throughput-vs-n"},
  {Figure::ThroughputVsLength, "throughput-vs-length"},
  {Figure::SimGridCaseI, "sim-grid-caseI"},
  {Figure::SimGridCaseII, "sim-grid-caseII"},
  {Figure::SimRandom, "sim-random"},
};

bool analytic_figure(Figure f) { return f == Figure::ThroughputVsN || f == Figure::ThroughputVsLength; }

std::string what_of(const std::exception_ptr& e)
{
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& x) {
    return x.what();
  } catch (...) {
    return "unknown failure";
  }
}

std::string u64(std::uint64_t x) { return std::to_string(x); }

std::vector<std::string> config_meta(const ExperimentConfig& cfg)
{
  std::vector<std::string> meta;
  for (const auto& [k, v] : cfg.echo()) {
    meta.push_back("config " + k + " = " + v);
  }
  return meta;
}

std::vector<std::string> seed_meta(const ExperimentConfig& cfg)
{
  std::string line = "seeds";
  for (int k = 0; k < cfg.repetitions; ++k) {
    line += (k == 0 ? " " : ",") + u64(repetition_seed(cfg.seed, k));
  }
  return {"seed base " + u64(cfg.seed) + "; repetition k runs with the k-th seed below", line};
}

analytic::ThroughputReport evaluate(const ExperimentConfig& cfg, Protocol p, int n, int length,
                                    double rate, double cached_p_s)
{
  const analytic::TdSpec td = cfg.analytic_td();
  switch (p) {
  case Protocol::FdMac:
    return analytic::eta_fd(n, cfg.timings, length, rate, td, cfg.fd_model);
  case Protocol::Back2f:
    return analytic::eta_back2f(n, cfg.timings, length, rate, td, cached_p_s);
  default:
    return analytic::evaluate(p, n, cfg.timings, length, rate, td);
  }
}

std::vector<std::string> report_cells(const analytic::ThroughputReport& r)
{
  return {fmt6(r.eta), r.p_s_undefined ? std::string("") : fmt6(r.p_s), fmt6(r.p_tr)};
}

CsvTable analytic_sweep(Figure f, const ExperimentConfig& cfg, int jobs, const Progress& progress)
{
  struct Row {
    Protocol protocol;
    int n;
    int length;
  };
  std::vector<Row> rows;
  for (Protocol p : cfg.protocols) {
    if (f == Figure::ThroughputVsN) {
      for (int n : cfg.n_range.values()) {
        rows.push_back({p, n, cfg.length_bytes});
      }
    } else {
      for (int l : cfg.length_range.values()) {
        rows.push_back({p, cfg.n, l});
      }
    }
  }
  // BACK2F success probability depends on N only; solve each N once.
  std::map<int, double> back2f_p_s;
  std::map<int, std::string> back2f_error;
  if (std::find(cfg.protocols.begin(), cfg.protocols.end(), Protocol::Back2f) !=
      cfg.protocols.end()) {
    std::vector<int> ns = f == Figure::ThroughputVsN ? cfg.n_range.values() : std::vector<int>{cfg.n};
    std::vector<double> ps(ns.size(), -1);
    const auto errors = run_indexed(ns.size(), jobs, [&](std::size_t i) {
      ps[i] = analytic::back2f_stationary(ns[i], cfg.timings.subcarriers).p_s;
    });
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (errors[i]) {
        back2f_error[ns[i]] = what_of(errors[i]);
      } else {
        back2f_p_s[ns[i]] = ps[i];
      }
    }
  }

  CsvTable t;
  t.meta.push_back(std::string("figure ") + to_string(f));
  const auto cm = config_meta(cfg);
  t.meta.insert(t.meta.end(), cm.begin(), cm.end());
  t.header = {"figure", "protocol", "n", "length", "rate", "t_d_mode", "t_d_ns", "eta", "p_s",
              "p_tr", "error"};
  std::size_t done = 0;
  for (const Row& r : rows) {
    std::vector<std::string> cells = {to_string(f), analytic::to_string(r.protocol),
                                      std::to_string(r.n), std::to_string(r.length),
                                      fmt6(cfg.rate_mbps),
                                      analytic::to_string(cfg.analytic_td().mode)};
    try {
      if (r.protocol == Protocol::Back2f && back2f_error.count(r.n) > 0) {
        throw std::runtime_error(back2f_error.at(r.n));
      }
      const double cached = r.protocol == Protocol::Back2f ? back2f_p_s.at(r.n) : -1;
      const auto rep = evaluate(cfg, r.protocol, r.n, r.length, cfg.rate_mbps, cached);
      cells.push_back(u64(static_cast<std::uint64_t>(std::llround(rep.t_d * 1000))));
      const auto rc = report_cells(rep);
      cells.insert(cells.end(), rc.begin(), rc.end());
      cells.push_back("");
    } catch (const std::exception& e) {
      cells.resize(6);
      cells.insert(cells.end(), {"", "", "", "", e.what()});
    }
    t.rows.push_back(std::move(cells));
    if (progress) {
      progress(++done, rows.size());
    }
  }
  return t;
}

std::vector<std::string> summary_cells(const PointSummary& s)
{
  return {std::to_string(s.runs),
          fmt6(s.gamma.mean),
          fmt6(s.gamma.sd),
          fmt6(s.delta.mean),
          fmt6(s.delta.sd),
          fmt6(s.jain.mean),
          fmt6(s.jain.sd),
          fmt6(s.delay_delivered.mean),
          fmt6(s.utilization.mean),
          fmt6(s.data_frames),
          fmt6(s.data_collisions),
          fmt6(s.secondary_collisions),
          fmt6(s.delivered),
          fmt6(s.discarded_retry),
          fmt6(s.discarded_overflow),
          fmt6(s.discarded_age),
          s.error};
}

CsvTable sim_sweep(Figure f, const ExperimentConfig& cfg, int jobs, const Progress& progress)
{
  const std::vector<SimPoint> points = figure_points(f, cfg);
  for (const SimPoint& p : points) {
    check_capacity(cfg, point_nodes(p));
  }
  const auto runs = run_campaign(cfg, points, jobs, progress);
  const auto sums = summarize_campaign(cfg, points, runs);

  CsvTable t;
  t.meta.push_back(std::string("figure ") + to_string(f));
  t.meta.push_back(std::string("note ") + kFidelityNote);
  const auto cm = config_meta(cfg);
  t.meta.insert(t.meta.end(), cm.begin(), cm.end());
  const auto sm = seed_meta(cfg);
  t.meta.insert(t.meta.end(), sm.begin(), sm.end());
  t.header = {"figure", "protocol", "topology", "size", "nodes", "length", "rate", "loss_p",
              "runs", "gamma", "gamma_sd", "delta_s", "delta_sd", "jain", "jain_sd",
              "delay_delivered_s", "utilization", "data_frames", "data_collisions",
              "secondary_collisions", "delivered", "discarded_retry", "discarded_overflow",
              "discarded_age", "error"};
  for (const PointSummary& s : sums) {
    const SimPoint& p = points[s.point];
    std::vector<std::string> cells = {to_string(f),
                                      analytic::to_string(s.protocol),
                                      to_string(p.kind),
                                      std::to_string(p.size),
                                      std::to_string(point_nodes(p)),
                                      std::to_string(p.length_bytes),
                                      fmt6(p.rate_mbps),
                                      fmt6(p.loss_p)};
    const auto sc = summary_cells(s);
    cells.insert(cells.end(), sc.begin(), sc.end());
    t.rows.push_back(std::move(cells));
  }
  return t;
}

} // namespace

const char* to_string(Figure f)
{
  for (const FigureInfo& i : kFigures) {
    if (i.figure == f) {
      return i.name;
    }
  }
  return "?";
}

Figure parse_figure(const std::string& name)
{
  for (const FigureInfo& i : kFigures) {
    if (name == i.name) {
      return i.figure;
    }
  }
  throw std::invalid_argument("unknown figure '" + name + "'");
}

const std::vector<Figure>& all_figures()
{
  static const std::vector<Figure> all = {Figure::ThroughputVsN, Figure::ThroughputVsLength,
                                          Figure::SimGridCaseI, Figure::SimGridCaseII,
                                          Figure::SimRandom};
  return all;
}

int point_nodes(const SimPoint& p) { return p.kind == TopologyKind::Grid ? p.size * p.size : p.size; }

std::uint64_t repetition_seed(std::uint64_t base, int rep)
{
  return derive_seed(base, static_cast<std::uint64_t>(rep));
}

sim::Topology build_topology(const ExperimentConfig& cfg, const SimPoint& p, std::uint64_t seed)
{
  if (p.kind == TopologyKind::Grid) {
    return sim::build_grid(p.size, cfg.d);
  }
  Rng rng(derive_seed(seed, kTopologyStream));
  return sim::build_random(static_cast<std::size_t>(p.size), cfg.l, p.r, rng);
}

sim::SimConfig make_sim_config(const ExperimentConfig& cfg, const SimPoint& p, Protocol protocol,
                               std::uint64_t seed)
{
  sim::SimConfig c;
  c.protocol = protocol;
  c.timings = cfg.timings;
  c.td = cfg.sim_td();
  c.length_bytes = p.length_bytes;
  c.rate_mbps = p.rate_mbps;
  c.traffic = cfg.traffic;
  c.duration_s = cfg.duration_s;
  c.loss_p = p.loss_p;
  c.queue_capacity = static_cast<std::size_t>(cfg.queue_capacity);
  c.max_age_s = cfg.max_age_s;
  c.max_attempts = cfg.max_attempts;
  c.pairing = cfg.pairing;
  c.modulation_order = cfg.modulation_order;
  c.seed = seed;
  return c;
}

std::vector<SimRun> run_campaign(const ExperimentConfig& cfg, const std::vector<SimPoint>& points,
                                 int jobs, const Progress& progress)
{
  std::vector<SimRun> runs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (Protocol p : cfg.protocols) {
      for (int k = 0; k < cfg.repetitions; ++k) {
        SimRun r;
        r.point = i;
        r.protocol = p;
        r.rep = k;
        r.seed = repetition_seed(cfg.seed, k);
        runs.push_back(std::move(r));
      }
    }
  }
  std::mutex mu;
  std::size_t done = 0;
  const auto errors = run_indexed(runs.size(), jobs, [&](std::size_t i) {
    SimRun& r = runs[i];
    const SimPoint& pt = points[r.point];
    try {
      r.metrics = sim::simulate(build_topology(cfg, pt, r.seed),
                                make_sim_config(cfg, pt, r.protocol, r.seed));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      ++done;
      if (progress) {
        progress(done, runs.size());
      }
      throw;
    }
    std::lock_guard<std::mutex> lock(mu);
    ++done;
    if (progress) {
      progress(done, runs.size());
    }
  });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (errors[i]) {
      runs[i].error = what_of(errors[i]);
    }
  }
  return runs;
}

Summary summarize(const std::vector<double>& xs)
{
  Summary s;
  if (xs.empty()) {
    return s;
  }
  double sum = 0;
  for (double x : xs) {
    sum += x;
  }
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0;
    for (double x : xs) {
      sq += (x - s.mean) * (x - s.mean);
    }
    s.sd = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::vector<PointSummary> summarize_campaign(const ExperimentConfig& cfg,
                                             const std::vector<SimPoint>& points,
                                             const std::vector<SimRun>& runs)
{
  std::vector<PointSummary> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (Protocol p : cfg.protocols) {
      PointSummary s;
      s.point = i;
      s.protocol = p;
      std::vector<double> gamma, delta, jain, dd, util;
      for (const SimRun& r : runs) {
        if (r.point != i || r.protocol != p) {
          continue;
        }
        if (!r.error.empty()) {
          s.error = "repetition " + std::to_string(r.rep) + ": " + r.error;
          continue;
        }
        const sim::SimMetrics& m = r.metrics;
        gamma.push_back(m.gamma);
        delta.push_back(m.delta_s);
        jain.push_back(m.jain);
        dd.push_back(m.delay_delivered_s);
        util.push_back(m.utilization);
        s.data_frames += static_cast<double>(m.data_frames);
        s.data_collisions += static_cast<double>(m.data_collisions);
        s.secondary_collisions += static_cast<double>(m.secondary_collisions);
        s.delivered += static_cast<double>(m.delivered);
        s.discarded_retry += static_cast<double>(m.discarded_retry);
        s.discarded_overflow += static_cast<double>(m.discarded_overflow);
        s.discarded_age += static_cast<double>(m.discarded_age);
      }
      s.runs = static_cast<int>(gamma.size());
      s.gamma = summarize(gamma);
      s.delta = summarize(delta);
      s.jain = summarize(jain);
      s.delay_delivered = summarize(dd);
      s.utilization = summarize(util);
      if (s.runs > 0) {
        const double k = s.runs;
        for (double* v : {&s.data_frames, &s.data_collisions, &s.secondary_collisions,
                          &s.delivered, &s.discarded_retry, &s.discarded_overflow,
                          &s.discarded_age}) {
          *v /= k;
        }
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<SimPoint> figure_points(Figure f, const ExperimentConfig& cfg)
{
  std::vector<SimPoint> out;
  switch (f) {
  case Figure::SimGridCaseI:
  case Figure::SimGridCaseII:
    for (int g : cfg.grid_range.values()) {
      SimPoint p;
      p.kind = TopologyKind::Grid;
      p.size = g;
      p.length_bytes = f == Figure::SimGridCaseI ? 1000 : 200;
      p.rate_mbps = f == Figure::SimGridCaseI ? 6 : 54;
      p.r = cfg.d * std::sqrt(2.0);
      p.loss_p = cfg.effective_loss_p(TopologyKind::Grid);
      out.push_back(p);
    }
    break;
  case Figure::SimRandom:
    for (int n : cfg.nodes_range.values()) {
      SimPoint p;
      p.kind = TopologyKind::Random;
      p.size = n;
      p.length_bytes = 500;
      p.rate_mbps = 18;
      p.r = cfg.r;
      p.loss_p = cfg.effective_loss_p(TopologyKind::Random);
      out.push_back(p);
    }
    break;
  default:
    break;
  }
  return out;
}

CsvTable analytic_table(const ExperimentConfig& cfg)
{
  CsvTable t;
  t.meta.push_back("analysis table");
  const auto cm = config_meta(cfg);
  t.meta.insert(t.meta.end(), cm.begin(), cm.end());
  t.header = {"protocol", "N", "L", "R", "t_d_mode", "eta", "P_s", "P_tr", "runtime_ms"};
  const Protocol order[] = {Protocol::FdMac, Protocol::Back2f, Protocol::Rcfd, Protocol::Dcf,
                            Protocol::DcfRtsCts};
  for (Protocol p : order) {
    if (std::find(cfg.protocols.begin(), cfg.protocols.end(), p) == cfg.protocols.end()) {
      continue;
    }
    for (int n : {2, 10, 20, 50}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = evaluate(cfg, p, n, cfg.length_bytes, cfg.rate_mbps, -1);
      const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::vector<std::string> row = {analytic::to_string(p), std::to_string(n),
                                      std::to_string(cfg.length_bytes), fmt6(cfg.rate_mbps),
                                      analytic::to_string(cfg.analytic_td().mode)};
      const auto rc = report_cells(r);
      row.insert(row.end(), rc.begin(), rc.end());
      row.push_back(fmt6(ms));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

CsvTable sweep(Figure f, const ExperimentConfig& cfg, int jobs, const Progress& progress)
{
  if (analytic_figure(f)) {
    return analytic_sweep(f, cfg, jobs, progress);
  }
  return sim_sweep(f, cfg, jobs, progress);
}

CsvTable simulate(const ExperimentConfig& cfg, int jobs, const Progress& progress)
{
  SimPoint p;
  p.kind = cfg.topology;
  p.size = cfg.topology == TopologyKind::Grid ? cfg.grid : cfg.n;
  p.length_bytes = cfg.length_bytes;
  p.rate_mbps = cfg.rate_mbps;
  p.r = cfg.topology == TopologyKind::Grid ? cfg.d * std::sqrt(2.0) : cfg.r;
  p.loss_p = cfg.effective_loss_p(cfg.topology);
  check_capacity(cfg, point_nodes(p));
  const std::vector<SimPoint> points = {p};
  const auto runs = run_campaign(cfg, points, jobs, progress);

  CsvTable t;
  t.meta.push_back("simulate");
  t.meta.push_back(std::string("note ") + kFidelityNote);
  const auto cm = config_meta(cfg);
  t.meta.insert(t.meta.end(), cm.begin(), cm.end());
  const auto sm = seed_meta(cfg);
  t.meta.insert(t.meta.end(), sm.begin(), sm.end());
  t.header = {"protocol", "topology", "size", "nodes", "rep", "seed", "gamma", "utilization",
              "delta_s", "delay_delivered_s", "max_delay_s", "jain", "offered_bps", "generated",
              "delivered", "discarded_retry", "discarded_overflow", "discarded_age",
              "data_frames", "data_collisions", "secondary_collisions", "erasures",
              "contentions", "error"};
  for (const SimRun& r : runs) {
    const sim::SimMetrics& m = r.metrics;
    std::vector<std::string> row = {analytic::to_string(r.protocol), to_string(p.kind),
                                    std::to_string(p.size), std::to_string(point_nodes(p)),
                                    std::to_string(r.rep), u64(r.seed)};
    if (r.error.empty()) {
      row.insert(row.end(),
                 {fmt6(m.gamma), fmt6(m.utilization), fmt6(m.delta_s), fmt6(m.delay_delivered_s),
                  fmt6(m.max_delay_s), fmt6(m.jain), fmt6(m.offered_bps), u64(m.generated),
                  u64(m.delivered), u64(m.discarded_retry), u64(m.discarded_overflow),
                  u64(m.discarded_age), u64(m.data_frames), u64(m.data_collisions),
                  u64(m.secondary_collisions), u64(m.erasures), u64(m.contentions), ""});
    } else {
      row.resize(row.size() + 17);
      row.push_back(r.error);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

} // namespace rcfd::exp
