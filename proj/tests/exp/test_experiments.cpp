#include <algorithm>
#include <map>

#include "doctest.h"
#include "rcfd/exp/experiments.hpp"

using namespace rcfd;
using namespace rcfd::exp;

namespace {

int column(const CsvTable& t, const std::string& name)
{
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  REQUIRE(it != t.header.end());
  return static_cast<int>(it - t.header.begin());
}

ExperimentConfig small(std::vector<std::string> flags)
{
  flags.push_back("duration=1");
  flags.push_back("t_s_max=0.5");
  flags.push_back("repetitions=2");
  return parse_config("", "test", flags);
}

} // namespace

TEST_CASE("figure names")
{
  for (Figure f : all_figures()) {
    CHECK(parse_figure(to_string(f)) == f);
  }
  CHECK_THROWS_AS(parse_figure("fig-9"), std::invalid_argument);
}

TEST_CASE("figure settings fix payload and rate")
{
  const ExperimentConfig cfg = parse_config("", "test", {"grid_range=3:5", "nodes_range=10:20:10"});
  const auto one = figure_points(Figure::SimGridCaseI, cfg);
  REQUIRE(one.size() == 3);
  CHECK(one[0].length_bytes == 1000);
  CHECK(one[0].rate_mbps == 6);
  CHECK(one[2].size == 5);
  CHECK(point_nodes(one[2]) == 25);
  CHECK(one[0].loss_p == 0);

  const auto two = figure_points(Figure::SimGridCaseII, cfg);
  CHECK(two[0].length_bytes == 200);
  CHECK(two[0].rate_mbps == 54);

  const auto rnd = figure_points(Figure::SimRandom, cfg);
  REQUIRE(rnd.size() == 2);
  CHECK(rnd[1].kind == TopologyKind::Random);
  CHECK(point_nodes(rnd[1]) == 20);
  CHECK(rnd[0].length_bytes == 500);
  CHECK(rnd[0].rate_mbps == 18);
  CHECK(rnd[0].loss_p == doctest::Approx(0.1));
}

TEST_CASE("repetition seeds are stable and distinct")
{
  CHECK(repetition_seed(1, 0) == repetition_seed(1, 0));
  CHECK(repetition_seed(1, 0) != repetition_seed(1, 1));
  CHECK(repetition_seed(1, 0) != repetition_seed(2, 0));
}

TEST_CASE("random placement depends only on the seed")
{
  const ExperimentConfig cfg = parse_config("", "test", {});
  const SimPoint p{TopologyKind::Random, 20, 500, 18, 60, 0.1};
  const sim::Topology a = build_topology(cfg, p, 7);
  const sim::Topology b = build_topology(cfg, p, 7);
  const sim::Topology c = build_topology(cfg, p, 8);
  REQUIRE(a.size() == 20);
  bool same = true;
  bool differs = false;
  for (int i = 0; i < 20; ++i) {
    same = same && a.positions[i].x == b.positions[i].x && a.positions[i].y == b.positions[i].y;
    differs = differs || a.positions[i].x != c.positions[i].x;
    CHECK(a.positions[i].x >= 0);
    CHECK(a.positions[i].x <= 500);
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("analytic table reproduces the tabulated throughputs")
{
  const CsvTable t = analytic_table(parse_config("", "test", {"protocols=rcfd,fdmac"}));
  const int proto = column(t, "protocol");
  const int n = column(t, "N");
  const int eta = column(t, "eta");
  std::map<std::pair<std::string, std::string>, double> got;
  for (const auto& row : t.rows) {
    got[{row[proto], row[n]}] = std::stod(row[eta]);
  }
  REQUIRE(got.size() == 8);
  CHECK(got[{"rcfd", "2"}] == doctest::Approx(1.857).epsilon(0.001));
  CHECK(got[{"rcfd", "50"}] == doctest::Approx(0.947).epsilon(0.002));
  CHECK(got[{"fdmac", "2"}] == doctest::Approx(1.69).epsilon(0.02));
  CHECK(got[{"fdmac", "50"}] == doctest::Approx(0.848).epsilon(0.02));
  CHECK(t.meta.size() > 3);
}

TEST_CASE("short packets cost the RTS/CTS handshakes most")
{
  const CsvTable t = sweep(Figure::ThroughputVsLength,
                           parse_config("", "test", {"length_range=100:100", "n=10",
                                                     "protocols=rcfd,fdmac,dcf,dcf-rtscts"}),
                           1);
  const int proto = column(t, "protocol");
  const int eta = column(t, "eta");
  const int err = column(t, "error");
  std::map<std::string, double> got;
  for (const auto& row : t.rows) {
    CHECK(row[err].empty());
    got[row[proto]] = std::stod(row[eta]);
  }
  REQUIRE(got.size() == 4);
  const double handshake = std::max(got["fdmac"], got["dcf-rtscts"]);
  CHECK(handshake < got["dcf"]);
  CHECK(handshake < got["rcfd"]);
}

TEST_CASE("sweeps over RCFD capacity fail before running")
{
  const ExperimentConfig cfg =
    small({"grid_range=3:6", "modulation_order=1", "protocols=rcfd"});
  try {
    sweep(Figure::SimGridCaseI, cfg, 1);
    FAIL("expected CapacityExceeded");
  } catch (const ConfigErrors& e) {
    CHECK(e.has(ExpErrc::CapacityExceeded));
  }
}

TEST_CASE("simulation output does not depend on the job count")
{
  const ExperimentConfig cfg = small({"protocols=rcfd,dcf", "grid=3"});
  const CsvTable a = simulate(cfg, 1);
  const CsvTable b = simulate(cfg, 3);
  CHECK(a.rows.size() == 4);
  CHECK(a.data_text() == b.data_text());
  const CsvTable c = simulate(small({"protocols=rcfd,dcf", "grid=3", "seed=2"}), 1);
  CHECK(a.data_text() != c.data_text());

  const ExperimentConfig rnd = small({"protocols=rcfd", "nodes_range=10:20:10"});
  CHECK(sweep(Figure::SimRandom, rnd, 1).data_text() ==
        sweep(Figure::SimRandom, rnd, 2).data_text());
}

TEST_CASE("a failed run is reported in its row")
{
  const ExperimentConfig cfg = small({"protocols=dcf"});
  const std::vector<SimPoint> points{SimPoint{}};
  std::vector<SimRun> runs(2);
  runs[0].protocol = analytic::Protocol::Dcf;
  runs[0].metrics.gamma = 0.5;
  runs[1].protocol = analytic::Protocol::Dcf;
  runs[1].rep = 1;
  runs[1].error = "boom";
  const auto s = summarize_campaign(cfg, points, runs);
  REQUIRE(s.size() == 1);
  CHECK(s[0].runs == 1);
  CHECK(s[0].gamma.mean == 0.5);
  CHECK(s[0].error.find("boom") != std::string::npos);
}

TEST_CASE("sample standard deviation")
{
  const Summary s = summarize({1, 2, 3, 4});
  CHECK(s.mean == 2.5);
  CHECK(s.sd == doctest::Approx(1.2909944));
  CHECK(summarize({3}).sd == 0);
}
