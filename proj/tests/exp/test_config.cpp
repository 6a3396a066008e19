#include "doctest.h"
#include "rcfd/exp/config.hpp"

using namespace rcfd;
using namespace rcfd::exp;

namespace {

ConfigErrors errors_of(const std::string& text, const std::vector<std::string>& flags = {})
{
  try {
    parse_config(text, "run.cfg", flags);
  } catch (const ConfigErrors& e) {
    return e;
  }
  FAIL("expected configuration errors");
  return ConfigErrors({});
}

} // namespace

TEST_CASE("an empty file yields the simulation parameter table")
{
  const ExperimentConfig c = parse_config("", "run.cfg", {});
  CHECK(c.traffic.lambda_s == 0.5);
  CHECK(c.traffic.t_s_max == 5);
  CHECK(c.traffic.t_on == 0.1);
  CHECK(c.traffic.t_off == 0.1);
  CHECK(c.traffic.rate_bps == 1e6);
  CHECK(c.duration_s == 20);
  CHECK(c.repetitions == 10);
  CHECK(c.d == 100);
  CHECK(c.l == 500);
  CHECK(c.r == 60);
  CHECK(c.queue_capacity == 1000);
  CHECK(c.max_age_s == 1);
  CHECK(c.max_attempts == 7);
  CHECK(c.timings.t_sifs == 10);
  CHECK(c.timings.t_difs == 28);
  CHECK(c.timings.t_slot == 9);
  CHECK(c.timings.t_ack == 50);
  CHECK(c.timings.t_rts == 58);
  CHECK(c.timings.t_cts == 50);
  CHECK(c.timings.t_p == 1);
  CHECK(c.timings.w_initial == 16);
  CHECK(c.timings.stage_cap == 6);
  CHECK(c.timings.subcarriers == 52);
  CHECK(c.protocols.size() == 5);
  CHECK(c.analytic_td().mode == analytic::TdMode::Calibrated);
  CHECK(c.sim_td().mode == analytic::TdMode::OfdmExact);
  CHECK(c.effective_loss_p(TopologyKind::Grid) == 0);
  CHECK(c.effective_loss_p(TopologyKind::Random) == doctest::Approx(0.1));
}

TEST_CASE("values, comments and blank lines")
{
  const ExperimentConfig c = parse_config("# header\n\nn = 20   # trailing\nprotocols = rcfd, dcf\n"
                                          "length=200\nrate = 54\nsaturated = true\n"
                                          "grid_range = 3:6\nt_d_mode = ofdm-exact\n",
                                          "run.cfg", {});
  CHECK(c.n == 20);
  CHECK(c.protocols == std::vector<analytic::Protocol>{analytic::Protocol::Rcfd,
                                                       analytic::Protocol::Dcf});
  CHECK(c.length_bytes == 200);
  CHECK(c.rate_mbps == 54);
  CHECK(c.traffic.saturated);
  CHECK(c.grid_range == IntRange{3, 6, 1});
  CHECK(c.grid_range.values() == std::vector<int>{3, 4, 5, 6});
  CHECK(c.analytic_td().mode == analytic::TdMode::OfdmExact);
}

TEST_CASE("command-line overrides win over the file")
{
  const ExperimentConfig c = parse_config("n = 20\nseed = 4\n", "run.cfg", {"n=30", "seed = 9"});
  CHECK(c.n == 30);
  CHECK(c.seed == 9);
}

TEST_CASE("RCFD beyond the modulation capacity fails before any run")
{
  const ConfigErrors e = errors_of("", {"n=60", "subcarriers=52", "modulation_order=1",
                                        "protocols=rcfd"});
  REQUIRE(e.issues().size() == 1);
  CHECK(e.issues()[0].code == ExpErrc::CapacityExceeded);

  // Without RCFD, or with the order picked automatically, the count is fine.
  CHECK_NOTHROW(parse_config("", "run.cfg", {"n=60", "modulation_order=1", "protocols=dcf"}));
  CHECK_NOTHROW(parse_config("", "run.cfg", {"n=60", "protocols=rcfd"}));
  // 26 nodes still fit one symbol value per subcarrier.
  CHECK_NOTHROW(parse_config("", "run.cfg", {"n=26", "modulation_order=1", "protocols=rcfd"}));
}

TEST_CASE("a duplicate key names both lines")
{
  const ConfigErrors e = errors_of("n = 4\nlength = 100\nn = 5\n");
  REQUIRE(e.issues().size() == 1);
  const ConfigIssue& i = e.issues()[0];
  CHECK(i.code == ExpErrc::DuplicateKey);
  CHECK(i.key == "n");
  CHECK(i.message.find("run.cfg:1") != std::string::npos);
  CHECK(i.message.find("run.cfg:3") != std::string::npos);

  const ConfigErrors f = errors_of("", {"n=4", "n=5"});
  CHECK(f.has(ExpErrc::DuplicateKey));
}

TEST_CASE("every problem is reported with its line")
{
  const ConfigErrors e = errors_of("foo = 1\nrate = 7\nno equals sign\nrepetitions = -2\n"
                                   "grid_range = 6:3\nprotocols = rcfd,aloha\n");
  REQUIRE(e.issues().size() == 6);
  CHECK(e.issues()[0].code == ExpErrc::Syntax);
  CHECK(e.issues()[0].where == "run.cfg:3");
  CHECK(e.issues()[1].code == ExpErrc::UnknownKey);
  CHECK(e.issues()[1].where == "run.cfg:1");
  CHECK(e.issues()[2].code == ExpErrc::InvalidValue);
  CHECK(e.issues()[2].where == "run.cfg:2");
  CHECK(e.issues()[3].where == "run.cfg:4");
  CHECK(e.issues()[4].where == "run.cfg:5");
  CHECK(e.issues()[5].where == "run.cfg:6");
  CHECK(std::string(e.what()).find("UnknownKey") != std::string::npos);
}

TEST_CASE("values out of range")
{
  CHECK(errors_of("loss_p = 1\n").has(ExpErrc::InvalidValue));
  CHECK(errors_of("loss_p = -0.1\n").has(ExpErrc::InvalidValue));
  CHECK(errors_of("duration = 0\n").has(ExpErrc::InvalidValue));
  CHECK(errors_of("t_on = 1x\n").has(ExpErrc::InvalidValue));
  CHECK(errors_of("saturated = maybe\n").has(ExpErrc::InvalidValue));
  CHECK(errors_of("t_d_mode = override\n").has(ExpErrc::InvalidValue));
  CHECK(errors_of("subcarriers = 51\n").has(ExpErrc::InvalidValue));
  CHECK(errors_of("protocols = rcfd,rcfd\n").has(ExpErrc::InvalidValue));
  CHECK_NOTHROW(parse_config("t_d_mode = override\nt_d_us = 1400\n", "run.cfg", {}));
}

TEST_CASE("the echoed configuration reads back to itself")
{
  const ExperimentConfig c =
    parse_config("n = 12\nloss_p = 0.05\nnodes_range = 10:30:10\npairing = head-only\n"
                 "fd_success_model = single-winner\nt_d_mode = calibrated\n",
                 "run.cfg", {});
  std::string text;
  for (const auto& [k, v] : c.echo()) {
    text += k + " = " + v + "\n";
  }
  const ExperimentConfig back = parse_config(text, "echo", {});
  CHECK(back.echo() == c.echo());
  CHECK(back.pairing == mac::FdPairingRule::HeadOnly);
  CHECK(back.loss_p == 0.05);
}
