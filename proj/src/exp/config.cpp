#include "rcfd/exp/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>

namespace rcfd::exp {

namespace {

using analytic::Protocol;

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void invalid(const std::string& what) { throw std::invalid_argument(what); }

long long to_int(const std::string& v)
{
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    invalid("expected an integer, got '" + v + "'");
  }
  return x;
}

int to_int_in(const std::string& v, long long lo, long long hi)
{
  const long long x = to_int(v);
  if (x < lo || x > hi) {
    invalid("value " + v + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(x);
}

double to_double(const std::string& v)
{
  double x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    invalid("expected a number, got '" + v + "'");
  }
  return x;
}

double positive(const std::string& v)
{
  const double x = to_double(v);
  if (!(x > 0)) {
    invalid("value must be positive, got " + v);
  }
  return x;
}

double non_negative(const std::string& v)
{
  const double x = to_double(v);
  if (!(x >= 0)) {
    invalid("value must be non-negative, got " + v);
  }
  return x;
}

bool to_bool(const std::string& v)
{
  if (v == "true" || v == "1" || v == "yes") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no") {
    return false;
  }
  invalid("expected true or false, got '" + v + "'");
}

std::string num(double x)
{
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

IntRange to_range(const std::string& v)
{
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ':')) {
    parts.push_back(trim(part));
  }
  if (parts.size() < 1 || parts.size() > 3) {
    invalid("expected first:last[:step], got '" + v + "'");
  }
  IntRange r;
  r.first = to_int_in(parts[0], 1, 1000000);
  r.last = parts.size() > 1 ? to_int_in(parts[1], 1, 1000000) : r.first;
  r.step = parts.size() > 2 ? to_int_in(parts[2], 1, 1000000) : 1;
  if (r.last < r.first) {
    invalid("range '" + v + "' ends before it starts");
  }
  return r;
}

std::string range_text(const IntRange& r)
{
  return std::to_string(r.first) + ":" + std::to_string(r.last) + ":" + std::to_string(r.step);
}

std::vector<Protocol> to_protocols(const std::string& v)
{
  std::vector<Protocol> out;
  std::stringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      const Protocol p = analytic::parse_protocol(trim(part));
      if (std::find(out.begin(), out.end(), p) != out.end()) {
        invalid("protocol '" + trim(part) + "' listed twice");
      }
      out.push_back(p);
    } catch (const analytic::AnalyticError& e) {
      invalid(e.what());
    }
  }
  if (out.empty()) {
    invalid("protocol list is empty");
  }
  return out;
}

std::string protocols_text(const std::vector<Protocol>& ps)
{
  std::string out;
  for (Protocol p : ps) {
    out += (out.empty() ? "" : ",") + std::string(analytic::to_string(p));
  }
  return out;
}

struct Key {
  std::string name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define RCFD_DOUBLE_KEY(key, field, parse)                                                     \
  Key{key, [](ExperimentConfig& c, const std::string& v) { c.field = parse(v); },              \
      [](const ExperimentConfig& c) { return num(c.field); }}
#define RCFD_INT_KEY(key, field, lo, hi)                                                       \
  Key{key, [](ExperimentConfig& c, const std::string& v) { c.field = to_int_in(v, lo, hi); },  \
      [](const ExperimentConfig& c) { return std::to_string(c.field); }}
#define RCFD_RANGE_KEY(key, field)                                                             \
  Key{key, [](ExperimentConfig& c, const std::string& v) { c.field = to_range(v); },           \
      [](const ExperimentConfig& c) { return range_text(c.field); }}

const std::vector<Key>& keys()
{
  static const std::vector<Key> table = {
    Key{"protocols", [](ExperimentConfig& c, const std::string& v) { c.protocols = to_protocols(v); },
        [](const ExperimentConfig& c) { return protocols_text(c.protocols); }},
    RCFD_INT_KEY("n", n, 1, 100000),
    Key{"topology",
        [](ExperimentConfig& c, const std::string& v) {
          if (v == "grid") {
            c.topology = TopologyKind::Grid;
          } else if (v == "random") {
            c.topology = TopologyKind::Random;
          } else {
            invalid("expected grid or random, got '" + v + "'");
          }
        },
        [](const ExperimentConfig& c) { return std::string(to_string(c.topology)); }},
    RCFD_INT_KEY("grid", grid, 2, 1000),
    RCFD_DOUBLE_KEY("d", d, positive),
    RCFD_DOUBLE_KEY("l", l, positive),
    RCFD_DOUBLE_KEY("r", r, positive),
    RCFD_INT_KEY("length", length_bytes, 1, 65535),
    Key{"rate",
        [](ExperimentConfig& c, const std::string& v) {
          c.rate_mbps = to_double(v);
          try {
            analytic::bits_per_symbol(c.rate_mbps);
          } catch (const analytic::AnalyticError& e) {
            invalid(e.what());
          }
        },
        [](const ExperimentConfig& c) { return num(c.rate_mbps); }},
    Key{"t_d_mode",
        [](ExperimentConfig& c, const std::string& v) {
          if (v == "auto") {
            c.td_mode.reset();
            return;
          }
          try {
            c.td_mode = analytic::parse_td_mode(v);
          } catch (const analytic::AnalyticError& e) {
            invalid(e.what());
          }
        },
        [](const ExperimentConfig& c) {
          return c.td_mode ? std::string(analytic::to_string(*c.td_mode)) : std::string("auto");
        }},
    RCFD_DOUBLE_KEY("t_d_us", td_override_us, non_negative),
    RCFD_DOUBLE_KEY("t_h", timings.t_header, non_negative),
    RCFD_DOUBLE_KEY("t_ack", timings.t_ack, positive),
    RCFD_DOUBLE_KEY("t_rts", timings.t_rts, positive),
    RCFD_DOUBLE_KEY("t_cts", timings.t_cts, positive),
    RCFD_DOUBLE_KEY("t_sifs", timings.t_sifs, positive),
    RCFD_DOUBLE_KEY("t_difs", timings.t_difs, positive),
    RCFD_DOUBLE_KEY("t_p", timings.t_p, non_negative),
    RCFD_DOUBLE_KEY("t_slot", timings.t_slot, positive),
    RCFD_DOUBLE_KEY("t_round", timings.t_round, positive),
    RCFD_DOUBLE_KEY("t_scan", timings.t_scan, non_negative),
    RCFD_INT_KEY("w", timings.w_initial, 1, 1 << 20),
    RCFD_INT_KEY("stage_cap", timings.stage_cap, 0, 20),
    RCFD_INT_KEY("subcarriers", timings.subcarriers, 2, 4096),
    RCFD_INT_KEY("modulation_order", modulation_order, 0, 1 << 16),
    Key{"fd_success_model",
        [](ExperimentConfig& c, const std::string& v) {
          if (v == "pair-aware") {
            c.fd_model = analytic::FdSuccessModel::PairAware;
          } else if (v == "single-winner") {
            c.fd_model = analytic::FdSuccessModel::SingleWinner;
          } else {
            invalid("expected pair-aware or single-winner, got '" + v + "'");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.fd_model == analytic::FdSuccessModel::PairAware ? "pair-aware"
                                                                                : "single-winner");
        }},
    RCFD_DOUBLE_KEY("lambda_s", traffic.lambda_s, positive),
    RCFD_DOUBLE_KEY("t_s_max", traffic.t_s_max, non_negative),
    RCFD_DOUBLE_KEY("t_on", traffic.t_on, positive),
    RCFD_DOUBLE_KEY("t_off", traffic.t_off, non_negative),
    RCFD_DOUBLE_KEY("source_rate", traffic.rate_bps, positive),
    Key{"saturated",
        [](ExperimentConfig& c, const std::string& v) { c.traffic.saturated = to_bool(v); },
        [](const ExperimentConfig& c) { return std::string(c.traffic.saturated ? "true" : "false"); }},
    RCFD_DOUBLE_KEY("duration", duration_s, positive),
    RCFD_INT_KEY("repetitions", repetitions, 1, 100000),
    Key{"seed",
        [](ExperimentConfig& c, const std::string& v) {
          std::uint64_t x = 0;
          const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
          if (ec != std::errc() || p != v.data() + v.size()) {
            invalid("expected an unsigned integer, got '" + v + "'");
          }
          c.seed = x;
        },
        [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
    Key{"loss_p",
        [](ExperimentConfig& c, const std::string& v) {
          if (v == "auto") {
            c.loss_p.reset();
            return;
          }
          const double p = to_double(v);
          if (!(p >= 0 && p < 1)) {
            invalid("loss_p must lie in [0, 1), got " + v);
          }
          c.loss_p = p;
        },
        [](const ExperimentConfig& c) { return c.loss_p ? num(*c.loss_p) : std::string("auto"); }},
    RCFD_INT_KEY("queue", queue_capacity, 1, 1 << 24),
    RCFD_DOUBLE_KEY("max_age", max_age_s, positive),
    RCFD_INT_KEY("max_attempts", max_attempts, 1, 1000),
    Key{"pairing",
        [](ExperimentConfig& c, const std::string& v) {
          if (v == "full-queue") {
            c.pairing = mac::FdPairingRule::FullQueue;
          } else if (v == "head-only") {
            c.pairing = mac::FdPairingRule::HeadOnly;
          } else {
            invalid("expected full-queue or head-only, got '" + v + "'");
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.pairing == mac::FdPairingRule::FullQueue ? "full-queue"
                                                                        : "head-only");
        }},
    RCFD_RANGE_KEY("n_range", n_range),
    RCFD_RANGE_KEY("length_range", length_range),
    RCFD_RANGE_KEY("grid_range", grid_range),
    RCFD_RANGE_KEY("nodes_range", nodes_range),
  };
  return table;
}

#undef RCFD_DOUBLE_KEY
#undef RCFD_INT_KEY
#undef RCFD_RANGE_KEY

const Key* find_key(const std::string& name)
{
  for (const Key& k : keys()) {
    if (k.name == name) {
      return &k;
    }
  }
  return nullptr;
}

void check_duplicates(const std::vector<Assignment>& list, std::vector<ConfigIssue>& issues)
{
  std::map<std::string, std::string> first;
  for (const Assignment& a : list) {
    const auto [it, fresh] = first.emplace(a.key, a.where);
    if (!fresh) {
      issues.push_back({ExpErrc::DuplicateKey, a.where, a.key,
                        "key '" + a.key + "' set at " + it->second + " and again at " + a.where});
    }
  }
}

// Cross-field checks that no single key can catch.
void check_whole(const ExperimentConfig& c, std::vector<ConfigIssue>& issues)
{
  auto add = [&](const std::string& key, const std::string& msg) {
    issues.push_back({ExpErrc::InvalidValue, "config", key, msg});
  };
  if (c.td_mode == analytic::TdMode::Override && !(c.td_override_us > 0)) {
    add("t_d_us", "t_d_mode=override needs a positive t_d_us");
  }
  if (c.timings.subcarriers % 2 != 0) {
    add("subcarriers", "subcarrier count must be even to split the band in two halves");
  }
  if (c.timings.t_difs < c.timings.t_sifs) {
    add("t_difs", "DIFS must not be shorter than SIFS");
  }
}

} // namespace

const char* to_string(ExpErrc code)
{
  switch (code) {
  case ExpErrc::Syntax:
    return "Syntax";
  case ExpErrc::UnknownKey:
    return "UnknownKey";
  case ExpErrc::InvalidValue:
    return "InvalidValue";
  case ExpErrc::DuplicateKey:
    return "DuplicateKey";
  case ExpErrc::CapacityExceeded:
    return "CapacityExceeded";
  }
  return "?";
}

const char* to_string(TopologyKind kind) { return kind == TopologyKind::Grid ? "grid" : "random"; }

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues)
{
  std::string out;
  for (const ConfigIssue& i : issues) {
    out += (out.empty() ? "" : "\n") + i.where + ": " + to_string(i.code) + ": " + i.message;
  }
  return out;
}

} // namespace

ConfigErrors::ConfigErrors(std::vector<ConfigIssue> issues)
  : std::runtime_error(join_issues(issues)), issues_(std::move(issues))
{
}

bool ConfigErrors::has(ExpErrc code) const
{
  return std::any_of(issues_.begin(), issues_.end(),
                     [code](const ConfigIssue& i) { return i.code == code; });
}

std::vector<int> IntRange::values() const
{
  std::vector<int> out;
  for (int v = first; v <= last; v += step) {
    out.push_back(v);
  }
  return out;
}

analytic::TdSpec ExperimentConfig::analytic_td() const
{
  return {td_mode.value_or(analytic::TdMode::Calibrated), td_override_us};
}

analytic::TdSpec ExperimentConfig::sim_td() const
{
  return {td_mode.value_or(analytic::TdMode::OfdmExact), td_override_us};
}

double ExperimentConfig::effective_loss_p(TopologyKind kind) const
{
  if (loss_p) {
    return *loss_p;
  }
  return kind == TopologyKind::Random ? 0.1 : 0.0;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const
{
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : keys()) {
    out.emplace_back(k.name, k.get(*this));
  }
  return out;
}

std::vector<Assignment> parse_lines(const std::string& text, const std::string& source,
                                    std::vector<ConfigIssue>& issues)
{
  std::vector<Assignment> out;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const std::string where = source + ":" + std::to_string(number);
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      issues.push_back({ExpErrc::Syntax, where, "", "expected key = value, got '" + body + "'"});
      continue;
    }
    Assignment a{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), where};
    if (a.key.empty()) {
      issues.push_back({ExpErrc::Syntax, where, "", "missing key before '='"});
      continue;
    }
    out.push_back(std::move(a));
  }
  return out;
}

ExperimentConfig build_config(const std::vector<Assignment>& file,
                              const std::vector<Assignment>& overrides)
{
  std::vector<ConfigIssue> issues;
  check_duplicates(file, issues);
  check_duplicates(overrides, issues);
  ExperimentConfig cfg;
  auto apply = [&](const Assignment& a) {
    const Key* k = find_key(a.key);
    if (k == nullptr) {
      issues.push_back({ExpErrc::UnknownKey, a.where, a.key, "unknown key '" + a.key + "'"});
      return;
    }
    try {
      k->set(cfg, a.value);
    } catch (const std::invalid_argument& e) {
      issues.push_back({ExpErrc::InvalidValue, a.where, a.key, a.key + ": " + e.what()});
    }
  };
  for (const Assignment& a : file) {
    apply(a);
  }
  for (const Assignment& a : overrides) {
    apply(a);
  }
  if (issues.empty()) {
    check_whole(cfg, issues);
  }
  if (issues.empty()) {
    try {
      check_capacity(cfg, cfg.topology == TopologyKind::Grid ? std::max(cfg.n, topology_nodes(cfg))
                                                             : cfg.n);
    } catch (const ConfigErrors& e) {
      issues = e.issues();
    }
  }
  if (!issues.empty()) {
    throw ConfigErrors(std::move(issues));
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::vector<std::string>& overrides)
{
  std::vector<ConfigIssue> issues;
  const std::vector<Assignment> file = parse_lines(text, source, issues);
  std::vector<Assignment> flags;
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    const std::string where = "argument " + std::to_string(i + 1);
    const auto eq = overrides[i].find('=');
    if (eq == std::string::npos) {
      issues.push_back({ExpErrc::Syntax, where, "", "expected key=value, got '" + overrides[i] + "'"});
      continue;
    }
    flags.push_back({trim(overrides[i].substr(0, eq)), trim(overrides[i].substr(eq + 1)), where});
  }
  ExperimentConfig cfg;
  try {
    cfg = build_config(file, flags);
  } catch (const ConfigErrors& e) {
    issues.insert(issues.end(), e.issues().begin(), e.issues().end());
  }
  if (!issues.empty()) {
    throw ConfigErrors(std::move(issues));
  }
  return cfg;
}

void check_capacity(const ExperimentConfig& cfg, int n)
{
  if (std::find(cfg.protocols.begin(), cfg.protocols.end(), Protocol::Rcfd) ==
      cfg.protocols.end()) {
    return;
  }
  try {
    sim::modulation_order_for(static_cast<std::size_t>(n), cfg.timings.subcarriers,
                              cfg.modulation_order);
  } catch (const sim::ConfigError& e) {
    std::string msg = e.what();
    const std::string prefix = "CapacityExceeded: ";
    if (msg.rfind(prefix, 0) == 0) {
      msg.erase(0, prefix.size());
    }
    throw ConfigErrors({{ExpErrc::CapacityExceeded, "config", "modulation_order", msg}});
  }
}

int topology_nodes(const ExperimentConfig& cfg)
{
  return cfg.topology == TopologyKind::Grid ? cfg.grid * cfg.grid : cfg.n;
}

} // namespace rcfd::exp
