#include "rcfd/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcfd/common/rng.hpp"

namespace rcfd::verify {

namespace {

/// Advances a mixed-radix counter; returns false after the last value.
bool next_vector(std::vector<int>& digits, const std::vector<int>& radix)
{
  for (std::size_t d = 0; d < digits.size(); ++d) {
    if (++digits[d] < radix[d]) {
      return true;
    }
    digits[d] = 0;
  }
  return false;
}

std::int64_t ipow(std::int64_t base, int e)
{
  std::int64_t r = 1;
  for (int t = 0; t < e; ++t) {
    r *= base;
  }
  return r;
}

} // namespace

double enumerate_p_j_given_i(int i, int j, int s)
{
  if (i < 1 || j < 1 || j > i) {
    return 0;
  }
  std::vector<int> draw(i, 0);
  const std::vector<int> radix(i, s);
  std::int64_t hits = 0;
  do {
    const int lo = *std::min_element(draw.begin(), draw.end());
    if (std::count(draw.begin(), draw.end(), lo) == j) {
      ++hits;
    }
  } while (next_vector(draw, radix));
  return static_cast<double>(hits) / static_cast<double>(ipow(s, i));
}

FirstRoundTable enumerate_first_round(int n, int s, int k, int b, int l)
{
  const int forced_zero = k != l ? k - l : 0;
  const int fresh = k != l ? l : k;
  const int residual = n - k;
  const int residual_span = s - 1 - b;
  if (residual > 0 && residual_span < 1) {
    throw std::invalid_argument("round-1 losers need a nonempty residual range");
  }
  // Each random node is one digit: fresh draws take 0..S-1, residuals 1..span.
  std::vector<int> radix(fresh, s);
  radix.insert(radix.end(), residual, residual_span);
  std::vector<int> digits(radix.size(), 0);

  std::vector<std::int64_t> min_count(s, 0);
  std::vector<std::vector<std::int64_t>> tie_count(s, std::vector<std::int64_t>(n + 1, 0));
  std::int64_t total = 0;
  std::vector<int> values(n);
  do {
    int idx = 0;
    for (int t = 0; t < forced_zero; ++t) {
      values[idx++] = 0;
    }
    for (int t = 0; t < fresh; ++t) {
      values[idx++] = digits[t];
    }
    for (int t = 0; t < residual; ++t) {
      values[idx++] = 1 + digits[fresh + t];
    }
    const int lo = *std::min_element(values.begin(), values.end());
    const auto ties = std::count(values.begin(), values.end(), lo);
    ++min_count[lo];
    ++tie_count[lo][ties];
    ++total;
  } while (!radix.empty() && next_vector(digits, radix));

  FirstRoundTable out;
  out.p_a.assign(s, 0.0);
  out.p_i.assign(s, std::vector<double>(n + 1, 0.0));
  for (int a = 0; a < s; ++a) {
    out.p_a[a] = static_cast<double>(min_count[a]) / static_cast<double>(total);
    if (min_count[a] == 0) {
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      out.p_i[a][i] = static_cast<double>(tie_count[a][i]) / static_cast<double>(min_count[a]);
    }
  }
  return out;
}

Estimate bianchi_monte_carlo(int n, int w, int m, std::int64_t slots, std::uint64_t seed)
{
  Rng rng(seed);
  std::vector<int> stage(n, 0);
  std::vector<std::int64_t> counter(n);
  for (auto& c : counter) {
    c = static_cast<std::int64_t>(rng.below(w));
  }
  constexpr int kBatches = 100;
  const std::int64_t per_batch = std::max<std::int64_t>(1, slots / kBatches);
  std::vector<double> batch_tau;
  std::int64_t batch_tx = 0;
  std::int64_t batch_slots = 0;
  std::int64_t total_tx = 0;
  std::vector<int> tx;
  for (std::int64_t t = 0; t < slots; ++t) {
    tx.clear();
    for (int i = 0; i < n; ++i) {
      if (counter[i] == 0) {
        tx.push_back(i);
      } else {
        --counter[i];
      }
    }
    const bool success = tx.size() == 1;
    for (int i : tx) {
      stage[i] = success ? 0 : std::min(stage[i] + 1, m);
      counter[i] = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(w) << stage[i]));
    }
    batch_tx += static_cast<std::int64_t>(tx.size());
    total_tx += static_cast<std::int64_t>(tx.size());
    if (++batch_slots == per_batch) {
      batch_tau.push_back(static_cast<double>(batch_tx) / (static_cast<double>(n) * per_batch));
      batch_tx = 0;
      batch_slots = 0;
    }
  }
  Estimate e;
  e.mean = static_cast<double>(total_tx) / (static_cast<double>(n) * static_cast<double>(slots));
  double var = 0;
  for (double v : batch_tau) {
    var += (v - e.mean) * (v - e.mean);
  }
  const double b = static_cast<double>(batch_tau.size());
  e.std_error = b > 1 ? std::sqrt(var / (b - 1) / b) : 0;
  return e;
}

Estimate renewal_reward_eta(double p_tr, double p_s, double t_d, double t_slot, double t_s,
                            double t_c, std::int64_t slots, std::uint64_t seed)
{
  Rng rng(seed);
  constexpr int kBatches = 100;
  const std::int64_t per_batch = std::max<std::int64_t>(1, slots / kBatches);
  double reward = 0;
  double time = 0;
  double b_reward = 0;
  double b_time = 0;
  std::vector<double> ratios;
  for (std::int64_t t = 0; t < slots; ++t) {
    double r = 0;
    double d = t_slot;
    if (rng.uniform() < p_tr) {
      if (rng.uniform() < p_s) {
        r = t_d;
        d = t_s;
      } else {
        d = t_c;
      }
    }
    reward += r;
    time += d;
    b_reward += r;
    b_time += d;
    if ((t + 1) % per_batch == 0) {
      ratios.push_back(b_reward / b_time);
      b_reward = 0;
      b_time = 0;
    }
  }
  Estimate e;
  e.mean = reward / time;
  double var = 0;
  for (double v : ratios) {
    var += (v - e.mean) * (v - e.mean);
  }
  const double b = static_cast<double>(ratios.size());
  e.std_error = b > 1 ? std::sqrt(var / (b - 1) / b) : 0;
  return e;
}

Estimate back2f_monte_carlo(int n, int s, std::int64_t slots, std::uint64_t seed,
                            ResidualModel model)
{
  Rng rng(seed);
  std::vector<int> back(n);
  for (auto& v : back) {
    v = static_cast<int>(rng.below(s));
  }
  std::vector<int> back2(n);
  std::int64_t successes = 0;
  for (std::int64_t t = 0; t < slots; ++t) {
    const int minback = *std::min_element(back.begin(), back.end());
    int lo2 = s;
    for (int i = 0; i < n; ++i) {
      back[i] -= minback;
      if (back[i] == 0) {
        back2[i] = static_cast<int>(rng.below(s));
        lo2 = std::min(lo2, back2[i]);
      } else if (model == ResidualModel::Resample) {
        back[i] = 1 + static_cast<int>(rng.below(s - 1 - minback));
      }
    }
    int winners = 0;
    for (int i = 0; i < n; ++i) {
      if (back[i] == 0 && back2[i] == lo2) {
        ++winners;
        back[i] = static_cast<int>(rng.below(s));
      }
    }
    if (winners == 1) {
      ++successes;
    }
  }
  Estimate e;
  e.mean = static_cast<double>(successes) / static_cast<double>(slots);
  // Successive contentions are weakly dependent; the binomial error is used.
  e.std_error = std::sqrt(e.mean * (1 - e.mean) / static_cast<double>(slots));
  return e;
}

ConflictCount count_conflicts(const std::vector<std::vector<core::NodeId>>& neighbors,
                              const std::vector<core::SlotResult>& results)
{
  const std::size_t n = results.size();
  auto in_range = [&](core::NodeId a, core::NodeId b) {
    const auto& v = neighbors[a];
    return std::find(v.begin(), v.end(), b) != v.end();
  };
  ConflictCount c;
  for (core::NodeId x = 0; x < n; ++x) {
    int incoming = 0;
    for (core::NodeId src = 0; src < n; ++src) {
      const auto& d = results[src].decision;
      if (!d.transmits() || d.dest != x || src == x) {
        continue;
      }
      if (in_range(x, src)) {
        ++incoming;
      }
      // A node sending to someone other than the sender it receives from.
      const auto& own = results[x].decision;
      if (own.transmits() && own.dest != src) {
        ++c.destination;
      }
      // Any other transmitter within range of the destination.
      for (core::NodeId t = 0; t < n; ++t) {
        if (t != src && t != x && results[t].decision.transmits() && in_range(x, t)) {
          ++c.interference;
        }
      }
    }
    if (incoming > 1) {
      ++c.destination;
    }
  }
  return c;
}

EnumerationStats enumerate_rcfd(int max_n, int max_s)
{
  EnumerationStats stats;
  for (int n = 2; n <= max_n; ++n) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        edges.emplace_back(a, b);
      }
    }
    const std::uint32_t graphs = 1u << edges.size();
    for (std::uint32_t mask = 0; mask < graphs; ++mask) {
      std::vector<std::vector<core::NodeId>> nb(n);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (mask & (1u << e)) {
          nb[edges[e].first].push_back(edges[e].second);
          nb[edges[e].second].push_back(edges[e].first);
        }
      }
      const bool single_domain = mask == graphs - 1;
      ++stats.topologies;

      for (int s = 2; s <= max_s; s += 2) {
        for (int m = 1; m <= 2; ++m) {
          if (m * s > max_s || n > m * s / 2) {
            continue;
          }
          const core::SubcarrierMap map = core::default_mapping(n, s, m);
          const int slot_count = m * s;

          // Intent digit 0 means no packet, d > 0 the (d-1)th neighbor.
          std::vector<int> intent_radix(n);
          for (int i = 0; i < n; ++i) {
            intent_radix[i] = 1 + static_cast<int>(nb[i].size());
          }
          std::vector<int> intent(n, 0);
          do {
            std::vector<int> contenders;
            for (int i = 0; i < n; ++i) {
              if (intent[i] > 0) {
                contenders.push_back(i);
              }
            }
            std::vector<core::SlotParticipant> part(n);
            for (int i : contenders) {
              const core::NodeId dest = nb[i][intent[i] - 1];
              part[i].intent = dest;
              part[i].queued_for = {dest};
            }
            std::vector<int> draw(contenders.size(), 0);
            const std::vector<int> draw_radix(contenders.size(), slot_count);
            do {
              for (std::size_t c = 0; c < contenders.size(); ++c) {
                part[contenders[c]].pick =
                  core::Slot{static_cast<std::uint32_t>(draw[c] / m),
                             static_cast<std::uint32_t>(draw[c] % m)};
              }
              const auto res = core::resolve_contention(nb, part, map);
              ++stats.configurations;
              const ConflictCount cc = count_conflicts(nb, res);
              stats.destination_conflicts += cc.destination > 0 ? 1 : 0;
              stats.receiver_interference += cc.interference > 0 ? 1 : 0;
              for (int i = 0; i < n; ++i) {
                const auto& d = res[i].decision;
                if (d.kind == core::TxDecision::Kind::TransmitSecondaryFD) {
                  if (res[i].role != core::NodeRole::RtsReceiver) {
                    ++stats.role_violations;
                  }
                  if (single_domain &&
                      res[d.dest].decision != core::TxDecision::primary(static_cast<core::NodeId>(i))) {
                    ++stats.pairing_violations;
                  }
                }
                if (d.kind == core::TxDecision::Kind::TransmitPrimary &&
                    res[i].role != core::NodeRole::PrimaryTransmitter) {
                  ++stats.role_violations;
                }
              }
            } while (!draw.empty() && next_vector(draw, draw_radix));
          } while (next_vector(intent, intent_radix));
        }
      }
    }
  }
  return stats;
}

} // namespace rcfd::verify
