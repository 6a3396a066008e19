#include "rcfd/analytic/back2f_chain.hpp"

#include <algorithm>
#include <cmath>

#include "rcfd/analytic/phy_timings.hpp"

namespace rcfd::analytic {

namespace {

double choose(int n, int k)
{
  if (k < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  double r = 1;
  for (int t = 1; t <= k; ++t) {
    r = r * (n - k + t) / t;
  }
  return r;
}

double binom_pmf(int n, int k, double q)
{
  if (k < 0 || k > n) {
    return 0;
  }
  return choose(n, k) * std::pow(q, k) * std::pow(1.0 - q, n - k);
}

/// Binomial(n, q) conditioned on at least one success.
double binom_pmf_at_least_one(int n, int k, double q)
{
  if (k < 1 || k > n) {
    return 0;
  }
  return binom_pmf(n, k, q) / (1.0 - std::pow(1.0 - q, n));
}

void check_sizes(int n, int s)
{
  if (n < 1) {
    throw AnalyticError(AnalyticErrc::InvalidN, "node count must be at least 1");
  }
  if (s < 2) {
    throw AnalyticError(AnalyticErrc::InvalidArgument, "at least two subcarriers are required");
  }
}

} // namespace

std::int64_t back2f_state_count(int n, int s)
{
  return static_cast<std::int64_t>(s - 1) * n * (n + 1) / 2 + n;
}

double p_j_given_i(int i, int j, int s)
{
  if (i < 1 || j < 1 || j > i) {
    return 0;
  }
  if (j == i) {
    return std::pow(1.0 / s, i - 1);
  }
  double sum = 0;
  for (int c = 0; c <= s - 2; ++c) {
    sum += choose(i, j) * std::pow(1.0 / s, j) * std::pow(1.0 - (c + 1.0) / s, i - j);
  }
  return sum;
}

double p_i_given_akbl(int i, int a, int k, int b, int l, int n, int s)
{
  if (i < 1 || i > n || a < 0 || a >= s) {
    return 0;
  }
  if (k != l) {
    // The k-l round-2 losers sit at slot 0; the l transmitters redraw.
    if (a != 0 || i < k - l || i > k) {
      return 0;
    }
    const int fresh_at_zero = i - k + l;
    return choose(l, fresh_at_zero) * std::pow(1.0 / s, fresh_at_zero) *
           std::pow(1.0 - 1.0 / s, k - i);
  }
  if (k == n) {
    return binom_pmf_at_least_one(n, i, 1.0 / (s - a));
  }
  // k = l < N: k fresh draws on [0, S-1], N-k residuals on [1, S-b-1].
  const int top = s - b - 1;
  if (a == 0) {
    return binom_pmf_at_least_one(k, i, 1.0 / s);
  }
  if (a == top) {
    if (i < n - k) {
      return 0;
    }
    const double q = 1.0 / (b + 1.0);
    return choose(k, i - n + k) * std::pow(q, i - n + k) * std::pow(1.0 - q, n - i);
  }
  if (a > top) {
    return 0;
  }
  const double q_fresh = 1.0 / (s - a);
  const double q_resid = 1.0 / (s - b - a);
  double sum = 0;
  for (int m = std::max(i - k, 0); m <= std::min(n - k, i); ++m) {
    sum += binom_pmf(n - k, m, q_resid) * binom_pmf(k, i - m, q_fresh);
  }
  const double none = std::pow(1.0 - q_fresh, k) * std::pow(1.0 - q_resid, n - k);
  return sum / (1.0 - none);
}

double p_a_given_kbl(int a, int k, int b, int l, int n, int s)
{
  if (a < 0 || a >= s) {
    return 0;
  }
  if (k != l) {
    return a == 0 ? 1.0 : 0.0;
  }
  if (k == n) {
    return std::pow(1.0 - static_cast<double>(a) / s, n) -
           std::pow(1.0 - (a + 1.0) / s, n);
  }
  const int top = s - b - 1;
  if (a == 0) {
    return 1.0 - std::pow(1.0 - 1.0 / s, k);
  }
  if (a > top) {
    return 0;
  }
  const double span = top;
  return std::pow(1.0 - static_cast<double>(a) / s, k) * std::pow(1.0 - (a - 1.0) / span, n - k) -
         std::pow(1.0 - (a + 1.0) / s, k) * std::pow(1.0 - a / span, n - k);
}

double back2f_transition(const MarkovState& from, const MarkovState& to, int n, int s)
{
  const double pa = p_a_given_kbl(to.c, from.x, from.c, from.y, n, s);
  if (pa == 0) {
    return 0;
  }
  return p_j_given_i(to.x, to.y, s) * p_i_given_akbl(to.x, to.c, from.x, from.c, from.y, n, s) * pa;
}

std::vector<MarkovState> back2f_states(int n, int s)
{
  check_sizes(n, s);
  std::vector<MarkovState> states;
  states.reserve(static_cast<std::size_t>(back2f_state_count(n, s)));
  for (int c = 0; c < s; ++c) {
    for (int x = (c == s - 1 ? n : 1); x <= n; ++x) {
      for (int y = 1; y <= x; ++y) {
        states.push_back({x, c, y});
      }
    }
  }
  return states;
}

namespace {

/// Dense storage over (c, x, y) with x, y in 1..N. Entries outside the state
/// space stay zero.
struct Dense {
  int n;
  int s;
  std::vector<double> v;

  Dense(int n_, int s_) : n(n_), s(s_), v(static_cast<std::size_t>(s_) * n_ * n_, 0.0) {}

  double& at(int x, int c, int y)
  {
    return v[(static_cast<std::size_t>(c) * n + (x - 1)) * n + (y - 1)];
  }
  double at(int x, int c, int y) const
  {
    return v[(static_cast<std::size_t>(c) * n + (x - 1)) * n + (y - 1)];
  }
};

} // namespace

Back2fStationary back2f_stationary(int n, int s, const Back2fSolveOptions& options)
{
  check_sizes(n, s);
  const std::size_t nn = static_cast<std::size_t>(n);

  // p(j | i) for i, j in 1..N.
  std::vector<double> pj(nn * nn, 0.0);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= i; ++j) {
      pj[(i - 1) * nn + (j - 1)] = p_j_given_i(i, j, s);
    }
  }

  // Sources with k != l land on a = 0; coefficient over i for each (k, l).
  std::vector<double> coef_kl(nn * nn * nn, 0.0);
  for (int k = 2; k <= n; ++k) {
    for (int l = 1; l < k; ++l) {
      for (int i = k - l; i <= k; ++i) {
        coef_kl[((k - 1) * nn + (l - 1)) * nn + (i - 1)] = p_i_given_akbl(i, 0, k, 0, l, n, s);
      }
    }
  }

  // Sources with k = l = N do not depend on b.
  std::vector<double> coef_all(static_cast<std::size_t>(s) * nn, 0.0);
  for (int a = 0; a < s; ++a) {
    const double pa = p_a_given_kbl(a, n, 0, n, n, s);
    for (int i = 1; i <= n; ++i) {
      coef_all[a * nn + (i - 1)] = pa * p_i_given_akbl(i, a, n, 0, n, n, s);
    }
  }

  // Sources with k = l < N: a ranges over 0..S-b-1. Offsets index a flat
  // table by (k, b).
  std::vector<std::size_t> offset(nn * static_cast<std::size_t>(s), 0);
  std::size_t total = 0;
  for (int k = 1; k < n; ++k) {
    for (int b = 0; b <= s - 2; ++b) {
      offset[(k - 1) * s + b] = total;
      total += static_cast<std::size_t>(s - b) * nn;
    }
  }
  std::vector<double> coef_kk(total, 0.0);
  for (int k = 1; k < n; ++k) {
    for (int b = 0; b <= s - 2; ++b) {
      double* row = coef_kk.data() + offset[(k - 1) * s + b];
      for (int a = 0; a <= s - b - 1; ++a) {
        const double pa = p_a_given_kbl(a, k, b, k, n, s);
        if (pa == 0) {
          continue;
        }
        for (int i = 1; i <= n; ++i) {
          row[a * nn + (i - 1)] = pa * p_i_given_akbl(i, a, k, b, k, n, s);
        }
      }
    }
  }

  Dense pi(n, s);
  Dense next(n, s);
  // Start from every node drawing fresh.
  pi.at(n, 0, n) = 1.0;
  std::vector<double> mu(static_cast<std::size_t>(s) * nn, 0.0);
  std::vector<double> agg_kl(nn * nn, 0.0);

  Back2fStationary out;
  out.n = n;
  out.s = s;
  double change = 1;
  int it = 0;
  while (change >= options.tolerance) {
    if (it >= options.max_iterations) {
      throw AnalyticError(AnalyticErrc::NonConvergence,
                          "stationary distribution did not converge within the iteration cap");
    }
    ++it;
    std::fill(mu.begin(), mu.end(), 0.0);
    std::fill(agg_kl.begin(), agg_kl.end(), 0.0);
    double agg_all = 0;
    for (int b = 0; b < s; ++b) {
      const int k_min = (b == s - 1) ? n : 1;
      for (int k = k_min; k <= n; ++k) {
        for (int l = 1; l <= k; ++l) {
          const double w = pi.at(k, b, l);
          if (w == 0) {
            continue;
          }
          if (l != k) {
            agg_kl[(k - 1) * nn + (l - 1)] += w;
          } else if (k == n) {
            agg_all += w;
          } else {
            const double* row = coef_kk.data() + offset[(k - 1) * s + b];
            const std::size_t len = static_cast<std::size_t>(s - b) * nn;
            for (std::size_t t = 0; t < len; ++t) {
              mu[t] += w * row[t];
            }
          }
        }
      }
    }
    for (int k = 2; k <= n; ++k) {
      for (int l = 1; l < k; ++l) {
        const double w = agg_kl[(k - 1) * nn + (l - 1)];
        if (w == 0) {
          continue;
        }
        const double* row = coef_kl.data() + ((k - 1) * nn + (l - 1)) * nn;
        for (int i = k - l; i <= k; ++i) {
          mu[i - 1] += w * row[i - 1];
        }
      }
    }
    if (agg_all != 0) {
      for (std::size_t t = 0; t < coef_all.size(); ++t) {
        mu[t] += agg_all * coef_all[t];
      }
    }

    double sum = 0;
    for (int a = 0; a < s; ++a) {
      for (int i = 1; i <= n; ++i) {
        const double m = mu[a * nn + (i - 1)];
        for (int j = 1; j <= i; ++j) {
          const double v = m * pj[(i - 1) * nn + (j - 1)];
          next.at(i, a, j) = v;
          sum += v;
        }
      }
    }
    change = 0;
    for (std::size_t t = 0; t < next.v.size(); ++t) {
      next.v[t] /= sum;
      change += std::fabs(next.v[t] - pi.v[t]);
    }
    std::swap(pi.v, next.v);
  }

  out.iterations = it;
  out.last_change = change;
  out.states = back2f_states(n, s);
  out.pi.reserve(out.states.size());
  for (const MarkovState& st : out.states) {
    const double v = pi.at(st.x, st.c, st.y);
    out.pi.push_back(v);
    if (st.y == 1) {
      out.p_s += v;
    }
  }
  return out;
}

std::vector<double> back2f_apply_naive(const std::vector<double>& pi, int n, int s)
{
  const std::vector<MarkovState> states = back2f_states(n, s);
  if (pi.size() != states.size()) {
    throw AnalyticError(AnalyticErrc::InvalidArgument, "distribution size does not match the chain");
  }
  std::vector<double> out(states.size(), 0.0);
  for (std::size_t f = 0; f < states.size(); ++f) {
    if (pi[f] == 0) {
      continue;
    }
    for (std::size_t t = 0; t < states.size(); ++t) {
      out[t] += pi[f] * back2f_transition(states[f], states[t], n, s);
    }
  }
  return out;
}

} // namespace rcfd::analytic
