#include "rcfd/mac/back2f.hpp"

#include <algorithm>

namespace rcfd::mac {

void back2f_begin(Back2fRoundState& st, int subcarriers, Rng& rng)
{
  if (st.myback < 0) {
    st.myback = static_cast<int>(rng.below(static_cast<std::uint64_t>(subcarriers)));
  }
  st.phase = Back2fRoundState::Phase::Round1;
}

void back2f_step(Back2fRoundState& st, int lowest_heard, int subcarriers, Rng& rng)
{
  using Phase = Back2fRoundState::Phase;
  const auto draw = [&] { return static_cast<int>(rng.below(static_cast<std::uint64_t>(subcarriers))); };
  switch (st.phase) {
  case Phase::Round1:
    st.myback -= lowest_heard;
    if (st.myback == 0) {
      st.myback2 = draw();
      st.phase = Phase::Round2;
    } else {
      st.phase = Phase::Scan;
    }
    break;
  case Phase::Round2:
    if (st.myback2 == lowest_heard) {
      st.myback = draw();
      st.phase = Phase::Transmit;
    } else {
      st.phase = Phase::Scan;
    }
    break;
  case Phase::Scan:
  case Phase::Transmit:
    break;
  }
}

Back2fCoordinator::Back2fCoordinator(std::vector<Back2fMac*> macs,
                                     std::vector<std::vector<NodeId>> neighbors,
                                     const TimingsNs& timings)
  : macs_(std::move(macs)), neighbors_(std::move(neighbors)), timings_(timings),
    active_(macs_.size(), 0)
{
}

bool Back2fCoordinator::on_grid(TimeNs g)
{
  using Phase = Back2fRoundState::Phase;
  const int s = timings_.subcarriers;
  bool work = false;
  contenders_.clear();
  for (NodeId i = 0; i < macs_.size(); ++i) {
    Back2fMac& m = *macs_[i];
    if (m.ctx().queue().empty()) {
      continue;
    }
    work = true;
    if (!m.in_exchange(g) && m.sensed_free(g, timings_.difs) && m.head(g) != nullptr) {
      contenders_.push_back(i);
    }
  }
  if (contenders_.empty()) {
    return work;
  }
  ++contentions_;
  for (NodeId i : contenders_) {
    back2f_begin(macs_[i]->rounds(), s, macs_[i]->ctx().rng());
    active_[i] = 1;
  }

  // Each round: lowest value among the node and its active neighbors.
  auto run_round = [&](Phase phase, auto value) {
    std::vector<std::pair<NodeId, int>> lowest;
    for (NodeId i : contenders_) {
      if (macs_[i]->rounds().phase != phase) {
        continue;
      }
      int lo = value(i);
      for (NodeId v : neighbors_[i]) {
        if (active_[v] && macs_[v]->rounds().phase == phase) {
          lo = std::min(lo, value(v));
        }
      }
      lowest.emplace_back(i, lo);
    }
    for (auto [i, lo] : lowest) {
      back2f_step(macs_[i]->rounds(), lo, s, macs_[i]->ctx().rng());
    }
  };
  run_round(Phase::Round1, [&](NodeId i) { return macs_[i]->rounds().myback; });
  run_round(Phase::Round2, [&](NodeId i) { return macs_[i]->rounds().myback2; });

  const TimeNs end = g + period();
  for (NodeId i : contenders_) {
    active_[i] = 0;
    Back2fMac& m = *macs_[i];
    m.ctx().sense_contention(end);
    for (NodeId v : neighbors_[i]) {
      macs_[v]->ctx().sense_contention(end);
    }
    if (m.rounds().phase == Phase::Transmit) {
      m.rounds().phase = Phase::Scan;
      m.schedule_primary(end);
    }
  }
  return true;
}

} // namespace rcfd::mac
