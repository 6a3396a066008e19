// Value types shared by the RCFD contention logic.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcfd::core {

/// Zero-based node index. The first node of a network is node 0.
using NodeId = std::uint32_t;

/// A contention resource: a subcarrier and the symbol value sent on it.
/// With the plain mapping the value is always 0. The defaulted ordering
/// compares the subcarrier first and the value second.
struct Slot {
  std::uint32_t subcarrier = 0;
  std::uint32_t value = 0;

  auto operator<=>(const Slot&) const = default;
};

/// Sorted set of slots heard in one round. Duplicate emissions collapse.
class SlotSet {
public:
  SlotSet() = default;
  SlotSet(std::initializer_list<Slot> slots)
  {
    for (const Slot& s : slots) {
      insert(s);
    }
  }

  void insert(Slot s)
  {
    auto it = std::lower_bound(slots_.begin(), slots_.end(), s);
    if (it == slots_.end() || *it != s) {
      slots_.insert(it, s);
    }
  }

  bool erase(Slot s)
  {
    auto it = std::lower_bound(slots_.begin(), slots_.end(), s);
    if (it == slots_.end() || *it != s) {
      return false;
    }
    slots_.erase(it);
    return true;
  }

  bool contains(Slot s) const { return std::binary_search(slots_.begin(), slots_.end(), s); }
  bool empty() const { return slots_.empty(); }
  std::size_t size() const { return slots_.size(); }
  void clear() { slots_.clear(); }

  /// Lowest slot. Precondition: not empty.
  Slot min() const { return slots_.front(); }

  auto begin() const { return slots_.begin(); }
  auto end() const { return slots_.end(); }

  bool operator==(const SlotSet&) const = default;

private:
  std::vector<Slot> slots_;
};

/// Heard sets of one node over the three contention rounds.
struct ContentionObservation {
  SlotSet round1_heard;
  SlotSet round2_heard_set1;
  SlotSet round2_heard_set2;
  SlotSet round3_heard_set1;
  SlotSet round3_heard_set2;
};

enum class NodeRole { Idle, PrimaryTransmitter, RtsReceiver, Bystander };

struct TxDecision {
  enum class Kind { TransmitPrimary, TransmitSecondaryFD, Hold };

  Kind kind = Kind::Hold;
  NodeId dest = 0;

  static TxDecision primary(NodeId d) { return {Kind::TransmitPrimary, d}; }
  static TxDecision secondary(NodeId d) { return {Kind::TransmitSecondaryFD, d}; }
  static TxDecision hold() { return {}; }

  bool transmits() const { return kind != Kind::Hold; }
  bool operator==(const TxDecision&) const = default;
};

enum class CoreErrc { CapacityExceeded, InvalidMapping, ChosenNotHeard, UnmappedNode, NoRtsHeard };

class CoreError : public std::runtime_error {
public:
  CoreError(CoreErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  CoreErrc code() const { return code_; }

private:
  CoreErrc code_;
};

} // namespace rcfd::core
