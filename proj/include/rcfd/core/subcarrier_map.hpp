// Association between nodes and contention slots.
//
// Subcarriers are split into two disjoint halves. The first half carries a
// node's own identity (F1) and the second half the identity of the node it
// addresses (F2). With modulation order m > 1 every subcarrier holds m
// distinct symbol values, so up to m*S/2 nodes fit.

#pragma once

#include <optional>
#include <vector>

#include "rcfd/common/rng.hpp"
#include "rcfd/core/types.hpp"

namespace rcfd::core {

class SubcarrierMap {
public:
  /// Builds a map from explicit assignments. Throws InvalidMapping when the
  /// sets overlap, leave the band, or two nodes share a slot in one set.
  SubcarrierMap(std::uint32_t total_subcarriers, std::uint32_t modulation_order,
                std::vector<std::uint32_t> set1, std::vector<std::uint32_t> set2,
                std::vector<Slot> f1, std::vector<Slot> f2);

  std::uint32_t total_subcarriers() const { return total_subcarriers_; }
  std::uint32_t modulation_order() const { return modulation_order_; }
  std::uint32_t node_count() const { return static_cast<std::uint32_t>(f1_.size()); }
  const std::vector<std::uint32_t>& set1() const { return set1_; }
  const std::vector<std::uint32_t>& set2() const { return set2_; }

  /// Number of distinct round-1 outcomes, m*S.
  std::uint32_t slot_count() const { return total_subcarriers_ * modulation_order_; }

  Slot f1(NodeId n) const;
  Slot f2(NodeId n) const;

  bool in_set1(Slot s) const;
  bool in_set2(Slot s) const;

  /// Inverse of f1 and f2; empty when no node owns the slot.
  std::optional<NodeId> node_of_f1(Slot s) const;
  std::optional<NodeId> node_of_f2(Slot s) const;

private:
  std::optional<NodeId> lookup(const std::vector<Slot>& f, Slot s) const;

  std::uint32_t total_subcarriers_;
  std::uint32_t modulation_order_;
  std::vector<std::uint32_t> set1_;
  std::vector<std::uint32_t> set2_;
  std::vector<Slot> f1_;
  std::vector<Slot> f2_;
  std::vector<std::uint8_t> band_; // 1 for set1, 2 for set2, 0 unused
};

/// First half of the band for F1, second half for F2, filled column-major:
/// node k takes subcarrier k / m and symbol value k % m in each half.
SubcarrierMap default_mapping(std::uint32_t node_count, std::uint32_t subcarriers,
                              std::uint32_t modulation_order = 1);

/// Draws a round-1 slot uniformly over all m*S slots of the band.
Slot round1_pick(const SubcarrierMap& map, Rng& rng);

} // namespace rcfd::core
