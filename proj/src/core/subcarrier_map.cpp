#include "rcfd/core/subcarrier_map.hpp"

#include <sstream>

namespace rcfd::core {

namespace {

std::string slot_text(Slot s)
{
  std::ostringstream os;
  os << "(subcarrier " << s.subcarrier << ", value " << s.value << ")";
  return os.str();
}

} // namespace

SubcarrierMap::SubcarrierMap(std::uint32_t total_subcarriers, std::uint32_t modulation_order,
                             std::vector<std::uint32_t> set1, std::vector<std::uint32_t> set2,
                             std::vector<Slot> f1, std::vector<Slot> f2)
  : total_subcarriers_(total_subcarriers),
    modulation_order_(modulation_order),
    set1_(std::move(set1)),
    set2_(std::move(set2)),
    f1_(std::move(f1)),
    f2_(std::move(f2)),
    band_(total_subcarriers, 0)
{
  if (modulation_order_ == 0) {
    throw CoreError(CoreErrc::InvalidMapping, "modulation order must be at least 1");
  }
  if (f1_.size() != f2_.size()) {
    throw CoreError(CoreErrc::InvalidMapping, "f1 and f2 must cover the same nodes");
  }
  for (std::uint32_t sc : set1_) {
    if (sc >= total_subcarriers_ || band_[sc] != 0) {
      throw CoreError(CoreErrc::InvalidMapping, "set 1 leaves the band or repeats a subcarrier");
    }
    band_[sc] = 1;
  }
  for (std::uint32_t sc : set2_) {
    if (sc >= total_subcarriers_ || band_[sc] != 0) {
      throw CoreError(CoreErrc::InvalidMapping, "set 2 leaves the band or overlaps set 1");
    }
    band_[sc] = 2;
  }
  auto check = [&](const std::vector<Slot>& f, std::uint8_t band, const char* name) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Slot s = f[i];
      if (s.subcarrier >= total_subcarriers_ || band_[s.subcarrier] != band ||
          s.value >= modulation_order_) {
        throw CoreError(CoreErrc::InvalidMapping,
                        std::string(name) + " maps a node outside its set: " + slot_text(s));
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (f[j] == s) {
          throw CoreError(CoreErrc::InvalidMapping,
                          std::string(name) + " is not injective at " + slot_text(s));
        }
      }
    }
  };
  check(f1_, 1, "f1");
  check(f2_, 2, "f2");
}

Slot SubcarrierMap::f1(NodeId n) const
{
  if (n >= f1_.size()) {
    throw CoreError(CoreErrc::UnmappedNode, "node " + std::to_string(n) + " has no f1 slot");
  }
  return f1_[n];
}

Slot SubcarrierMap::f2(NodeId n) const
{
  if (n >= f2_.size()) {
    throw CoreError(CoreErrc::UnmappedNode, "node " + std::to_string(n) + " has no f2 slot");
  }
  return f2_[n];
}

bool SubcarrierMap::in_set1(Slot s) const
{
  return s.subcarrier < total_subcarriers_ && band_[s.subcarrier] == 1;
}

bool SubcarrierMap::in_set2(Slot s) const
{
  return s.subcarrier < total_subcarriers_ && band_[s.subcarrier] == 2;
}

std::optional<NodeId> SubcarrierMap::node_of_f1(Slot s) const { return lookup(f1_, s); }

std::optional<NodeId> SubcarrierMap::node_of_f2(Slot s) const { return lookup(f2_, s); }

std::optional<NodeId> SubcarrierMap::lookup(const std::vector<Slot>& f, Slot s) const
{
  // Fast path for maps built by default_mapping.
  const std::uint64_t guess_sc = s.subcarrier % (total_subcarriers_ / 2 == 0 ? 1 : total_subcarriers_ / 2);
  const std::uint64_t guess = guess_sc * modulation_order_ + s.value;
  if (guess < f.size() && f[guess] == s) {
    return static_cast<NodeId>(guess);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == s) {
      return static_cast<NodeId>(i);
    }
  }
  return std::nullopt;
}

SubcarrierMap default_mapping(std::uint32_t node_count, std::uint32_t subcarriers,
                              std::uint32_t modulation_order)
{
  if (subcarriers < 2 || subcarriers % 2 != 0) {
    throw CoreError(CoreErrc::InvalidMapping, "subcarrier count must be even and at least 2");
  }
  if (modulation_order == 0) {
    throw CoreError(CoreErrc::InvalidMapping, "modulation order must be at least 1");
  }
  const std::uint32_t half = subcarriers / 2;
  const std::uint64_t capacity = static_cast<std::uint64_t>(modulation_order) * half;
  if (node_count > capacity) {
    throw CoreError(CoreErrc::CapacityExceeded,
                    std::to_string(node_count) + " nodes exceed the mapping capacity m*S/2 = " +
                      std::to_string(capacity));
  }
  std::vector<std::uint32_t> set1(half), set2(half);
  for (std::uint32_t k = 0; k < half; ++k) {
    set1[k] = k;
    set2[k] = half + k;
  }
  std::vector<Slot> f1(node_count), f2(node_count);
  for (std::uint32_t n = 0; n < node_count; ++n) {
    f1[n] = Slot{n / modulation_order, n % modulation_order};
    f2[n] = Slot{half + n / modulation_order, n % modulation_order};
  }
  return SubcarrierMap(subcarriers, modulation_order, std::move(set1), std::move(set2),
                       std::move(f1), std::move(f2));
}

Slot round1_pick(const SubcarrierMap& map, Rng& rng)
{
  const std::uint32_t m = map.modulation_order();
  const auto k = static_cast<std::uint32_t>(rng.below(map.slot_count()));
  return Slot{k / m, k % m};
}

} // namespace rcfd::core
