#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ising/spin_system.hpp"

namespace ising {

// Indexed max-heap of per-spin flip gains, ordered by gain with ties toward
// the lower spin index. state_[spin] holds the spin's heap slot while it is
// unlocked, -1 otherwise, so keyed updates cost O(log n) and the lock flag
// and position index share one cache line per spin. Locking is lazy: a locked
// spin's entry stays behind as a stale record (its state no longer points at
// it) and is discarded when it surfaces at the top.
//
// Layout is driven by the million-spin pass. Integral-weight systems whose
// gains fit a small bound (every 2-D bimodal lattice) use a packed
// representation: (gain + bound) << 20 | (2^20 - 1 - spin) in one uint32, so
// an entry is 4 bytes, a child scan is one branchless comparison per child,
// and the heap is 8-ary (half a cache line per scan). Everything else takes
// the general path: parallel double/int arrays, 4-ary.
class GainContainer {
 public:
  GainContainer() = default;
  // integral_bound: when set and every gain is an integer of magnitude <=
  // bound (and all future adjust deltas keep it so), enables the packed path.
  GainContainer(std::span<const double> gains, std::span<const std::uint8_t> pre_locked,
                std::optional<std::int64_t> integral_bound = std::nullopt);

  std::size_t size() const { return state_.size(); }
  std::size_t unlocked_count() const { return unlocked_; }
  bool has_unlocked() const { return unlocked_ > 0; }
  bool is_locked(SpinIndex spin) const { return state_[static_cast<std::size_t>(spin)] < 0; }
  bool packed() const { return packed_; }

  // Current gain of an unlocked spin.
  double gain(SpinIndex spin) const;

  // Max-gain unlocked spin, ties toward lowest index. Discards stale tops.
  // Throws std::logic_error when every spin is locked.
  std::pair<SpinIndex, double> best();

  // Mark a spin locked for the rest of the pass. Its heap entry (if any)
  // becomes stale.
  void lock(SpinIndex spin);

  // Keyed gain update: gain(spin) += delta, then sift. Spin must be unlocked.
  void adjust(SpinIndex spin, double delta);

  // Per-hyperedge product signs, owned here so one pass engine carries all of
  // its incremental state. Maintained by apply_move_and_update.
  std::vector<std::int8_t>& hyper_products() { return hyper_products_; }
  const std::vector<std::int8_t>& hyper_products() const { return hyper_products_; }

  // Test support: structural invariants.
  bool heap_invariant_ok() const;
  bool index_consistent() const;

 private:
  static constexpr std::size_t kArity = 4;        // general path
  static constexpr std::size_t kPackedArity = 16;  // packed path
  static constexpr std::uint32_t kSpinMask = 0xfffffu;  // 20 bits
  static constexpr std::int64_t kMaxPackedBound = 1023;

  std::uint32_t pack(double gain, SpinIndex spin) const {
    const auto g = static_cast<std::int64_t>(gain);
    return (static_cast<std::uint32_t>(g + bound_) << 20) |
           (kSpinMask - static_cast<std::uint32_t>(spin));
  }
  SpinIndex packed_spin(std::uint32_t key) const {
    return static_cast<SpinIndex>(kSpinMask - (key & kSpinMask));
  }
  double packed_gain(std::uint32_t key) const {
    return static_cast<double>(static_cast<std::int64_t>(key >> 20) - bound_);
  }

  // true when entry a ranks strictly above entry b (general path)
  bool before(std::size_t a, std::size_t b) const {
    return heap_gain_[a] > heap_gain_[b] ||
           (heap_gain_[a] == heap_gain_[b] && heap_spin_[a] < heap_spin_[b]);
  }

  // Moves an entry from one slot to another. The state update is conditional:
  // stale entries (locked spins) keep state -1 while they drift through sift
  // paths, so a lock can never be resurrected.
  void place(std::size_t from, std::size_t to, double gain, SpinIndex spin) {
    heap_gain_[to] = gain;
    heap_spin_[to] = spin;
    auto& st = state_[static_cast<std::size_t>(spin)];
    if (st == static_cast<std::int32_t>(from)) st = static_cast<std::int32_t>(to);
  }
  void place_key(std::size_t from, std::size_t to, std::uint32_t key) {
    heap_key_[to] = key;
    auto& st = state_[static_cast<std::size_t>(packed_spin(key))];
    if (st == static_cast<std::int32_t>(from)) st = static_cast<std::int32_t>(to);
  }

  // Stale entries belong to locked spins; their state no longer points at
  // their slot.
  bool slot_stale(std::size_t slot) const {
    const SpinIndex spin = packed_ ? packed_spin(heap_key_[slot]) : heap_spin_[slot];
    return state_[static_cast<std::size_t>(spin)] != static_cast<std::int32_t>(slot);
  }

  void sift_up(std::size_t i);
  void sift_down(std::size_t i);
  void sift_up_key(std::size_t i);
  void sift_down_key(std::size_t i);
  void pop_root();
  void drop_stale_top();
  std::size_t heap_count() const { return packed_ ? heap_key_.size() : heap_gain_.size(); }

  bool packed_ = false;
  std::int64_t bound_ = 0;
  std::vector<std::uint32_t> heap_key_;  // packed path
  std::vector<double> heap_gain_;        // general path
  std::vector<SpinIndex> heap_spin_;
  std::vector<std::int32_t> state_;  // heap slot when unlocked, -1 otherwise
  std::size_t unlocked_ = 0;
  std::vector<std::int8_t> hyper_products_;
};

}  // namespace ising
