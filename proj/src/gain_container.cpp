#include "ising/gain_container.hpp"

#include "ising/memory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ising {

GainContainer::GainContainer(std::span<const double> gains,
                             std::span<const std::uint8_t> pre_locked,
                             std::optional<std::int64_t> integral_bound) {
  const std::size_t n = gains.size();
  state_.reserve(n);
  advise_huge_pages(state_.data(), n * sizeof(std::int32_t));
  state_.assign(n, -1);

  if (integral_bound && *integral_bound >= 0 && *integral_bound <= kMaxPackedBound &&
      n <= kSpinMask) {
    packed_ = true;
    bound_ = *integral_bound;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = gains[i];
      if (g != std::floor(g) || std::abs(g) > static_cast<double>(bound_)) {
        packed_ = false;
        break;
      }
    }
  }

  if (packed_) {
    heap_key_.reserve(n);
    advise_huge_pages(heap_key_.data(), n * sizeof(std::uint32_t));
    for (std::size_t i = 0; i < n; ++i) {
      if (!pre_locked.empty() && pre_locked[i]) continue;
      state_[i] = static_cast<std::int32_t>(heap_key_.size());
      heap_key_.push_back(pack(gains[i], static_cast<SpinIndex>(i)));
    }
    unlocked_ = heap_key_.size();
    if (heap_key_.size() > 1)
      for (std::size_t i = (heap_key_.size() - 2) / kPackedArity + 1; i-- > 0;)
        sift_down_key(i);
    return;
  }

  heap_gain_.reserve(n);
  heap_spin_.reserve(n);
  advise_huge_pages(heap_gain_.data(), n * sizeof(double));
  advise_huge_pages(heap_spin_.data(), n * sizeof(SpinIndex));
  for (std::size_t i = 0; i < n; ++i) {
    if (!pre_locked.empty() && pre_locked[i]) continue;
    state_[i] = static_cast<std::int32_t>(heap_gain_.size());
    heap_gain_.push_back(gains[i]);
    heap_spin_.push_back(static_cast<SpinIndex>(i));
  }
  unlocked_ = heap_gain_.size();
  if (heap_gain_.size() > 1)
    for (std::size_t i = (heap_gain_.size() - 2) / kArity + 1; i-- > 0;) sift_down(i);
}

double GainContainer::gain(SpinIndex spin) const {
  const auto p = state_[static_cast<std::size_t>(spin)];
  if (p < 0) throw std::logic_error("spin has no live heap entry");
  const auto i = static_cast<std::size_t>(p);
  return packed_ ? packed_gain(heap_key_[i]) : heap_gain_[i];
}

void GainContainer::pop_root() {
  // Walk the hole down along best children, then drop the tail element in and
  // let it rise; coming from a leaf it rarely moves.
  if (packed_) {
    const std::size_t last = heap_key_.size() - 1;
    if (last == 0) {
      heap_key_.pop_back();
      return;
    }
    std::size_t hole = 0;
    while (true) {
      const std::size_t first = kPackedArity * hole + 1;
      if (first >= last) break;
      __builtin_prefetch(&heap_key_[std::min(kPackedArity * first + 1, last - 1)]);
      const std::size_t end = std::min(first + kPackedArity, last);
      std::size_t child = first;
      for (std::size_t c = first + 1; c < end; ++c)
        if (heap_key_[c] > heap_key_[child]) child = c;
      place_key(child, hole, heap_key_[child]);
      hole = child;
    }
    place_key(last, hole, heap_key_[last]);
    heap_key_.pop_back();
    sift_up_key(hole);
    return;
  }

  const std::size_t last = heap_gain_.size() - 1;
  if (last == 0) {
    heap_gain_.pop_back();
    heap_spin_.pop_back();
    return;
  }
  std::size_t hole = 0;
  while (true) {
    const std::size_t first = kArity * hole + 1;
    if (first >= last) break;
    const std::size_t end = std::min(first + kArity, last);
    std::size_t child = first;
    for (std::size_t c = first + 1; c < end; ++c)
      if (before(c, child)) child = c;
    place(child, hole, heap_gain_[child], heap_spin_[child]);
    hole = child;
  }
  place(last, hole, heap_gain_[last], heap_spin_[last]);
  heap_gain_.pop_back();
  heap_spin_.pop_back();
  sift_up(hole);
}

void GainContainer::drop_stale_top() {
  while (heap_count() > 0 && slot_stale(0)) pop_root();
}

std::pair<SpinIndex, double> GainContainer::best() {
  drop_stale_top();
  if (heap_count() == 0) throw std::logic_error("all spins are locked");
  if (packed_) return {packed_spin(heap_key_.front()), packed_gain(heap_key_.front())};
  return {heap_spin_.front(), heap_gain_.front()};
}

void GainContainer::lock(SpinIndex spin) {
  auto& st = state_[static_cast<std::size_t>(spin)];
  if (st >= 0) {
    st = -1;
    --unlocked_;
  }
}

void GainContainer::adjust(SpinIndex spin, double delta) {
  const auto p = state_[static_cast<std::size_t>(spin)];
  if (p < 0) throw std::logic_error("gain update on a locked spin");
  const auto i = static_cast<std::size_t>(p);
  if (packed_) {
    // spin bits live below bit 31, so an integral gain delta is a pure
    // high-part addition
    const auto d = static_cast<std::int64_t>(delta);
    if (static_cast<double>(d) != delta)
      throw std::logic_error("non-integral gain delta on a packed container");
    heap_key_[i] = static_cast<std::uint32_t>(
        static_cast<std::int64_t>(heap_key_[i]) + (d << 20));
    if (delta > 0)
      sift_up_key(i);
    else if (delta < 0)
      sift_down_key(i);
    return;
  }
  heap_gain_[i] += delta;
  if (delta > 0)
    sift_up(i);
  else if (delta < 0)
    sift_down(i);
}

void GainContainer::sift_up(std::size_t i) {
  const std::size_t origin = i;
  const double gain = heap_gain_[i];
  const SpinIndex spin = heap_spin_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / kArity;
    if (heap_gain_[parent] > gain ||
        (heap_gain_[parent] == gain && heap_spin_[parent] < spin))
      break;
    place(parent, i, heap_gain_[parent], heap_spin_[parent]);
    i = parent;
  }
  place(origin, i, gain, spin);
}

void GainContainer::sift_down(std::size_t i) {
  const std::size_t origin = i;
  const double gain = heap_gain_[i];
  const SpinIndex spin = heap_spin_[i];
  const std::size_t n = heap_gain_.size();
  while (true) {
    const std::size_t first = kArity * i + 1;
    if (first >= n) break;
    const std::size_t last = std::min(first + kArity, n);
    std::size_t child = first;
    for (std::size_t c = first + 1; c < last; ++c)
      if (before(c, child)) child = c;
    if (gain > heap_gain_[child] ||
        (gain == heap_gain_[child] && spin < heap_spin_[child]))
      break;
    place(child, i, heap_gain_[child], heap_spin_[child]);
    i = child;
  }
  place(origin, i, gain, spin);
}

void GainContainer::sift_up_key(std::size_t i) {
  const std::size_t origin = i;
  const std::uint32_t key = heap_key_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / kPackedArity;
    if (heap_key_[parent] > key) break;
    place_key(parent, i, heap_key_[parent]);
    i = parent;
  }
  place_key(origin, i, key);
}

void GainContainer::sift_down_key(std::size_t i) {
  const std::size_t origin = i;
  const std::uint32_t key = heap_key_[i];
  const std::size_t n = heap_key_.size();
  while (true) {
    const std::size_t first = kPackedArity * i + 1;
    if (first >= n) break;
    const std::size_t last = std::min(first + kPackedArity, n);
    std::size_t child = first;
    for (std::size_t c = first + 1; c < last; ++c)
      if (heap_key_[c] > heap_key_[child]) child = c;
    if (key > heap_key_[child]) break;
    place_key(child, i, heap_key_[child]);
    i = child;
  }
  place_key(origin, i, key);
}

bool GainContainer::heap_invariant_ok() const {
  if (packed_) {
    for (std::size_t i = 1; i < heap_key_.size(); ++i)
      if (heap_key_[i] > heap_key_[(i - 1) / kPackedArity]) return false;
    return true;
  }
  for (std::size_t i = 1; i < heap_gain_.size(); ++i)
    if (before(i, (i - 1) / kArity)) return false;
  return true;
}

bool GainContainer::index_consistent() const {
  std::size_t live = 0;
  for (std::size_t i = 0; i < heap_count(); ++i)
    if (!slot_stale(i)) ++live;
  for (std::size_t s = 0; s < state_.size(); ++s) {
    const auto p = state_[s];
    if (p < 0) continue;
    if (static_cast<std::size_t>(p) >= heap_count()) return false;
    const SpinIndex spin =
        packed_ ? packed_spin(heap_key_[static_cast<std::size_t>(p)])
                : heap_spin_[static_cast<std::size_t>(p)];
    if (spin != static_cast<SpinIndex>(s)) return false;
  }
  return live == unlocked_;
}

}  // namespace ising
