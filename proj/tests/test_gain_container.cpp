#include <algorithm>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "ising/gain_container.hpp"
#include "ising/rng.hpp"

using namespace ising;

namespace {

GainContainer make(std::vector<double> gains, std::vector<std::uint8_t> locked = {}) {
  if (locked.empty()) locked.assign(gains.size(), 0);
  return GainContainer(gains, locked);
}

// linear-scan oracle
std::pair<SpinIndex, double> scan_best(const std::vector<double>& gains,
                                       const std::vector<bool>& locked) {
  SpinIndex best = -1;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (locked[i]) continue;
    if (best < 0 || gains[i] > gains[static_cast<std::size_t>(best)]) best = static_cast<SpinIndex>(i);
  }
  return {best, best < 0 ? 0.0 : gains[static_cast<std::size_t>(best)]};
}

}  // namespace

TEST_CASE("best: tie toward lowest spin index") {
  // gains: spin0 = -1, spin1 = 3, spin2 = 3  ->  spin 1
  auto gc = make({-1.0, 3.0, 3.0});
  CHECK(gc.best() == std::pair<SpinIndex, double>{1, 3.0});
}

TEST_CASE("best: singleton and exhaustion") {
  auto gc = make({2.5});
  CHECK(gc.best() == std::pair<SpinIndex, double>{0, 2.5});
  gc.lock(0);
  CHECK_FALSE(gc.has_unlocked());
  CHECK_THROWS_AS(gc.best(), std::logic_error);
}

TEST_CASE("pre-locked spins never surface") {
  auto gc = make({5.0, 1.0, 4.0}, {1, 0, 0});
  CHECK(gc.best().first == 2);
  CHECK(gc.unlocked_count() == 2);
  CHECK_THROWS_AS(gc.adjust(0, 1.0), std::logic_error);
}

TEST_CASE("packed path: eligibility boundary and extreme gains") {
  // bound within range and integral gains: packed
  {
    GainContainer gc({{-1023.0, 1023.0, 0.0}}, {{0, 0, 0}}, 1023);
    CHECK(gc.packed());
    CHECK(gc.best() == std::pair<SpinIndex, double>{1, 1023.0});
    gc.adjust(1, -2046.0);  // swing to the other extreme
    CHECK(gc.gain(1) == -1023.0);
    CHECK(gc.best() == std::pair<SpinIndex, double>{2, 0.0});
    CHECK(gc.heap_invariant_ok());
  }
  // bound too large for the packed layout: general path, same behavior
  {
    GainContainer gc({{-1023.0, 1023.0, 0.0}}, {{0, 0, 0}}, 1024);
    CHECK_FALSE(gc.packed());
    CHECK(gc.best() == std::pair<SpinIndex, double>{1, 1023.0});
  }
  // non-integral gain disables packing despite the bound
  {
    GainContainer gc({{0.5, 2.0}}, {{0, 0}}, 8);
    CHECK_FALSE(gc.packed());
    CHECK(gc.best() == std::pair<SpinIndex, double>{1, 2.0});
  }
}

TEST_CASE("heap equals linear scan under random adjust/lock traffic") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 60;
    std::vector<double> gains(n);
    for (auto& g : gains) g = rng.pm_one() * static_cast<double>(rng.next_u64() % 7);
    auto gc = make(gains);
    std::vector<bool> locked(n, false);

    for (int step = 0; step < 400; ++step) {
      const auto op = rng.next_u64() % 3;
      const auto spin = static_cast<SpinIndex>(rng.next_u64() % n);
      if (op == 0 && !locked[static_cast<std::size_t>(spin)]) {
        const double delta = rng.pm_one() * static_cast<double>(rng.next_u64() % 5);
        gc.adjust(spin, delta);
        gains[static_cast<std::size_t>(spin)] += delta;
      } else if (op == 1) {
        gc.lock(spin);
        locked[static_cast<std::size_t>(spin)] = true;
      } else {
        const auto expect = scan_best(gains, locked);
        if (expect.first < 0) {
          CHECK_FALSE(gc.has_unlocked());
          break;
        }
        const auto got = gc.best();
        CHECK(got.second == gains[static_cast<std::size_t>(got.first)]);
        CHECK(got.second == expect.second);  // same max; index ties resolved below
        // with equal gains the container must pick the lowest index
        SpinIndex lowest = got.first;
        for (std::size_t i = 0; i < n; ++i)
          if (!locked[i] && gains[i] == got.second) {
            lowest = static_cast<SpinIndex>(i);
            break;
          }
        CHECK(got.first == lowest);
      }
      CHECK(gc.heap_invariant_ok());
      CHECK(gc.index_consistent());
    }
  }
}
