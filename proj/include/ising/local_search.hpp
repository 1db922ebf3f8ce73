#pragma once

#include <cstdint>
#include <vector>

#include "ising/gain_container.hpp"
#include "ising/solve_report.hpp"
#include "ising/spin_system.hpp"

namespace ising {

// Record of one pass: the executed move sequence plus the best prefix seen.
// Running energy after move k equals start_energy minus the sum of the first
// k gains; best_prefix_length = 0 means the start state was never improved.
struct PassTrace {
  struct Move {
    SpinIndex spin;
    double gain;
    double energy_after;
  };
  std::vector<Move> moves;
  double start_energy = 0.0;
  double best_prefix_energy = 0.0;
  std::size_t best_prefix_length = 0;
};

// Gain of spin i is energy(config) - energy(config with i flipped); positive
// gain = flipping lowers the energy. Clamped spins come back pre-locked.
// O(n + total edge arity).
GainContainer compute_gains(const SpinSystem& system, const SpinConfiguration& config);

// Max-gain unlocked spin, ties toward lowest index. May be negative
// (hill-climbing move). Throws std::logic_error when everything is locked.
std::pair<SpinIndex, double> select_best_move(GainContainer& gc);

// Flip `spin`, lock it, and apply keyed gain updates to every unlocked spin
// sharing an edge with it (heap sift per update, O(log n) each). Returns the
// applied energy delta (= -gain). Throws on locked spins.
double apply_move_and_update(const SpinSystem& system, SpinConfiguration& config,
                             GainContainer& gc, SpinIndex spin);

// One pass: every free spin moves exactly once, then the configuration is
// rolled back to the best prefix. Returns the best prefix energy; `config`
// holds the corresponding state afterwards. O(n log n).
std::pair<double, PassTrace> run_pass(const SpinSystem& system, SpinConfiguration& config);

// Repeats passes, each starting from the previous pass's best prefix, until a
// pass fails to strictly improve the energy.
SolveReport local_search(const SpinSystem& system, SpinConfiguration start_config);

struct StartSample {
  int start_index = 0;
  std::uint64_t seed = 0;
  double energy = 0.0;
  std::uint64_t passes = 0;
  double wall_ms = 0.0;
};

struct MultiStartResult {
  SolveReport best;
  std::vector<StartSample> samples;
};

// Independent local searches from seeded random starts; start s uses
// derive_seed(seed, s), so the outcome is identical for any worker count.
MultiStartResult multi_start(const SpinSystem& system, int num_starts, std::uint64_t seed,
                             int max_workers = 1);

// Wall time of consecutive passes on a seeded random start (bench support).
std::vector<double> pass_times_ms(const SpinSystem& system, std::uint64_t seed, int num_passes);

}  // namespace ising
