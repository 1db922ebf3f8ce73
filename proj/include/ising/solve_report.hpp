#pragma once

#include <cstdint>
#include <vector>

#include "ising/spin_system.hpp"

namespace ising {

// Result of any solver run. Exact solvers fill nodes/prune counters and the
// accepted-incumbent trail; the local search fills passes/moves.
struct SolveReport {
  SpinConfiguration best_config;
  double best_energy = 0.0;
  std::uint64_t nodes_explored = 0;
  std::uint64_t bound_prunes = 0;
  std::uint64_t dominance_prunes = 0;
  std::uint64_t passes = 0;
  std::uint64_t moves = 0;
  bool proven_optimal = false;
  double wall_ms = 0.0;
  std::vector<double> incumbent_energies;
};

}  // namespace ising
