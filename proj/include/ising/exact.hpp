#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ising/solve_report.hpp"
#include "ising/spin_system.hpp"

namespace ising {

struct BnbOptions {
  bool use_dominance = true;
  enum class Branching { index, degree_desc } branching = Branching::degree_desc;
  std::optional<std::uint64_t> node_limit;
  std::optional<double> time_limit_ms;
  // Debug: cross-check the incremental bound against partial_lower_bound at
  // every node. Small instances only.
  bool validate_bounds = false;
};

// Gray-code walk over all 2^f assignments of the free spins, single flip per
// step via flip_delta. Ties break toward the lexicographically smallest
// configuration (-1 < +1). Throws above 30 free spins.
SolveReport exhaustive_ground_state(const SpinSystem& system);

// All configurations attaining the minimum energy, same walk. Guarded to 26
// free spins and 1<<20 collected configurations.
std::pair<double, std::vector<SpinConfiguration>> enumerate_ground_set(const SpinSystem& system);

// Single sweep in index order; each free spin takes the value minimizing its
// incremental energy against already-assigned neighbors and its field term,
// ties toward +1. Linear in the edge count.
std::pair<SpinConfiguration, double> greedy_initial(const SpinSystem& system);

// Depth-first branch and bound with the incremental lower-bound updates and
// optional prune-by-dominance. Initial incumbent from greedy_initial. When no
// limit fires the result is a proven optimum.
SolveReport branch_and_bound(const SpinSystem& system, const BnbOptions& options = {});

// Prune test after assigning `just_assigned`: F_s is the set of assigned spins
// in {s} union N(s) whose entire neighborhood is assigned. Returns true when
// flipping some member of F_s strictly lowers the partial energy, or ties it
// while producing a lexicographically smaller assignment (flip from +1 to -1).
bool dominance_check(const SpinSystem& system, const PartialConfiguration& partial,
                     SpinIndex just_assigned);

}  // namespace ising
