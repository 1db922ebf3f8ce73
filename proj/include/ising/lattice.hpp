#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ising/spin_system.hpp"

namespace ising {

enum class CouplingDist { gaussian, bimodal };
enum class FieldDist { zero, gaussian };

// Hypercubic lattice with nearest-neighbor couplings. With periodic_dims = k,
// exactly the first k dimensions wrap around. Deterministic per seed: fields
// are drawn first (spin order), then couplings in site-major, dimension-minor
// emission order.
SpinSystem generate_lattice(const std::vector<int>& dims, int periodic_dims,
                            CouplingDist coupling, FieldDist field, std::uint64_t seed);

enum class HardnessClass { poly_analytical, poly_mwpm, poly_maxflow, np_hard };

enum class CouplingSigns { mixed, nonnegative };

struct InstanceClass {
  int dimensions = 2;
  int boundary_conditions = 0;  // number of periodic dimensions, <= dimensions
  bool has_magnetization = false;
  CouplingSigns coupling_signs = CouplingSigns::mixed;
};

// Lattice GSD hardness table:
//   nonnegative couplings              -> poly_maxflow (ferromagnetic min-cut)
//   1-D, any bc/field                  -> poly_analytical
//   2-D, bc <= 1, no field             -> poly_mwpm (planar matching)
//   2-D, bc <= 1, field                -> np_hard
//   2-D, bc = 2                        -> np_hard
//   dim > 2                            -> np_hard
HardnessClass classify_hardness(const InstanceClass& instance_class);

std::string_view hardness_name(HardnessClass c);

}  // namespace ising
