#include "ising/lattice.hpp"

#include <stdexcept>
#include <string>

#include "ising/rng.hpp"

namespace ising {

SpinSystem generate_lattice(const std::vector<int>& dims, int periodic_dims,
                            CouplingDist coupling, FieldDist field, std::uint64_t seed) {
  if (dims.empty()) throw std::invalid_argument("lattice needs at least one dimension");
  if (periodic_dims < 0 || periodic_dims > static_cast<int>(dims.size()))
    throw std::invalid_argument("periodic dimension count must be in [0, #dims]");
  std::int64_t n = 1;
  for (int ext : dims) {
    if (ext < 2) throw std::invalid_argument("lattice extent must be >= 2, got " +
                                             std::to_string(ext));
    n *= ext;
    if (n > (1LL << 31) - 1) throw std::invalid_argument("lattice too large");
  }

  // Row-major strides: last dimension contiguous.
  const int d = static_cast<int>(dims.size());
  std::vector<std::int64_t> stride(static_cast<std::size_t>(d), 1);
  for (int k = d - 2; k >= 0; --k)
    stride[static_cast<std::size_t>(k)] =
        stride[static_cast<std::size_t>(k + 1)] * dims[static_cast<std::size_t>(k + 1)];

  Rng rng(seed);
  std::vector<double> h(static_cast<std::size_t>(n), 0.0);
  if (field == FieldDist::gaussian)
    for (auto& v : h) v = rng.gaussian();

  auto draw = [&] { return coupling == CouplingDist::gaussian ? rng.gaussian() : rng.pm_one(); };

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  std::vector<int> coord(static_cast<std::size_t>(d), 0);
  for (std::int64_t site = 0; site < n; ++site) {
    for (int k = 0; k < d; ++k) {
      const int ext = dims[static_cast<std::size_t>(k)];
      const int c = coord[static_cast<std::size_t>(k)];
      std::int64_t nb;
      if (c + 1 < ext) {
        nb = site + stride[static_cast<std::size_t>(k)];
      } else if (k < periodic_dims) {
        nb = site - static_cast<std::int64_t>(c) * stride[static_cast<std::size_t>(k)];
      } else {
        continue;
      }
      edges.push_back({{static_cast<SpinIndex>(site), static_cast<SpinIndex>(nb)}, draw()});
    }
    // advance row-major coordinates
    for (int k = d - 1; k >= 0; --k) {
      if (++coord[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
      coord[static_cast<std::size_t>(k)] = 0;
    }
  }

  return SpinSystem(static_cast<SpinIndex>(n), std::move(h), std::move(edges));
}

HardnessClass classify_hardness(const InstanceClass& ic) {
  if (ic.boundary_conditions > ic.dimensions)
    throw std::invalid_argument("boundary conditions exceed lattice dimensions");
  if (ic.coupling_signs == CouplingSigns::nonnegative) return HardnessClass::poly_maxflow;
  if (ic.dimensions <= 1) return HardnessClass::poly_analytical;
  if (ic.dimensions == 2) {
    if (ic.boundary_conditions >= 2) return HardnessClass::np_hard;
    return ic.has_magnetization ? HardnessClass::np_hard : HardnessClass::poly_mwpm;
  }
  return HardnessClass::np_hard;
}

std::string_view hardness_name(HardnessClass c) {
  switch (c) {
    case HardnessClass::poly_analytical:
      return "poly_analytical";
    case HardnessClass::poly_mwpm:
      return "poly_mwpm";
    case HardnessClass::poly_maxflow:
      return "poly_maxflow";
    case HardnessClass::np_hard:
      return "np_hard";
  }
  return "?";
}

}  // namespace ising
