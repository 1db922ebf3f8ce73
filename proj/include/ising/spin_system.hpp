#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ising {

using SpinIndex = std::int32_t;

// One coupling term over >= 2 distinct spins. E contributes -weight * prod(S_i).
// Members are stored sorted ascending.
struct Edge {
  std::vector<SpinIndex> members;
  double weight = 0.0;
};

// Dense assignment of +-1 values, one per spin. Values are stored as doubles
// (exactly +-1.0) so the arithmetic kernels consume them without conversion.
struct SpinConfiguration {
  std::vector<double> values;

  SpinConfiguration() = default;
  explicit SpinConfiguration(std::size_t n, double fill = 1.0) : values(n, fill) {}

  std::size_t size() const { return values.size(); }
  double operator[](SpinIndex i) const { return values[static_cast<std::size_t>(i)]; }
  void flip(SpinIndex i) { values[static_cast<std::size_t>(i)] = -values[static_cast<std::size_t>(i)]; }

  friend bool operator==(const SpinConfiguration& a, const SpinConfiguration& b) = default;
};

// Partial assignment used by branch-and-bound: +1 / -1 / 0 = unassigned.
struct PartialConfiguration {
  std::vector<std::int8_t> values;

  PartialConfiguration() = default;
  explicit PartialConfiguration(std::size_t n) : values(n, 0) {}

  std::size_t size() const { return values.size(); }
  bool assigned(SpinIndex i) const { return values[static_cast<std::size_t>(i)] != 0; }
};

// Negate every spin. Preserves energy when all h_i = 0 and every edge has even
// arity (all products of even degree cancel the sign).
SpinConfiguration global_flip(const SpinConfiguration& config);

// Weighted hypergraph over spins, immutable after construction and safe to
// share across threads. Construction validates indices, rejects duplicate
// spins within an edge, merges edges with identical spin sets by adding
// coefficients, and drops zero-weight edges. Edge list order (first
// occurrence) is preserved; it defines the energy summation order.
class SpinSystem {
 public:
  SpinSystem(SpinIndex num_spins, std::vector<double> magnetizations, std::vector<Edge> edges,
             double constant_offset = 0.0,
             std::vector<std::pair<SpinIndex, int>> clamped = {});

  SpinIndex num_spins() const { return n_; }
  std::span<const double> magnetizations() const { return h_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double constant_offset() const { return offset_; }

  // 0 = free, otherwise the fixed +-1 value.
  int clamp_value(SpinIndex i) const { return clamp_[static_cast<std::size_t>(i)]; }
  bool is_clamped(SpinIndex i) const { return clamp_value(i) != 0; }
  const std::vector<SpinIndex>& free_spins() const { return free_; }
  SpinIndex num_free() const { return static_cast<SpinIndex>(free_.size()); }

  bool has_integral_weights() const { return integral_; }
  int max_arity() const { return max_arity_; }

  // max_i 2 * (sum_{e contains i} |J_e| + |h_i|): no flip gain of any
  // configuration can exceed this in magnitude.
  double max_local_bound() const { return max_local_bound_; }

  // E(sigma) = offset - sum_e J_e prod_{i in e} S_i - sum_i h_i S_i.
  // Summation order is fixed: pairwise edges in list order, then hyperedges in
  // list order, then fields in spin order.
  double energy(const SpinConfiguration& config) const;

  // E(sigma with spin flipped) - E(sigma). Throws on clamped spins.
  double flip_delta(const SpinConfiguration& config, SpinIndex spin) const;

  // offset - sum_e |J_e| - sum_i |h_i|; no configuration goes below this.
  double energy_lower_bound() const;

  // Uniform i.i.d. +-1 on free spins, clamped spins fixed; deterministic per seed.
  SpinConfiguration random_configuration(std::uint64_t seed) const;

  // Distinct co-members of any edge containing `i`, sorted ascending.
  std::span<const SpinIndex> neighbors(SpinIndex i) const {
    const auto u = static_cast<std::size_t>(i);
    return {nbr_.data() + nbr_off_[u], static_cast<std::size_t>(nbr_off_[u + 1] - nbr_off_[u])};
  }
  SpinIndex degree(SpinIndex i) const {
    const auto u = static_cast<std::size_t>(i);
    return static_cast<SpinIndex>(nbr_off_[u + 1] - nbr_off_[u]);
  }

  // Pairwise edges as SoA arrays (kernel food), in edge list order.
  std::size_t num_pair_edges() const { return pw_.size(); }
  const std::int32_t* pair_u() const { return pu_.data(); }
  const std::int32_t* pair_v() const { return pv_.data(); }
  const double* pair_w() const { return pw_.data(); }

  // Per-spin pairwise adjacency (CSR). Stored twice: as parallel arrays for
  // the batch kernels and as packed (neighbor, weight) records so the move
  // loop touches one cache line per lattice row.
  struct PairNeighbor {
    SpinIndex nbr;
    double w;
  };
  std::span<const std::int64_t> adj_offsets() const { return adj_off_; }
  std::span<const SpinIndex> adj_neighbors() const { return adj_nbr_; }
  std::span<const double> adj_weights() const { return adj_w_; }
  std::span<const PairNeighbor> adj_row(SpinIndex i) const {
    const auto u = static_cast<std::size_t>(i);
    return {adj_pair_.data() + adj_off_[u],
            static_cast<std::size_t>(adj_off_[u + 1] - adj_off_[u])};
  }

  // When every pairwise coupling is +-1 (bimodal instances), rows are also
  // packed as (neighbor << 1) | (weight < 0): a quarter of the bytes, which
  // keeps million-spin adjacency walks inside the cache.
  bool pairwise_pm_one() const { return pairwise_pm_one_; }
  std::span<const std::int32_t> adj_row_pm(SpinIndex i) const {
    const auto u = static_cast<std::size_t>(i);
    return {adj_pm_.data() + adj_off_[u],
            static_cast<std::size_t>(adj_off_[u + 1] - adj_off_[u])};
  }

  // Hyperedges (arity >= 3), in edge list order.
  std::size_t num_hyper_edges() const { return hyper_w_.size(); }
  double hyper_weight(std::size_t e) const { return hyper_w_[e]; }
  std::span<const SpinIndex> hyper_members(std::size_t e) const {
    return {hyper_members_.data() + hyper_off_[e],
            static_cast<std::size_t>(hyper_off_[e + 1] - hyper_off_[e])};
  }
  // Ids of hyperedges containing spin i.
  std::span<const std::int32_t> hyper_incident(SpinIndex i) const {
    const auto u = static_cast<std::size_t>(i);
    return {hinc_edge_.data() + hinc_off_[u],
            static_cast<std::size_t>(hinc_off_[u + 1] - hinc_off_[u])};
  }

 private:
  SpinIndex n_ = 0;
  std::vector<double> h_;
  std::vector<Edge> edges_;
  double offset_ = 0.0;
  std::vector<std::int8_t> clamp_;
  std::vector<SpinIndex> free_;
  bool integral_ = true;
  bool exact_int_sums_ = false;
  int max_arity_ = 0;
  double max_local_bound_ = 0.0;

  std::vector<std::int32_t> pu_, pv_;
  std::vector<double> pw_;

  std::vector<std::int64_t> adj_off_;
  std::vector<SpinIndex> adj_nbr_;
  std::vector<double> adj_w_;
  std::vector<PairNeighbor> adj_pair_;
  std::vector<std::int32_t> adj_pm_;
  bool pairwise_pm_one_ = true;

  std::vector<std::int64_t> hyper_off_;
  std::vector<SpinIndex> hyper_members_;
  std::vector<double> hyper_w_;
  std::vector<std::int64_t> hinc_off_;
  std::vector<std::int32_t> hinc_edge_;

  std::vector<std::int64_t> nbr_off_;
  std::vector<SpinIndex> nbr_;
};

// Reference partial-energy lower bound: offset - sum_{e not fully assigned} |J_e|
// - sum_{i unassigned} |h_i| + sum_{e fully assigned} (-J_e prod S) +
// sum_{i assigned} (-h_i S_i). Every completion of `partial` has energy >= this.
double partial_lower_bound(const SpinSystem& system, const PartialConfiguration& partial);

}  // namespace ising
