#include "ising/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "ising/kernels.hpp"
#include "ising/memory.hpp"
#include "ising/rng.hpp"

namespace ising {

namespace {

bool is_integral(double x) { return x == std::floor(x) && std::abs(x) < 0x1p53; }

}  // namespace

SpinConfiguration global_flip(const SpinConfiguration& config) {
  SpinConfiguration out = config;
  for (auto& v : out.values) v = -v;
  return out;
}

SpinSystem::SpinSystem(SpinIndex num_spins, std::vector<double> magnetizations,
                       std::vector<Edge> edges, double constant_offset,
                       std::vector<std::pair<SpinIndex, int>> clamped)
    : n_(num_spins), h_(std::move(magnetizations)), offset_(constant_offset) {
  if (n_ < 0) throw std::invalid_argument("negative spin count");
  if (h_.empty()) h_.assign(static_cast<std::size_t>(n_), 0.0);
  if (h_.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("magnetization vector length does not match spin count");

  clamp_.assign(static_cast<std::size_t>(n_), 0);
  for (const auto& [spin, value] : clamped) {
    if (spin < 0 || spin >= n_)
      throw std::invalid_argument("clamped spin index out of range: " + std::to_string(spin));
    if (value != 1 && value != -1)
      throw std::invalid_argument("clamp value must be +1 or -1");
    clamp_[static_cast<std::size_t>(spin)] = static_cast<std::int8_t>(value);
  }
  for (SpinIndex i = 0; i < n_; ++i)
    if (clamp_[static_cast<std::size_t>(i)] == 0) free_.push_back(i);

  // Validate, sort members, merge duplicate spin sets (first occurrence keeps
  // its slot), drop zero-weight edges.
  std::map<std::vector<SpinIndex>, std::size_t> seen;
  edges_.reserve(edges.size());
  for (auto& e : edges) {
    if (e.members.size() < 2) throw std::invalid_argument("edge arity must be >= 2");
    std::sort(e.members.begin(), e.members.end());
    for (std::size_t k = 0; k < e.members.size(); ++k) {
      if (e.members[k] < 0 || e.members[k] >= n_)
        throw std::invalid_argument("edge spin index out of range: " +
                                    std::to_string(e.members[k]));
      if (k > 0 && e.members[k] == e.members[k - 1])
        throw std::invalid_argument("duplicate spin in edge: " + std::to_string(e.members[k]));
    }
    auto [it, inserted] = seen.emplace(e.members, edges_.size());
    if (inserted) {
      edges_.push_back(std::move(e));
    } else {
      edges_[it->second].weight += e.weight;
    }
  }
  std::erase_if(edges_, [](const Edge& e) { return e.weight == 0.0; });

  integral_ = is_integral(offset_);
  for (double hv : h_) integral_ = integral_ && is_integral(hv);

  // Split pairwise / hyper, build incidence structures.
  std::vector<std::vector<std::pair<SpinIndex, double>>> adj(static_cast<std::size_t>(n_));
  std::vector<std::vector<std::int32_t>> hinc(static_cast<std::size_t>(n_));
  hyper_off_.push_back(0);
  for (const auto& e : edges_) {
    integral_ = integral_ && is_integral(e.weight);
    max_arity_ = std::max(max_arity_, static_cast<int>(e.members.size()));
    if (e.members.size() == 2) {
      pu_.push_back(e.members[0]);
      pv_.push_back(e.members[1]);
      pw_.push_back(e.weight);
      adj[static_cast<std::size_t>(e.members[0])].emplace_back(e.members[1], e.weight);
      adj[static_cast<std::size_t>(e.members[1])].emplace_back(e.members[0], e.weight);
    } else {
      const auto id = static_cast<std::int32_t>(hyper_w_.size());
      hyper_w_.push_back(e.weight);
      hyper_members_.insert(hyper_members_.end(), e.members.begin(), e.members.end());
      hyper_off_.push_back(static_cast<std::int64_t>(hyper_members_.size()));
      for (SpinIndex m : e.members) hinc[static_cast<std::size_t>(m)].push_back(id);
    }
  }

  std::size_t total_adj = 0;
  for (const auto& row : adj) total_adj += row.size();
  adj_nbr_.reserve(total_adj);
  adj_w_.reserve(total_adj);
  adj_pair_.reserve(total_adj);
  adj_pm_.reserve(total_adj);
  nbr_.reserve(total_adj);
  advise_huge_pages(adj_nbr_.data(), total_adj * sizeof(SpinIndex));
  advise_huge_pages(adj_w_.data(), total_adj * sizeof(double));
  advise_huge_pages(adj_pair_.data(), total_adj * sizeof(PairNeighbor));
  advise_huge_pages(adj_pm_.data(), total_adj * sizeof(std::int32_t));

  adj_off_.assign(1, 0);
  hinc_off_.assign(1, 0);
  nbr_off_.assign(1, 0);
  std::vector<SpinIndex> scratch;
  for (SpinIndex i = 0; i < n_; ++i) {
    const auto u = static_cast<std::size_t>(i);
    for (const auto& [j, w] : adj[u]) {
      adj_nbr_.push_back(j);
      adj_w_.push_back(w);
      adj_pair_.push_back({j, w});
      if (w != 1.0 && w != -1.0) pairwise_pm_one_ = false;
      adj_pm_.push_back((j << 1) | (w < 0.0 ? 1 : 0));
    }
    adj_off_.push_back(static_cast<std::int64_t>(adj_nbr_.size()));
    for (std::int32_t e : hinc[u]) hinc_edge_.push_back(e);
    hinc_off_.push_back(static_cast<std::int64_t>(hinc_edge_.size()));

    scratch.clear();
    for (const auto& [j, w] : adj[u]) scratch.push_back(j);
    for (std::int32_t e : hinc[u])
      for (SpinIndex m : hyper_members(static_cast<std::size_t>(e)))
        if (m != i) scratch.push_back(m);
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    nbr_.insert(nbr_.end(), scratch.begin(), scratch.end());
    nbr_off_.push_back(static_cast<std::int64_t>(nbr_.size()));

    double local = std::abs(h_[u]);
    for (const auto& [j, w] : adj[u]) local += std::abs(w);
    for (std::int32_t e : hinc[u]) local += std::abs(hyper_w_[static_cast<std::size_t>(e)]);
    max_local_bound_ = std::max(max_local_bound_, 2.0 * local);
  }
  if (!pairwise_pm_one_) {
    adj_pm_.clear();
    adj_pm_.shrink_to_fit();
  }

  double abs_mass = std::abs(offset_);
  for (const auto& e : edges_) abs_mass += std::abs(e.weight);
  for (double hv : h_) abs_mass += std::abs(hv);
  exact_int_sums_ = integral_ && abs_mass < 4.0e18;
}

double SpinSystem::energy(const SpinConfiguration& config) const {
  if (config.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("configuration length does not match spin count");
  const double* s = config.values.data();

  // Integral-weight systems are summed in int64: the factoring polynomials
  // carry coefficients near N^2 whose double partial sums cross 2^53, and the
  // ground energy of (N - xy)^2 must come out exactly 0.
  if (integral_ && exact_int_sums_) {
    std::int64_t acc = static_cast<std::int64_t>(offset_);
    for (std::size_t k = 0; k < pw_.size(); ++k) {
      const auto w = static_cast<std::int64_t>(pw_[k]);
      acc -= (s[pu_[k]] == s[pv_[k]]) ? w : -w;
    }
    for (std::size_t e = 0; e < hyper_w_.size(); ++e) {
      double p = 1.0;
      for (SpinIndex m : hyper_members(e)) p *= s[m];
      const auto w = static_cast<std::int64_t>(hyper_w_[e]);
      acc -= p > 0 ? w : -w;
    }
    for (std::size_t i = 0; i < h_.size(); ++i) {
      const auto hv = static_cast<std::int64_t>(h_[i]);
      acc -= s[i] > 0 ? hv : -hv;
    }
    return static_cast<double>(acc);
  }

  const auto& k = kernels::ops();
  double coupling = k.pair_edge_energy(pu_.data(), pv_.data(), pw_.data(), pw_.size(), s);
  for (std::size_t e = 0; e < hyper_w_.size(); ++e) {
    double p = 1.0;
    for (SpinIndex m : hyper_members(e)) p *= s[m];
    coupling += hyper_w_[e] * p;
  }
  const double field = k.dot(h_.data(), s, h_.size());
  return offset_ - coupling - field;
}

double SpinSystem::flip_delta(const SpinConfiguration& config, SpinIndex spin) const {
  if (config.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("configuration length does not match spin count");
  if (spin < 0 || spin >= n_) throw std::invalid_argument("spin index out of range");
  if (is_clamped(spin)) throw std::invalid_argument("cannot flip clamped spin");
  const auto u = static_cast<std::size_t>(spin);
  const double* s = config.values.data();
  double local = 0.0;
  for (const auto& [nbr, w] : adj_row(spin)) local += w * s[nbr];
  local *= s[u];
  for (std::int32_t e : hyper_incident(spin)) {
    double p = 1.0;
    for (SpinIndex m : hyper_members(static_cast<std::size_t>(e))) p *= s[m];
    local += hyper_w_[static_cast<std::size_t>(e)] * p;
  }
  return 2.0 * local + 2.0 * h_[u] * s[u];
}

double SpinSystem::energy_lower_bound() const {
  double bound = offset_;
  for (const auto& e : edges_) bound -= std::abs(e.weight);
  for (double hv : h_) bound -= std::abs(hv);
  return bound;
}

SpinConfiguration SpinSystem::random_configuration(std::uint64_t seed) const {
  Rng rng(seed);
  SpinConfiguration config(static_cast<std::size_t>(n_));
  for (SpinIndex i = 0; i < n_; ++i) {
    const auto v = clamp_[static_cast<std::size_t>(i)];
    config.values[static_cast<std::size_t>(i)] = (v != 0) ? static_cast<double>(v) : rng.pm_one();
  }
  return config;
}

double partial_lower_bound(const SpinSystem& system, const PartialConfiguration& partial) {
  if (partial.size() != static_cast<std::size_t>(system.num_spins()))
    throw std::invalid_argument("partial configuration length does not match spin count");
  double bound = system.constant_offset();
  for (const auto& e : system.edges()) {
    double p = 1.0;
    bool full = true;
    for (SpinIndex m : e.members) {
      const auto v = partial.values[static_cast<std::size_t>(m)];
      if (v == 0) {
        full = false;
        break;
      }
      p *= v;
    }
    bound += full ? -e.weight * p : -std::abs(e.weight);
  }
  const auto h = system.magnetizations();
  for (SpinIndex i = 0; i < system.num_spins(); ++i) {
    const auto v = partial.values[static_cast<std::size_t>(i)];
    const double hi = h[static_cast<std::size_t>(i)];
    bound += (v == 0) ? -std::abs(hi) : -hi * v;
  }
  return bound;
}

}  // namespace ising
