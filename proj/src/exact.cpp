#include "ising/exact.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ising {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

SpinConfiguration start_config_all_down(const SpinSystem& sys) {
  SpinConfiguration config(static_cast<std::size_t>(sys.num_spins()), -1.0);
  for (SpinIndex i = 0; i < sys.num_spins(); ++i)
    if (sys.is_clamped(i)) config.values[static_cast<std::size_t>(i)] = sys.clamp_value(i);
  return config;
}

// Shared incremental state for greedy / B&B: per-spin values, per-hyperedge
// assigned counts and running product of assigned values, per-spin count of
// unassigned neighbors.
struct AssignState {
  const SpinSystem& sys;
  std::vector<std::int8_t> values;
  std::vector<std::int32_t> hyper_count;
  std::vector<std::int8_t> hyper_prod;
  std::vector<std::int32_t> unassigned_nbrs;

  explicit AssignState(const SpinSystem& s)
      : sys(s),
        values(static_cast<std::size_t>(s.num_spins()), 0),
        hyper_count(s.num_hyper_edges(), 0),
        hyper_prod(s.num_hyper_edges(), 1),
        unassigned_nbrs(static_cast<std::size_t>(s.num_spins()), 0) {
    for (SpinIndex i = 0; i < s.num_spins(); ++i)
      unassigned_nbrs[static_cast<std::size_t>(i)] = s.degree(i);
  }

  // Returns the lower-bound increment caused by this assignment (Eqs. of the
  // incremental bound: +2|J| per newly completed unsatisfied edge, +2|h| for a
  // field-opposed value).
  double assign(SpinIndex i, std::int8_t v) {
    const auto u = static_cast<std::size_t>(i);
    values[u] = v;
    double delta = 0.0;
    const double h = sys.magnetizations()[u];
    if (h * v < 0) delta += 2.0 * std::abs(h);
    const auto off = sys.adj_offsets();
    const auto nbr = sys.adj_neighbors();
    const auto w = sys.adj_weights();
    for (std::int64_t t = off[u]; t < off[u + 1]; ++t) {
      const auto j = static_cast<std::size_t>(nbr[static_cast<std::size_t>(t)]);
      if (values[j] != 0 && w[static_cast<std::size_t>(t)] * v * values[j] < 0)
        delta += 2.0 * std::abs(w[static_cast<std::size_t>(t)]);
    }
    for (std::int32_t e : sys.hyper_incident(i)) {
      const auto eu = static_cast<std::size_t>(e);
      hyper_prod[eu] = static_cast<std::int8_t>(hyper_prod[eu] * v);
      if (++hyper_count[eu] == static_cast<std::int32_t>(sys.hyper_members(eu).size()) &&
          sys.hyper_weight(eu) * hyper_prod[eu] < 0)
        delta += 2.0 * std::abs(sys.hyper_weight(eu));
    }
    for (SpinIndex j : sys.neighbors(i)) --unassigned_nbrs[static_cast<std::size_t>(j)];
    return delta;
  }

  void unassign(SpinIndex i) {
    const auto u = static_cast<std::size_t>(i);
    const std::int8_t v = values[u];
    values[u] = 0;
    for (std::int32_t e : sys.hyper_incident(i)) {
      const auto eu = static_cast<std::size_t>(e);
      --hyper_count[eu];
      hyper_prod[eu] = static_cast<std::int8_t>(hyper_prod[eu] * v);
    }
    for (SpinIndex j : sys.neighbors(i)) ++unassigned_nbrs[static_cast<std::size_t>(j)];
  }

  // Flip delta of the partial energy for a spin whose whole neighborhood is
  // assigned (every incident edge complete).
  double settled_flip_delta(SpinIndex i) const {
    const auto u = static_cast<std::size_t>(i);
    double local = 0.0;
    const auto off = sys.adj_offsets();
    const auto nbr = sys.adj_neighbors();
    const auto w = sys.adj_weights();
    for (std::int64_t t = off[u]; t < off[u + 1]; ++t)
      local += w[static_cast<std::size_t>(t)] *
               values[static_cast<std::size_t>(nbr[static_cast<std::size_t>(t)])];
    local *= values[u];
    for (std::int32_t e : sys.hyper_incident(i))
      local += sys.hyper_weight(static_cast<std::size_t>(e)) *
               hyper_prod[static_cast<std::size_t>(e)];
    return 2.0 * local + 2.0 * sys.magnetizations()[u] * values[u];
  }

  // Dominance test for the spin just assigned.
  bool dominated(SpinIndex s) const {
    auto candidate = [&](SpinIndex i) {
      if (values[static_cast<std::size_t>(i)] == 0) return false;
      if (unassigned_nbrs[static_cast<std::size_t>(i)] != 0) return false;
      const double d = settled_flip_delta(i);
      return d < 0.0 || (d == 0.0 && values[static_cast<std::size_t>(i)] == 1);
    };
    if (candidate(s)) return true;
    for (SpinIndex j : sys.neighbors(s))
      if (candidate(j)) return true;
    return false;
  }

  SpinConfiguration materialize() const {
    SpinConfiguration config(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      config.values[i] = static_cast<double>(values[i]);
    return config;
  }

  PartialConfiguration to_partial() const {
    PartialConfiguration p(values.size());
    p.values = values;
    return p;
  }
};

}  // namespace

SolveReport exhaustive_ground_state(const SpinSystem& system) {
  const auto& free = system.free_spins();
  const int f = static_cast<int>(free.size());
  if (f > 30) throw std::invalid_argument("exhaustive search is guarded to 30 free spins");
  const auto t0 = Clock::now();

  SpinConfiguration config = start_config_all_down(system);
  double running = system.energy(config);
  SpinConfiguration best = config;
  double best_running = running;

  SolveReport report;
  report.nodes_explored = 1;
  report.incumbent_energies.push_back(running);
  const std::uint64_t total = 1ULL << f;
  for (std::uint64_t i = 1; i < total; ++i) {
    const SpinIndex spin = free[static_cast<std::size_t>(std::countr_zero(i))];
    running += system.flip_delta(config, spin);
    config.flip(spin);
    ++report.nodes_explored;
    if (running < best_running) {
      best_running = running;
      best = config;
      report.incumbent_energies.push_back(running);
    } else if (running == best_running && config.values < best.values) {
      best = config;
    }
  }

  report.best_config = std::move(best);
  report.best_energy = system.energy(report.best_config);
  report.proven_optimal = true;
  report.wall_ms = ms_since(t0);
  return report;
}

std::pair<double, std::vector<SpinConfiguration>> enumerate_ground_set(const SpinSystem& system) {
  const auto& free = system.free_spins();
  const int f = static_cast<int>(free.size());
  if (f > 26) throw std::invalid_argument("ground-set enumeration is guarded to 26 free spins");

  SpinConfiguration config = start_config_all_down(system);
  double running = system.energy(config);
  double best = running;
  std::vector<SpinConfiguration> ground{config};
  const std::uint64_t total = 1ULL << f;
  for (std::uint64_t i = 1; i < total; ++i) {
    const SpinIndex spin = free[static_cast<std::size_t>(std::countr_zero(i))];
    running += system.flip_delta(config, spin);
    config.flip(spin);
    if (running < best) {
      best = running;
      ground.clear();
      ground.push_back(config);
    } else if (running == best) {
      if (ground.size() >= (1u << 20))
        throw std::runtime_error("ground set too large to enumerate");
      ground.push_back(config);
    }
  }
  return {best, std::move(ground)};
}

std::pair<SpinConfiguration, double> greedy_initial(const SpinSystem& system) {
  AssignState st(system);
  for (SpinIndex i = 0; i < system.num_spins(); ++i)
    if (system.is_clamped(i)) st.assign(i, static_cast<std::int8_t>(system.clamp_value(i)));

  const auto off = system.adj_offsets();
  const auto nbr = system.adj_neighbors();
  const auto w = system.adj_weights();
  for (SpinIndex i : system.free_spins()) {
    const auto u = static_cast<std::size_t>(i);
    double score = system.magnetizations()[u];
    for (std::int64_t t = off[u]; t < off[u + 1]; ++t) {
      const auto j = static_cast<std::size_t>(nbr[static_cast<std::size_t>(t)]);
      if (st.values[j] != 0) score += w[static_cast<std::size_t>(t)] * st.values[j];
    }
    for (std::int32_t e : system.hyper_incident(i)) {
      const auto eu = static_cast<std::size_t>(e);
      if (st.hyper_count[eu] + 1 == static_cast<std::int32_t>(system.hyper_members(eu).size()))
        score += system.hyper_weight(eu) * st.hyper_prod[eu];
    }
    st.assign(i, score >= 0.0 ? std::int8_t{1} : std::int8_t{-1});
  }
  SpinConfiguration config = st.materialize();
  const double energy = system.energy(config);
  return {std::move(config), energy};
}

bool dominance_check(const SpinSystem& system, const PartialConfiguration& partial,
                     SpinIndex just_assigned) {
  if (partial.size() != static_cast<std::size_t>(system.num_spins()))
    throw std::invalid_argument("partial configuration length does not match spin count");
  if (!partial.assigned(just_assigned))
    throw std::invalid_argument("just_assigned spin is not assigned");

  AssignState st(system);
  for (SpinIndex i = 0; i < system.num_spins(); ++i)
    if (partial.assigned(i)) st.assign(i, partial.values[static_cast<std::size_t>(i)]);
  return st.dominated(just_assigned);
}

SolveReport branch_and_bound(const SpinSystem& system, const BnbOptions& options) {
  if (options.node_limit && *options.node_limit == 0)
    throw std::invalid_argument("node limit must be positive");
  if (options.time_limit_ms && *options.time_limit_ms <= 0.0)
    throw std::invalid_argument("time limit must be positive");
  // the first dive recurses num_free levels deep
  if (system.num_free() > 8192)
    throw std::invalid_argument("branch and bound is guarded to 8192 free spins");
  const auto t0 = Clock::now();
  SolveReport report;

  auto [greedy_config, greedy_energy] = greedy_initial(system);
  report.best_config = greedy_config;
  report.best_energy = greedy_energy;
  report.incumbent_energies.push_back(greedy_energy);

  std::vector<SpinIndex> order = system.free_spins();
  if (options.branching == BnbOptions::Branching::degree_desc)
    std::stable_sort(order.begin(), order.end(),
                     [&](SpinIndex a, SpinIndex b) { return system.degree(a) > system.degree(b); });
  const auto n_free = static_cast<int>(order.size());

  AssignState st(system);
  double bound = system.energy_lower_bound();
  for (SpinIndex i = 0; i < system.num_spins(); ++i)
    if (system.is_clamped(i)) bound += st.assign(i, static_cast<std::int8_t>(system.clamp_value(i)));

  bool stopped = false;
  auto limit_fired = [&]() {
    if (options.node_limit && report.nodes_explored >= *options.node_limit) return true;
    if (options.time_limit_ms && (report.nodes_explored & 0x1fff) == 0 &&
        ms_since(t0) > *options.time_limit_ms)
      return true;
    return false;
  };

  auto dfs = [&](auto&& self, int depth) -> void {
    const SpinIndex spin = order[static_cast<std::size_t>(depth)];
    const auto first =
        static_cast<std::int8_t>(greedy_config.values[static_cast<std::size_t>(spin)]);
    for (int branch = 0; branch < 2; ++branch) {
      if (stopped) return;
      const std::int8_t v = branch == 0 ? first : static_cast<std::int8_t>(-first);
      const double delta = st.assign(spin, v);
      bound += delta;
      ++report.nodes_explored;
      if (limit_fired()) stopped = true;

      if (options.validate_bounds && !stopped) {
        const double reference = partial_lower_bound(system, st.to_partial());
        if (std::abs(reference - bound) > 1e-9 * std::max(1.0, std::abs(reference)))
          throw std::logic_error("incremental bound diverged from reference");
      }

      if (!stopped) {
        if (bound >= report.best_energy) {
          ++report.bound_prunes;
        } else if (options.use_dominance && st.dominated(spin)) {
          ++report.dominance_prunes;
        } else if (depth + 1 == n_free) {
          SpinConfiguration leaf = st.materialize();
          const double energy = system.energy(leaf);
          if (energy < report.best_energy) {
            report.best_energy = energy;
            report.best_config = std::move(leaf);
            report.incumbent_energies.push_back(energy);
          }
        } else {
          self(self, depth + 1);
        }
      }
      bound -= delta;
      st.unassign(spin);
    }
  };

  if (n_free > 0)
    dfs(dfs, 0);
  else
    report.nodes_explored = 1;

  report.proven_optimal = !stopped;
  report.wall_ms = ms_since(t0);
  return report;
}

}  // namespace ising
