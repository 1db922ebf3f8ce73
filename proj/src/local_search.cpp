#include "ising/local_search.hpp"

#include <atomic>
#include <optional>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ising/kernels.hpp"
#include "ising/rng.hpp"

namespace ising {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

GainContainer compute_gains(const SpinSystem& system, const SpinConfiguration& config) {
  const auto n = static_cast<std::size_t>(system.num_spins());
  if (config.size() != n)
    throw std::invalid_argument("configuration length does not match spin count");
  const double* s = config.values.data();
  const auto& k = kernels::ops();

  // Pairwise part: lambda_i = sum_j J_ij S_j over the adjacency CSR. Scratch
  // is thread_local so a multi-pass search does not re-fault fresh pages.
  static thread_local std::vector<double> lambda, gains;
  lambda.resize(n);
  k.csr_lambda(system.adj_offsets().data(), system.adj_neighbors().data(),
               system.adj_weights().data(), n, s, lambda.data());
  gains.resize(n);
  k.gain_from_field(s, lambda.data(), system.magnetizations().data(), n, gains.data());

  // Hyperedge contributions, and the per-edge product sign cache the pass
  // engine keeps current afterwards.
  std::vector<std::int8_t> prod_cache(system.num_hyper_edges());
  for (std::size_t e = 0; e < system.num_hyper_edges(); ++e) {
    double p = 1.0;
    for (SpinIndex m : system.hyper_members(e)) p *= s[m];
    prod_cache[e] = static_cast<std::int8_t>(p);
    const double contrib = -2.0 * system.hyper_weight(e) * p;
    for (SpinIndex m : system.hyper_members(e)) gains[static_cast<std::size_t>(m)] += contrib;
  }

  std::vector<std::uint8_t> locked(n, 0);
  for (SpinIndex i = 0; i < system.num_spins(); ++i)
    if (system.is_clamped(i)) locked[static_cast<std::size_t>(i)] = 1;

  std::optional<std::int64_t> bound;
  if (system.has_integral_weights())
    bound = static_cast<std::int64_t>(system.max_local_bound());
  GainContainer gc(gains, locked, bound);
  gc.hyper_products() = std::move(prod_cache);
  return gc;
}

std::pair<SpinIndex, double> select_best_move(GainContainer& gc) { return gc.best(); }

double apply_move_and_update(const SpinSystem& system, SpinConfiguration& config,
                             GainContainer& gc, SpinIndex spin) {
  if (spin < 0 || spin >= system.num_spins())
    throw std::invalid_argument("spin index out of range");
  if (gc.is_locked(spin)) throw std::invalid_argument("cannot move a locked spin");
  const double g = gc.gain(spin);
  const double* s = config.values.data();
  const auto u = static_cast<std::size_t>(spin);

  // Neighbor gain adjustments use pre-move values: flipping `spin` changes
  // gain(j) by +4 J_e P_e for every shared edge e (P_e = current product).
  const double su = s[u];
  for (const auto& [j, w] : system.adj_row(spin))
    if (!gc.is_locked(j)) gc.adjust(j, 4.0 * w * su * s[static_cast<std::size_t>(j)]);
  auto& cache = gc.hyper_products();
  for (std::int32_t e : system.hyper_incident(spin)) {
    const auto eu = static_cast<std::size_t>(e);
    const double adj = 4.0 * system.hyper_weight(eu) * cache[eu];
    for (SpinIndex j : system.hyper_members(eu))
      if (j != spin && !gc.is_locked(j)) gc.adjust(j, adj);
    cache[eu] = static_cast<std::int8_t>(-cache[eu]);
  }

  config.flip(spin);
  gc.lock(spin);
  return -g;
}

std::pair<double, PassTrace> run_pass(const SpinSystem& system, SpinConfiguration& config) {
  PassTrace trace;
  trace.start_energy = system.energy(config);
  trace.best_prefix_energy = trace.start_energy;
  trace.best_prefix_length = 0;
  const auto n = static_cast<std::size_t>(system.num_spins());
  const auto n_free = static_cast<std::size_t>(system.num_free());
  trace.moves.reserve(n_free);

  GainContainer gc = compute_gains(system, config);

  // The move loop works on a byte-wide copy of the spins: at 10^6 spins it
  // stays cache-resident where the double array does not. Gain deltas come
  // out bitwise identical (spin products only flip signs), which the
  // pass-composition test pins against the public single-move ops.
  static thread_local std::vector<std::int8_t> s8;
  s8.resize(n);
  for (std::size_t i = 0; i < n; ++i) s8[i] = static_cast<std::int8_t>(config.values[i]);

  auto& cache = gc.hyper_products();
  const bool pm = system.pairwise_pm_one();
  double running = trace.start_energy;
  for (std::size_t k = 0; k < n_free; ++k) {
    const auto [spin, gain] = gc.best();
    const auto u = static_cast<std::size_t>(spin);
    const std::int8_t su = s8[u];
    if (pm) {
      for (const std::int32_t packed : system.adj_row_pm(spin)) {
        const SpinIndex j = packed >> 1;
        if (gc.is_locked(j)) continue;
        const bool aligned = su == s8[static_cast<std::size_t>(j)];
        gc.adjust(j, aligned != static_cast<bool>(packed & 1) ? 4.0 : -4.0);
      }
    } else {
      for (const auto& [j, w] : system.adj_row(spin))
        if (!gc.is_locked(j))
          gc.adjust(j, su == s8[static_cast<std::size_t>(j)] ? 4.0 * w : -(4.0 * w));
    }
    for (std::int32_t e : system.hyper_incident(spin)) {
      const auto eu = static_cast<std::size_t>(e);
      const double adj = 4.0 * system.hyper_weight(eu) * cache[eu];
      for (SpinIndex j : system.hyper_members(eu))
        if (j != spin && !gc.is_locked(j)) gc.adjust(j, adj);
      cache[eu] = static_cast<std::int8_t>(-cache[eu]);
    }
    s8[u] = static_cast<std::int8_t>(-su);
    gc.lock(spin);
    running -= gain;
    trace.moves.push_back({spin, gain, running});
    if (running < trace.best_prefix_energy) {
      trace.best_prefix_energy = running;
      trace.best_prefix_length = k + 1;
    }
  }

  // Undo the suffix after the best prefix, then publish the byte spins back.
  for (std::size_t k = n_free; k > trace.best_prefix_length; --k) {
    auto& v = s8[static_cast<std::size_t>(trace.moves[k - 1].spin)];
    v = static_cast<std::int8_t>(-v);
  }
  for (std::size_t i = 0; i < n; ++i) config.values[i] = static_cast<double>(s8[i]);
  return {trace.best_prefix_energy, trace};
}

SolveReport local_search(const SpinSystem& system, SpinConfiguration start_config) {
  const auto t0 = Clock::now();
  const double eps = system.has_integral_weights() ? 0.0 : 1e-12;
  SolveReport report;
  SpinConfiguration config = std::move(start_config);
  double best = system.energy(config);
  while (true) {
    auto [pass_energy, trace] = run_pass(system, config);
    ++report.passes;
    report.moves += trace.moves.size();
    if (pass_energy < best - eps) {
      best = pass_energy;
    } else {
      break;
    }
  }
  report.best_config = std::move(config);
  report.best_energy = system.energy(report.best_config);
  report.wall_ms = ms_since(t0);
  return report;
}

MultiStartResult multi_start(const SpinSystem& system, int num_starts, std::uint64_t seed,
                             int max_workers) {
  if (num_starts < 1) throw std::invalid_argument("num_starts must be >= 1");
  const auto t0 = Clock::now();
  MultiStartResult result;
  result.samples.resize(static_cast<std::size_t>(num_starts));

  struct WorkerBest {
    double energy = 0.0;
    int start = -1;
    SpinConfiguration config;
    std::uint64_t passes = 0;
    std::uint64_t moves = 0;
  };

  const int workers = std::max(1, std::min(max_workers, num_starts));
  std::vector<WorkerBest> best_per_worker(static_cast<std::size_t>(workers));
  std::atomic<int> next{0};

  auto work = [&](int wid) {
    WorkerBest& wb = best_per_worker[static_cast<std::size_t>(wid)];
    for (int s = next.fetch_add(1); s < num_starts; s = next.fetch_add(1)) {
      const auto ts = Clock::now();
      const std::uint64_t start_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
      SolveReport r = local_search(system, system.random_configuration(start_seed));
      result.samples[static_cast<std::size_t>(s)] = {s, start_seed, r.best_energy, r.passes,
                                                     ms_since(ts)};
      wb.passes += r.passes;
      wb.moves += r.moves;
      if (wb.start < 0 || r.best_energy < wb.energy ||
          (r.best_energy == wb.energy && s < wb.start)) {
        wb.energy = r.best_energy;
        wb.start = s;
        wb.config = std::move(r.best_config);
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int wid = 0; wid < workers; ++wid) pool.emplace_back(work, wid);
    for (auto& t : pool) t.join();
  }

  // Reduce by (energy, start index): independent of scheduling.
  const WorkerBest* winner = nullptr;
  for (const auto& wb : best_per_worker) {
    if (wb.start < 0) continue;
    if (!winner || wb.energy < winner->energy ||
        (wb.energy == winner->energy && wb.start < winner->start))
      winner = &wb;
    result.best.passes += wb.passes;
    result.best.moves += wb.moves;
  }
  result.best.best_config = winner->config;
  result.best.best_energy = winner->energy;
  result.best.wall_ms = ms_since(t0);
  return result;
}

std::vector<double> pass_times_ms(const SpinSystem& system, std::uint64_t seed, int num_passes) {
  SpinConfiguration config = system.random_configuration(seed);
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(num_passes));
  for (int p = 0; p < num_passes; ++p) {
    const auto t0 = Clock::now();
    run_pass(system, config);
    times.push_back(ms_since(t0));
  }
  return times;
}

}  // namespace ising
