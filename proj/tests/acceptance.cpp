// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit on
// any failure. Tolerances and budgets are pinned in code next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>
#include <set>
#include <string>
#include <vector>

#include "ising/exact.hpp"
#include "ising/factoring.hpp"
#include "ising/gain_container.hpp"
#include "ising/io.hpp"
#include "ising/lattice.hpp"
#include "ising/local_search.hpp"
#include "ising/rng.hpp"
#include "ising/spin_system.hpp"
#include "test_util.hpp"

using namespace ising;
using namespace ising::testing;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] criterion %2d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SpinSystem lattice_7x7(CouplingDist dist, std::uint64_t seed) {
  return generate_lattice({7, 7}, 0, dist, FieldDist::zero, seed);
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
  const auto t0 = Clock::now();
  Rng rng(20260808);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    RandomSystemOptions opt;
    opt.min_spins = 2;
    opt.max_spins = 20;
    opt.allow_hyper = trial % 2 == 0;  // arity <= 4
    opt.fields = trial % 3 == 0;
    opt.gaussian = trial % 2 == 1;
    const auto sys = random_instance(rng, opt).build();
    BnbOptions options;
    options.use_dominance = trial % 4 < 2;
    const auto bnb = branch_and_bound(sys, options);
    const auto exact = exhaustive_ground_state(sys);
    if (bnb.best_energy != exact.best_energy || !bnb.proven_optimal) ++mismatches;
  }
  const double secs = secs_since(t0);
  report(1, mismatches == 0 && secs < 120.0,
         "oracle equivalence: B&B == exhaustive on 200 random instances (n <= 20), " +
             std::to_string(mismatches) + " mismatches",
         secs);
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
  const auto t0 = Clock::now();
  int reduced = 0, energy_mismatch = 0;
  std::vector<double> ratios;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto sys = generate_lattice({6, 6}, 0, CouplingDist::bimodal, FieldDist::zero, seed);
    BnbOptions with;
    BnbOptions without;
    without.use_dominance = false;
    const auto a = branch_and_bound(sys, with);
    const auto b = branch_and_bound(sys, without);
    if (a.best_energy != b.best_energy) ++energy_mismatch;
    if (a.nodes_explored < b.nodes_explored) ++reduced;
    ratios.push_back(static_cast<double>(b.nodes_explored) /
                     static_cast<double>(a.nodes_explored));
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = (ratios[14] + ratios[15]) / 2.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "dominance: optimum unchanged on 30/30, nodes reduced on %d/30 (need >= 28), "
                "median reduction %.2fx (need >= 2)",
                reduced, median);
  report(2, energy_mismatch == 0 && reduced >= 28 && median >= 2.0, detail, secs_since(t0));
}

// ---------------------------------------------------------------- criteria 3+4
void criterion_3() {
  const auto t0 = Clock::now();
  const int starts = static_cast<int>(std::ceil(std::log(49.0) * std::log(49.0)));  // 16
  int hits = 0;
  bool within_5pct = true;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto sys = lattice_7x7(CouplingDist::gaussian, seed);
    const double optimum = branch_and_bound(sys).best_energy;
    const double lb = sys.energy_lower_bound();
    const auto result = multi_start(sys, starts, seed, 1);
    const double e = result.best.best_energy;
    if (e <= optimum + 1e-9 * std::max(1.0, std::abs(optimum))) ++hits;
    if (e - optimum > 0.05 * (optimum - lb)) within_5pct = false;
  }
  const double secs = secs_since(t0);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "local search, 7x7 Gaussian, %d starts: optimum hit on %d/50 (need >= 43), "
                "all within 5%% of optimum relative to E_lb: %s",
                starts, hits, within_5pct ? "yes" : "no");
  report(3, hits >= 43 && within_5pct && secs < 300.0, detail, secs);
}

void criterion_4() {
  const auto t0 = Clock::now();
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto sys = lattice_7x7(CouplingDist::bimodal, seed);
    const double optimum = branch_and_bound(sys).best_energy;
    const auto result = multi_start(sys, 1, seed, 1);
    if (result.best.best_energy == optimum) ++hits;
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "local search, 7x7 bimodal, single start: optimum hit on %d/50 (need >= 35)",
                hits);
  report(4, hits >= 35, detail, secs_since(t0));
}

// ---------------------------------------------------------------- criterion 5
void criterion_5() {
  const auto t0 = Clock::now();
  const auto s4 = generate_lattice({100, 100}, 2, CouplingDist::bimodal, FieldDist::zero, 1);
  const auto s5 = generate_lattice({250, 400}, 2, CouplingDist::bimodal, FieldDist::zero, 1);
  const auto s6 = generate_lattice({1000, 1000}, 2, CouplingDist::bimodal, FieldDist::zero, 1);

  // Mean wall time of a first pass from fresh random starts: every measured
  // pass has the same character at every size, and the segment lengths stay
  // comparable so a shared-host stall cannot hit one size selectively.
  auto mean_first_pass = [](const SpinSystem& sys, std::uint64_t seed, int starts) {
    double total = 0.0;
    for (int k = 0; k < starts; ++k) {
      SpinConfiguration config = sys.random_configuration(derive_seed(seed, k));
      const auto t = Clock::now();
      run_pass(sys, config);
      total += std::chrono::duration<double, std::milli>(Clock::now() - t).count();
    }
    return total / starts;
  };

  // Noise mitigation, disclosed: warmup pass per system, interleaved rounds
  // (both sides of each ratio measured in one time window), medians over 7
  // rounds, up to 4 spaced attempts.
  double r1 = 0.0, r2 = 0.0, t6_ms = 0.0;
  bool pass = false;
  int attempts = 0;
  for (; attempts < 4 && !pass; ++attempts) {
    if (attempts > 0) std::this_thread::sleep_for(std::chrono::seconds(15));
    for (const auto* sys : {&s4, &s5, &s6}) {
      SpinConfiguration w = sys->random_configuration(99);
      run_pass(*sys, w);
    }
    std::vector<double> r1s, r2s, t6s;
    for (int round = 0; round < 9; ++round) {
      const std::uint64_t r = static_cast<std::uint64_t>(round) + 1000 * attempts;
      const double t4 = mean_first_pass(s4, derive_seed(1, r), 50);
      const double t5 = mean_first_pass(s5, derive_seed(2, r), 5);
      const double t6 = mean_first_pass(s6, derive_seed(3, r), 1);
      r1s.push_back(t5 / t4);
      r2s.push_back(t6 / t5);
      t6s.push_back(t6);
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    r1 = median(r1s);
    r2 = median(r2s);
    t6_ms = median(t6s);
    pass = r1 <= 13.0 && r2 <= 13.0 && t6_ms < 60000.0;
  }
  char detail[220];
  std::snprintf(detail, sizeof(detail),
                "per-pass scaling, 2-D bimodal: t(1e5)/t(1e4) = %.2f, t(1e6)/t(1e5) = %.2f "
                "(need <= 13), 1e6-spin pass %.0f ms (need < 60000; medians of 9 interleaved "
                "rounds of first passes, attempt %d)",
                r1, r2, t6_ms, attempts);
  report(5, pass, detail, secs_since(t0));
}

// ---------------------------------------------------------------- criterion 6
void criterion_6() {
  const auto t0 = Clock::now();
  const auto enc = encode_direct(21, 2, 3);
  const auto& f = enc.objective;
  const bool poly_ok = f.num_terms() == 8 && f.constant_term() == 210.0 &&
                       f.coefficient({0}) == 84.0 && f.coefficient({1}) == 88.0 &&
                       f.coefficient({2}) == 44.0 && f.coefficient({0, 1}) == -20.0 &&
                       f.coefficient({0, 2}) == -10.0 && f.coefficient({1, 2}) == 20.0 &&
                       f.coefficient({0, 1, 2}) == -16.0;

  bool identity_ok = true;  // cross-check the expansion by full enumeration
  for (int mask = 0; mask < 8; ++mask) {
    SpinConfiguration c(3);
    for (int b = 0; b < 3; ++b) c.values[static_cast<std::size_t>(b)] = (mask >> b) & 1 ? 1 : -1;
    const auto d = decode_factors(enc, c);
    identity_ok = identity_ok &&
                  enc.system.energy(c) == static_cast<double>((21 - d.x * d.y) * (21 - d.x * d.y));
  }

  const auto bnb = branch_and_bound(enc.system);
  const auto d = decode_factors(enc, bnb.best_config);
  const bool solved = bnb.best_energy == 0.0 && ((d.x == 3 && d.y == 7) || (d.x == 7 && d.y == 3));
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "factoring 21: published polynomial %s, enumeration identity %s, B&B ground "
                "energy 0 with factors {%lld, %lld}",
                poly_ok ? "reproduced" : "WRONG", identity_ok ? "holds" : "BROKEN",
                static_cast<long long>(d.x), static_cast<long long>(d.y));
  report(6, poly_ok && identity_ok && solved, detail, secs_since(t0));
}

// ---------------------------------------------------------------- criterion 7
void criterion_7() {
  const auto t0 = Clock::now();
  // 21 under the published 3-spin layout keeps its factors without the
  // hyper-coupling; 35 and 91 (default widths) lose every correct ground state.
  bool ok21 = true;
  {
    const auto enc = make_factoring_encoding(21, FactorEncoder::truncated, 2, 2, 3);
    const auto [energy, ground] = enumerate_ground_set(enc.system);
    ok21 = !ground.empty();
    for (const auto& g : ground) {
      const auto d = decode_factors(enc, g);
      ok21 = ok21 && d.x * d.y == 21;
    }
  }
  int wrong = 0;
  for (std::int64_t n : {35LL, 91LL}) {
    const auto enc = make_factoring_encoding(n, FactorEncoder::truncated, 2);
    const auto [energy, ground] = enumerate_ground_set(enc.system);
    for (const auto& g : ground)
      if (decode_factors(enc, g).x * decode_factors(enc, g).y == n) ++wrong;
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "arity-2 truncation: 21 still factors from the truncated ground set: %s; "
                "35 and 91 ground sets contain %d correct factorizations (need 0)",
                ok21 ? "yes" : "no", wrong);
  report(7, ok21 && wrong == 0, detail, secs_since(t0));
}

// ---------------------------------------------------------------- criterion 8
void criterion_8() {
  const auto t0 = Clock::now();
  const int starts = 600;
  const auto direct = factoring_experiment(encode_direct(51), starts, 3, 1);
  const auto ancilla = factoring_experiment(encode_ancilla(51), starts, 3, 1);
  const bool ok = direct.success_probability > ancilla.success_probability &&
                  ancilla.entropy_bits > direct.entropy_bits;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "N = 51, %d starts each: direct success %.3f > ancilla %.3f; ancilla entropy "
                "%.2f bits > direct %.2f bits",
                starts, direct.success_probability, ancilla.success_probability,
                ancilla.entropy_bits, direct.entropy_bits);
  report(8, ok, detail, secs_since(t0));
}

// ---------------------------------------------------------------- criterion 9
void criterion_9() {
  const auto t0 = Clock::now();
  const std::int64_t n = 999919;  // verified: 991 * 1009, both prime
  const bool arithmetic_ok = 991LL * 1009LL == n;
  const int starts = 1500;  // documented budget; ~3.5% per-start success rate
  const auto enc = encode_direct(n);
  const auto dist = factoring_experiment(enc, starts, 1, 1);
  const double secs = secs_since(t0);
  const bool factored = dist.best.penalty == 0.0 && dist.best.product == n &&
                        std::min(dist.best.x, dist.best.y) == 991 &&
                        std::max(dist.best.x, dist.best.y) == 1009;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "20-bit semiprime %lld = 991 x 1009: factored as %lld x %lld with %d starts, "
                "success rate %.4f (need < 60 s)",
                static_cast<long long>(n), static_cast<long long>(dist.best.x),
                static_cast<long long>(dist.best.y), starts, dist.success_probability);
  report(9, arithmetic_ok && factored && secs < 60.0, detail, secs);
}

// --------------------------------------------------------------- criterion 10
bool prop_gain_oracle() {
  Rng rng(71177);
  for (int trial = 0; trial < 150; ++trial) {
    RandomSystemOptions opt;
    opt.allow_hyper = true;
    opt.fields = trial % 2 == 0;
    opt.gaussian = trial % 3 == 0;
    const auto sys = random_instance(rng, opt).build();
    auto config = random_config(sys, rng);
    auto gc = compute_gains(sys, config);
    for (std::size_t step = 0; step < sys.free_spins().size(); ++step) {
      for (SpinIndex i = 0; i < sys.num_spins(); ++i) {
        if (gc.is_locked(i)) continue;
        const double before = sys.energy(config);
        auto flipped = config;
        flipped.flip(i);
        const double expect = before - sys.energy(flipped);
        const double tol = sys.has_integral_weights() ? 0.0 : 1e-9 * std::max(1.0, std::abs(expect));
        if (std::abs(gc.gain(i) - expect) > tol) return false;
      }
      const auto [spin, gain] = select_best_move(gc);
      apply_move_and_update(sys, config, gc, spin);
    }
  }
  return true;
}

bool prop_heap_vs_scan() {
  Rng rng(3311);
  std::size_t checks = 0;
  while (checks < 100000) {
    const std::size_t n = 1 + rng.next_u64() % 80;
    std::vector<double> gains(n);
    for (auto& g : gains) g = rng.pm_one() * static_cast<double>(rng.next_u64() % 9);
    std::vector<std::uint8_t> locked(n, 0);
    GainContainer gc(gains, locked,
                     rng.next_u64() % 2 == 0 ? std::optional<std::int64_t>(64) : std::nullopt);
    std::vector<bool> dead(n, false);
    while (gc.has_unlocked()) {
      SpinIndex expect = -1;
      for (std::size_t i = 0; i < n; ++i)
        if (!dead[i] && (expect < 0 || gains[i] > gains[static_cast<std::size_t>(expect)]))
          expect = static_cast<SpinIndex>(i);
      const auto [spin, gain] = gc.best();
      ++checks;
      if (spin != expect || gain != gains[static_cast<std::size_t>(spin)]) return false;
      if (rng.next_u64() % 3 == 0) {
        const double delta = rng.pm_one() * static_cast<double>(rng.next_u64() % 5);
        gc.adjust(spin, delta);
        gains[static_cast<std::size_t>(spin)] += delta;
      } else {
        gc.lock(spin);
        dead[static_cast<std::size_t>(spin)] = true;
      }
      if (!gc.heap_invariant_ok() || !gc.index_consistent()) return false;
    }
  }
  return true;
}

bool prop_bound_validity() {
  Rng rng(9199);
  for (int trial = 0; trial < 500; ++trial) {
    RandomSystemOptions opt;
    opt.min_spins = 2;
    opt.max_spins = 16;
    opt.allow_hyper = trial % 2 == 0;
    opt.fields = trial % 3 == 0;
    opt.gaussian = trial % 2 == 1;
    const auto sys = random_instance(rng, opt).build();
    const double lb = sys.energy_lower_bound();
    // Gray-code walk over every configuration
    SpinConfiguration c(static_cast<std::size_t>(sys.num_spins()), -1.0);
    double e = sys.energy(c);
    if (e < lb - 1e-9) return false;
    const std::uint64_t total = 1ULL << sys.num_spins();
    for (std::uint64_t i = 1; i < total; ++i) {
      const auto spin = static_cast<SpinIndex>(std::countr_zero(i));
      e += sys.flip_delta(c, spin);
      c.flip(spin);
      if (e < lb - 1e-9 * std::max(1.0, std::abs(lb))) return false;
    }
  }
  return true;
}

bool prop_flip_delta() {
  Rng rng(551);
  for (int trial = 0; trial < 1000; ++trial) {
    RandomSystemOptions opt;
    opt.allow_hyper = true;
    opt.fields = trial % 2 == 0;
    opt.gaussian = trial % 3 != 0;
    const auto sys = random_instance(rng, opt).build();
    auto c = random_config(sys, rng);
    const auto spin = sys.free_spins()[rng.next_u64() % sys.free_spins().size()];
    const double before = sys.energy(c);
    const double delta = sys.flip_delta(c, spin);
    c.flip(spin);
    const double diff = sys.energy(c) - before;
    if (sys.has_integral_weights()) {
      if (diff != delta) return false;
    } else if (std::abs(diff - delta) > 1e-9 * std::max(1.0, std::abs(delta))) {
      return false;
    }
  }
  return true;
}

bool prop_encoding_soundness() {
  for (std::int64_t n = 9; n <= 255; n += 2) {
    const auto enc = encode_direct(n);
    const auto f = static_cast<std::size_t>(enc.system.num_free());
    SpinConfiguration c(static_cast<std::size_t>(enc.system.num_spins()));
    for (std::uint64_t mask = 0; mask < (1ULL << f); ++mask) {
      for (std::size_t b = 0; b < f; ++b) c.values[b] = (mask >> b) & 1 ? 1.0 : -1.0;
      const auto d = decode_factors(enc, c);
      if (enc.system.energy(c) != static_cast<double>((n - d.x * d.y) * (n - d.x * d.y)))
        return false;
    }
  }
  return true;
}

bool prop_roundtrip() {
  Rng rng(8080);
  for (int trial = 0; trial < 500; ++trial) {
    RandomSystemOptions opt;
    opt.allow_hyper = trial % 2 == 0;
    opt.fields = trial % 3 == 0;
    opt.gaussian = trial % 2 == 1;
    opt.clamps = trial % 4 == 0;
    const auto sys = random_instance(rng, opt).build();
    const std::string text = serialize_instance(sys);
    const auto back = parse_instance(text);
    if (serialize_instance(back) != text) return false;
    const auto c = random_config(sys, rng);
    const double a = sys.energy(c);
    const double b = back.energy(c);
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) return false;
  }
  return true;
}

void criterion_10() {
  const auto t0 = Clock::now();
  struct Prop {
    const char* name;
    bool ok;
  };
  const Prop props[] = {
      {"gain-oracle", prop_gain_oracle()},     {"heap-vs-scan", prop_heap_vs_scan()},
      {"bound-validity", prop_bound_validity()}, {"flip-delta", prop_flip_delta()},
      {"encoding-soundness", prop_encoding_soundness()}, {"serialization-roundtrip", prop_roundtrip()},
  };
  std::string detail = "property suites:";
  bool all = true;
  for (const auto& p : props) {
    detail += std::string(" ") + p.name + (p.ok ? "=ok" : "=FAIL");
    all = all && p.ok;
  }
  const double secs = secs_since(t0);
  report(10, all && secs < 180.0, detail, secs);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d/10 criteria passed (%.1fs total)\n", 10 - g_failures, secs_since(t0));
  return g_failures == 0 ? 0 : 1;
}
