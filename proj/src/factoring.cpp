#include "ising/factoring.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "ising/local_search.hpp"
#include "ising/rng.hpp"

namespace ising {

namespace {

using Clock = std::chrono::steady_clock;

void check_preconditions(std::int64_t n, int n_x, int n_y) {
  if (n < 9) throw std::invalid_argument("factoring target must be >= 9");
  if (n % 2 == 0) throw std::invalid_argument("factoring target must be odd");
  if (n_x < 1 || n_y < 1) throw std::invalid_argument("bit widths must be >= 1");
  const int free = (n_x - 1) + (n_y - 1);
  if (free < 1) throw std::invalid_argument("encoding needs at least one free bit");
  if (free > 40) throw std::invalid_argument("bit widths too large");
}

int bit_of(std::int64_t n, int t) { return t < 63 && ((n >> t) & 1) ? 1 : 0; }

// Spin ids for the x/y blocks: x bits high to low, then y bits high to low.
SpinIndex x_spin(int n_x, int i) { return static_cast<SpinIndex>(n_x - 1 - i); }
SpinIndex y_spin(int n_x, int n_y, int j) {
  return static_cast<SpinIndex>((n_x - 1) + (n_y - 1) - j);
}

SpinPolynomial value_poly(int bits, bool is_x, int n_x, int n_y) {
  // 1 + sum_{i>=1} 2^i (1 - S)/2  =  2^{bits-1} - sum_i 2^{i-1} S_{spin(i)}
  SpinPolynomial p = SpinPolynomial::constant(static_cast<double>(1LL << (bits - 1)));
  for (int i = 1; i < bits; ++i) {
    const SpinIndex s = is_x ? x_spin(n_x, i) : y_spin(n_x, n_y, i);
    p.add_term({s}, -static_cast<double>(1LL << (i - 1)));
  }
  return p;
}

}  // namespace

int bit_length(std::int64_t n) {
  int b = 0;
  while (n > 0) {
    n >>= 1;
    ++b;
  }
  return b;
}

int default_x_bits(std::int64_t n) { return (bit_length(n) + 1) / 2; }
int default_y_bits(std::int64_t n) { return bit_length(n) - 1; }

FactoringEncoding encode_direct(std::int64_t n, int n_x, int n_y) {
  check_preconditions(n, n_x, n_y);
  const int num_spins = (n_x - 1) + (n_y - 1);

  std::vector<SpinRole> roles(static_cast<std::size_t>(num_spins));
  for (int i = 1; i < n_x; ++i)
    roles[static_cast<std::size_t>(x_spin(n_x, i))] = {SpinRole::Kind::x_bit, i, 0};
  for (int j = 1; j < n_y; ++j)
    roles[static_cast<std::size_t>(y_spin(n_x, n_y, j))] = {SpinRole::Kind::y_bit, j, 0};

  const SpinPolynomial x = value_poly(n_x, true, n_x, n_y);
  const SpinPolynomial y = value_poly(n_y, false, n_x, n_y);
  const SpinPolynomial diff = SpinPolynomial::constant(static_cast<double>(n)) - x * y;
  SpinPolynomial f = diff.squared();

  SpinSystem system = f.to_spin_system(static_cast<SpinIndex>(num_spins));
  return {n, n_x, n_y, 0, std::move(roles), std::move(f), std::move(system)};
}

FactoringEncoding encode_direct(std::int64_t n) {
  return encode_direct(n, default_x_bits(n), default_y_bits(n));
}

FactoringEncoding encode_ancilla(std::int64_t n, int n_x, int n_y) {
  check_preconditions(n, n_x, n_y);
  if (n_y < 2) throw std::invalid_argument("ancilla encoding needs n_y >= 2");
  const int k = n_x;
  const int l = n_y;
  const int base_s = (k - 1) + (l - 1);
  const int base_c = base_s + k * (l - 1);
  const int num_spins = base_c + k * (l - 1);

  auto sum_spin = [&](int i, int j) { return static_cast<SpinIndex>(base_s + (j - 1) * k + i); };
  auto carry_spin = [&](int i, int j) { return static_cast<SpinIndex>(base_c + (j - 1) * k + i); };

  std::vector<SpinRole> roles(static_cast<std::size_t>(num_spins));
  for (int i = 1; i < k; ++i)
    roles[static_cast<std::size_t>(x_spin(n_x, i))] = {SpinRole::Kind::x_bit, i, 0};
  for (int j = 1; j < l; ++j)
    roles[static_cast<std::size_t>(y_spin(n_x, n_y, j))] = {SpinRole::Kind::y_bit, j, 0};
  for (int j = 1; j < l; ++j) {
    for (int i = 0; i < k; ++i) {
      roles[static_cast<std::size_t>(sum_spin(i, j))] = {SpinRole::Kind::ancilla_sum, i, j};
      roles[static_cast<std::size_t>(carry_spin(i, j))] = {SpinRole::Kind::ancilla_carry, i, j};
    }
  }

  // Boundary bits of N, clamped (bit b maps to spin 1 - 2b).
  std::vector<std::pair<SpinIndex, int>> clamps;
  auto clamp_to_bit = [&](SpinIndex s, int t) { clamps.emplace_back(s, 1 - 2 * bit_of(n, t)); };
  for (int j = 1; j < l; ++j) clamp_to_bit(sum_spin(0, j), j);
  for (int i = 1; i < k; ++i) clamp_to_bit(sum_spin(i, l - 1), i + l - 1);
  clamp_to_bit(carry_spin(k - 1, l - 1), k + l - 1);

  // two_b(v) = 2*bit as a polynomial: 1 - S for a spin, 2*beta for a constant.
  auto two_b_spin = [&](SpinIndex s) {
    SpinPolynomial p = SpinPolynomial::constant(1.0);
    p.add_term({s}, -1.0);
    return p;
  };
  auto two_b_const = [&](int bit) { return SpinPolynomial::constant(2.0 * bit); };
  auto two_b_x = [&](int i) { return i == 0 ? two_b_const(1) : two_b_spin(x_spin(n_x, i)); };

  // s_out(i,0) aliases x_i (row 0 is y_0 = 1: accumulator starts at x);
  // row 0 emits no carries.
  auto two_b_sum_out = [&](int i, int j) {
    return j == 0 ? two_b_x(i) : two_b_spin(sum_spin(i, j));
  };
  auto two_b_carry_out = [&](int i, int j) {
    return j == 0 ? two_b_const(0) : two_b_spin(carry_spin(i, j));
  };

  SpinPolynomial penalty;
  for (int j = 1; j < l; ++j) {
    for (int i = 0; i < k; ++i) {
      const SpinPolynomial s_in =
          (i < k - 1) ? two_b_sum_out(i + 1, j - 1) : two_b_carry_out(k - 1, j - 1);
      const SpinPolynomial c_in = (i > 0) ? two_b_carry_out(i - 1, j) : two_b_const(0);
      SpinPolynomial inside = two_b_x(i) + two_b_spin(y_spin(n_x, n_y, j));
      inside += 2.0 * s_in;
      inside += 2.0 * c_in;
      inside -= 2.0 * two_b_sum_out(i, j);
      inside -= 4.0 * two_b_carry_out(i, j);
      inside -= SpinPolynomial::constant(1.0);
      penalty += inside.squared() - SpinPolynomial::constant(1.0);
    }
  }

  SpinSystem system = penalty.to_spin_system(static_cast<SpinIndex>(num_spins), clamps);
  return {n, n_x, n_y, 0, std::move(roles), std::move(penalty), std::move(system)};
}

FactoringEncoding encode_ancilla(std::int64_t n) {
  return encode_ancilla(n, default_x_bits(n), default_y_bits(n));
}

SpinSystem truncate_hypercouplings(const SpinSystem& system, int max_arity) {
  if (max_arity < 2) throw std::invalid_argument("max_arity must be >= 2");
  std::vector<Edge> kept;
  for (const auto& e : system.edges())
    if (static_cast<int>(e.members.size()) <= max_arity) kept.push_back(e);
  std::vector<double> h(system.magnetizations().begin(), system.magnetizations().end());
  std::vector<std::pair<SpinIndex, int>> clamps;
  for (SpinIndex i = 0; i < system.num_spins(); ++i)
    if (system.is_clamped(i)) clamps.emplace_back(i, system.clamp_value(i));
  return SpinSystem(system.num_spins(), std::move(h), std::move(kept),
                    system.constant_offset(), std::move(clamps));
}

DecodedFactors decode_factors(const FactoringEncoding& encoding,
                              const SpinConfiguration& config) {
  DecodedFactors out;
  for (int i = 1; i < encoding.n_x; ++i) {
    const double s = config.values[static_cast<std::size_t>(x_spin(encoding.n_x, i))];
    if (s < 0) out.x += 1LL << i;
  }
  for (int j = 1; j < encoding.n_y; ++j) {
    const double s =
        config.values[static_cast<std::size_t>(y_spin(encoding.n_x, encoding.n_y, j))];
    if (s < 0) out.y += 1LL << j;
  }
  // For the untruncated direct encoding the energy function is (N - xy)^2;
  // evaluating that identity on the decoded integers sidesteps the rounding
  // of the expansion's huge constant term (> 2^53 for ~20-bit N). Ancilla
  // coefficients are small, and truncated systems have no such identity, so
  // those read the system energy.
  const bool direct = encoding.roles.size() ==
                      static_cast<std::size_t>((encoding.n_x - 1) + (encoding.n_y - 1));
  if (direct && encoding.truncated_at == 0) {
    const auto diff = static_cast<__int128>(encoding.n) - static_cast<__int128>(out.x) * out.y;
    out.penalty = static_cast<double>(diff * diff);
  } else {
    out.penalty = encoding.system.energy(config);
  }
  out.consistent = out.penalty == 0.0;
  return out;
}

FactoringEncoding make_factoring_encoding(std::int64_t n, FactorEncoder encoder,
                                          int truncate_arity, int n_x, int n_y) {
  if (n_x == 0) n_x = default_x_bits(n);
  if (n_y == 0) n_y = default_y_bits(n);
  switch (encoder) {
    case FactorEncoder::direct:
      return encode_direct(n, n_x, n_y);
    case FactorEncoder::ancilla:
      return encode_ancilla(n, n_x, n_y);
    case FactorEncoder::truncated: {
      FactoringEncoding enc = encode_direct(n, n_x, n_y);
      SpinPolynomial filtered;
      for (const auto& [m, c] : enc.objective.terms())
        if (static_cast<int>(m.size()) <= truncate_arity) filtered.add_term(m, c);
      enc.system = truncate_hypercouplings(enc.system, truncate_arity);
      enc.objective = std::move(filtered);
      enc.truncated_at = truncate_arity;
      return enc;
    }
  }
  throw std::invalid_argument("unknown encoder");
}

FactoringDistribution factoring_experiment(const FactoringEncoding& encoding, int num_starts,
                                           std::uint64_t seed, int max_workers) {
  if (num_starts < 1) throw std::invalid_argument("num_starts must be >= 1");
  FactoringDistribution dist;
  dist.num_starts = num_starts;
  dist.samples.resize(static_cast<std::size_t>(num_starts));

  const int workers = std::max(1, std::min(max_workers, num_starts));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int s = next.fetch_add(1); s < num_starts; s = next.fetch_add(1)) {
      const auto t0 = Clock::now();
      const std::uint64_t start_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
      SolveReport r =
          local_search(encoding.system, encoding.system.random_configuration(start_seed));
      const DecodedFactors d = decode_factors(encoding, r.best_config);
      dist.samples[static_cast<std::size_t>(s)] = {
          s,
          start_seed,
          d.x,
          d.y,
          d.x * d.y,
          d.penalty,
          std::chrono::duration<double, std::milli>(Clock::now() - t0).count()};
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::map<std::int64_t, std::uint64_t> bins;
  std::uint64_t hits = 0;
  const FactorSample* best = nullptr;
  for (const auto& s : dist.samples) {
    ++bins[s.product];
    if (s.product == encoding.n) ++hits;
    if (!best || s.penalty < best->penalty ||
        (s.penalty == best->penalty && s.start_index < best->start_index))
      best = &s;
  }
  dist.best = *best;
  dist.success_probability = static_cast<double>(hits) / static_cast<double>(num_starts);
  dist.bins.reserve(bins.size());
  for (const auto& [product, count] : bins) {
    dist.bins.push_back({product, count});
    const double p = static_cast<double>(count) / static_cast<double>(num_starts);
    dist.entropy_bits -= p * std::log2(p);
  }
  return dist;
}

}  // namespace ising
