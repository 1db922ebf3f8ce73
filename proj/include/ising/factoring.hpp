#pragma once

#include <cstdint>
#include <vector>

#include "ising/polynomial.hpp"
#include "ising/spin_system.hpp"

namespace ising {

// Role of one spin inside a factoring encoding. x_bit/y_bit carry the bit
// index (bit 0 is the implicit 1 and gets no spin); ancilla roles carry the
// multiplication-grid cell (i = x-bit column, j = y-bit row).
struct SpinRole {
  enum class Kind { x_bit, y_bit, ancilla_sum, ancilla_carry };
  Kind kind = Kind::x_bit;
  int i = 0;
  int j = 0;
};

struct FactoringEncoding {
  std::int64_t n = 0;
  int n_x = 0;  // total bits of x, including the implicit low 1
  int n_y = 0;
  // 0 = full encoding; otherwise edges above this arity were dropped
  int truncated_at = 0;
  std::vector<SpinRole> roles;  // one per spin
  SpinPolynomial objective;     // energy(config) == objective(config)
  SpinSystem system;
};

int bit_length(std::int64_t n);
int default_x_bits(std::int64_t n);  // ceil(L/2), assuming x <= y
int default_y_bits(std::int64_t n);  // L - 1

// Hyper-coupling encoding: f(x,y) = (N - x*y)^2 expanded over spins with
// x_k = (1 - S_k)/2. Spin layout: x bits high to low, then y bits high to low.
// Ground energy is 0 exactly at every factorization representable in the
// given bit widths.
FactoringEncoding encode_direct(std::int64_t n, int n_x, int n_y);
FactoringEncoding encode_direct(std::int64_t n);

// Pairwise-only penalty encoding built from the long-hand multiplication
// grid. Cell (i,j) checks the full-adder equation
//     x_i*y_j + s_in + c_in = s_out + 2*c_out
// via the quadratic penalty (2x + 2y + 4R - 1)^2 - 1 with
// R = s_in + c_in - s_out - 2*c_out, which is nonnegative and zero exactly
// when the equation holds: the product x_i*y_j never appears, so no term
// exceeds arity 2. Coefficients are scaled to integers throughout.
// Wiring: rows run over y bits j = 1..n_y-1; within a row carries ripple
// upward in i (c_in(i,j) = c_out(i-1,j)); sum bits drop to the next row at
// equal weight (s_in(i,j) = s_out(i+1,j-1)), the top cell receiving the
// previous row's top carry (s_in(k-1,j) = c_out(k-1,j-1)). Row 0 is y_0 = 1,
// so s_out(i,0) aliases x_i and has no carries. Boundary bits are clamped
// spins holding the binary digits of N: s_out(0,j) = N_j, s_out(i,n_y-1) =
// N_{i+n_y-1}, c_out(n_x-1,n_y-1) = N_{n_x+n_y-1}.
FactoringEncoding encode_ancilla(std::int64_t n, int n_x, int n_y);
FactoringEncoding encode_ancilla(std::int64_t n);

// Same system with every edge of arity > max_arity dropped.
SpinSystem truncate_hypercouplings(const SpinSystem& system, int max_arity);

struct DecodedFactors {
  std::int64_t x = 1;
  std::int64_t y = 1;
  double penalty = 0.0;
  bool consistent = false;  // penalty == 0
};

DecodedFactors decode_factors(const FactoringEncoding& encoding, const SpinConfiguration& config);

enum class FactorEncoder { direct, ancilla, truncated };

// Build the encoding a factoring experiment runs on. `truncate_arity` only
// applies to FactorEncoder::truncated.
FactoringEncoding make_factoring_encoding(std::int64_t n, FactorEncoder encoder,
                                          int truncate_arity = 2, int n_x = 0, int n_y = 0);

struct FactorSample {
  int start_index = 0;
  std::uint64_t seed = 0;
  std::int64_t x = 1;
  std::int64_t y = 1;
  std::int64_t product = 1;
  double penalty = 0.0;
  double wall_ms = 0.0;
};

struct FactoringDistribution {
  struct Bin {
    std::int64_t product = 0;
    std::uint64_t count = 0;
  };
  std::vector<Bin> bins;  // sorted by product
  std::vector<FactorSample> samples;
  int num_starts = 0;
  double success_probability = 0.0;  // empirical P(x*y == N)
  double entropy_bits = 0.0;         // Shannon entropy of the product bins
  FactorSample best;                 // lowest penalty, ties toward lowest start
};

// One local search per seeded random start, decoded and binned by product.
// Deterministic per seed for any worker count.
FactoringDistribution factoring_experiment(const FactoringEncoding& encoding, int num_starts,
                                           std::uint64_t seed, int max_workers = 1);

}  // namespace ising
