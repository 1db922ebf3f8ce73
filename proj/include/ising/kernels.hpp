#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ising::kernels {

// Data-parallel inner loops behind the energy model and the batch gain
// computation. The scalar table is the reference: plain left-to-right
// accumulation in array order. SIMD variants may reorder partial sums, which
// is exact for integer weights and tolerance-tested for Gaussian ones.

enum class Backend { scalar, avx2 };

struct Ops {
  // sum_k w[k] * s[u[k]] * s[v[k]]
  double (*pair_edge_energy)(const std::int32_t* u, const std::int32_t* v, const double* w,
                             std::size_t m, const double* s);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // CSR local fields: lambda[i] = sum over row i of w[k] * s[nbr[k]]
  void (*csr_lambda)(const std::int64_t* off, const std::int32_t* nbr, const double* w,
                     std::size_t n, const double* s, double* lambda);
  // out[i] = -2 * s[i] * (lambda[i] + h[i])   (elementwise)
  void (*gain_from_field)(const double* s, const double* lambda, const double* h, std::size_t n,
                          double* out);
};

bool supported(Backend backend);
Backend best_supported();
Backend active();
void select(Backend backend);  // throws std::invalid_argument if unsupported
std::string_view name(Backend backend);
Backend parse_backend(std::string_view name);  // "scalar" | "avx2" | "auto"

const Ops& ops();               // active table
const Ops& ops(Backend backend);  // specific table (throws if unsupported)

}  // namespace ising::kernels
