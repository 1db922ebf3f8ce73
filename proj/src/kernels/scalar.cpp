#include "ising/kernels.hpp"

namespace ising::kernels {

namespace {

double pair_edge_energy_scalar(const std::int32_t* u, const std::int32_t* v, const double* w,
                               std::size_t m, const double* s) {
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) acc += w[k] * s[u[k]] * s[v[k]];
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void csr_lambda_scalar(const std::int64_t* off, const std::int32_t* nbr, const double* w,
                       std::size_t n, const double* s, double* lambda) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::int64_t k = off[i]; k < off[i + 1]; ++k) acc += w[k] * s[nbr[k]];
    lambda[i] = acc;
  }
}

void gain_from_field_scalar(const double* s, const double* lambda, const double* h, std::size_t n,
                            double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = -2.0 * s[i] * (lambda[i] + h[i]);
}

}  // namespace

extern const Ops kScalarOps;
const Ops kScalarOps{pair_edge_energy_scalar, dot_scalar, csr_lambda_scalar,
                     gain_from_field_scalar};

}  // namespace ising::kernels
