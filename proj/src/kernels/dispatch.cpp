#include "ising/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace ising::kernels {

extern const Ops kScalarOps;
#if defined(ISING_HAVE_AVX2)
extern const Ops kAvx2Ops;
#endif

namespace {

bool cpu_has_avx2() {
#if defined(ISING_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

void init_once() {
  if (g_active.load(std::memory_order_acquire) == nullptr) {
    const Backend b = best_supported();
#if defined(ISING_HAVE_AVX2)
    if (b == Backend::avx2) {
      g_active.store(&kAvx2Ops, std::memory_order_release);
      g_backend.store(b);
      return;
    }
#endif
    g_active.store(&kScalarOps, std::memory_order_release);
    g_backend.store(Backend::scalar);
  }
}

}  // namespace

bool supported(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

Backend best_supported() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

Backend active() {
  init_once();
  return g_backend.load();
}

void select(Backend backend) {
  if (!supported(backend))
    throw std::invalid_argument("kernel backend not supported on this machine: " +
                                std::string(name(backend)));
#if defined(ISING_HAVE_AVX2)
  if (backend == Backend::avx2) {
    g_active.store(&kAvx2Ops, std::memory_order_release);
    g_backend.store(backend);
    return;
  }
#endif
  g_active.store(&kScalarOps, std::memory_order_release);
  g_backend.store(Backend::scalar);
}

std::string_view name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "?";
}

Backend parse_backend(std::string_view s) {
  if (s == "scalar") return Backend::scalar;
  if (s == "avx2") return Backend::avx2;
  if (s == "auto") return best_supported();
  throw std::invalid_argument("unknown kernel backend: " + std::string(s));
}

const Ops& ops() {
  init_once();
  return *g_active.load(std::memory_order_acquire);
}

const Ops& ops(Backend backend) {
  if (!supported(backend))
    throw std::invalid_argument("kernel backend not supported on this machine: " +
                                std::string(name(backend)));
#if defined(ISING_HAVE_AVX2)
  if (backend == Backend::avx2) return kAvx2Ops;
#endif
  return kScalarOps;
}

}  // namespace ising::kernels
