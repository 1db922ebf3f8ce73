#include "ising/memory.hpp"

#include <cstdint>

#if defined(__linux__)
#include <sys/mman.h>
#endif

namespace ising {

void advise_huge_pages(const void* data, std::size_t bytes) {
#if defined(__linux__)
  constexpr std::size_t kThreshold = 8u << 20;
  constexpr std::uintptr_t kPage = 4096;
  if (bytes < kThreshold) return;
  // Round inward to page boundaries; madvise rejects unaligned starts.
  auto start = reinterpret_cast<std::uintptr_t>(data);
  const auto end = (start + bytes) & ~(kPage - 1);
  start = (start + kPage - 1) & ~(kPage - 1);
  if (end > start) madvise(reinterpret_cast<void*>(start), end - start, MADV_HUGEPAGE);
#else
  (void)data;
  (void)bytes;
#endif
}

}  // namespace ising
