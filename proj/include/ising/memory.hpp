#pragma once

#include <cstddef>

namespace ising {

// Ask the kernel to back a large allocation with huge pages. Random access
// into multi-megabyte arrays is TLB-bound on 4 KiB pages; the heap, state and
// adjacency arrays of a million-spin system all qualify. No-op for small
// ranges and off Linux.
void advise_huge_pages(const void* data, std::size_t bytes);

}  // namespace ising
