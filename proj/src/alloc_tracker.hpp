#pragma once

#include <cstddef>

// Per-thread heap high-water mark, fed by the replaced global operator new.
// Informational only: frees of blocks allocated on another thread are
// counted against the freeing thread.
namespace superframe::alloc_tracker {

void reset();
std::size_t peak_bytes();

}  // namespace superframe::alloc_tracker
