#include "alloc_tracker.hpp"

#include <malloc.h>

#include <cstdlib>
#include <new>

namespace {

thread_local long long t_current = 0;
thread_local long long t_peak = 0;

void* tracked_alloc(std::size_t size) {
    void* p = std::malloc(size == 0 ? 1 : size);
    if (!p) throw std::bad_alloc();
    t_current += static_cast<long long>(malloc_usable_size(p));
    if (t_current > t_peak) t_peak = t_current;
    return p;
}

void tracked_free(void* p) noexcept {
    if (!p) return;
    t_current -= static_cast<long long>(malloc_usable_size(p));
    std::free(p);
}

}  // namespace

namespace superframe::alloc_tracker {

void reset() {
    t_current = 0;
    t_peak = 0;
}

std::size_t peak_bytes() { return t_peak > 0 ? static_cast<std::size_t>(t_peak) : 0; }

}  // namespace superframe::alloc_tracker

void* operator new(std::size_t size) { return tracked_alloc(size); }
void* operator new[](std::size_t size) { return tracked_alloc(size); }
void* operator new(std::size_t size, const std::nothrow_t&) noexcept {
    try {
        return tracked_alloc(size);
    } catch (...) {
        return nullptr;
    }
}
void* operator new[](std::size_t size, const std::nothrow_t&) noexcept {
    try {
        return tracked_alloc(size);
    } catch (...) {
        return nullptr;
    }
}
void operator delete(void* p) noexcept { tracked_free(p); }
void operator delete[](void* p) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
