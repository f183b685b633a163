#pragma once

#include <cstddef>
#include <new>
#include <vector>

namespace cloudgan {

/// Allocator handing out 64-byte aligned blocks. Vectorized reductions peel
/// a different number of leading scalars depending on the start address, so a
/// fixed alignment keeps floating point sums identical from run to run.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlign{64};

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlign)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlign); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

template <typename T>
using Buffer = std::vector<T, AlignedAllocator<T>>;

}  // namespace cloudgan
