#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sboxnl {

/// Signed element type of polarity tables and spectra. |W(u,v)| <= 2^24 fits.
using spectrum_t = std::int32_t;

/// Accounting for every byte of spectrum/column storage allocated through
/// TrackedAllocator. Counters are process-wide and thread-safe.
namespace spectrum_memory {

std::uint64_t current_bytes() noexcept;
std::uint64_t peak_bytes() noexcept;

/// Sets the peak to the current live byte count.
void reset_peak() noexcept;

void record_allocation(std::uint64_t bytes) noexcept;
void record_release(std::uint64_t bytes) noexcept;

}  // namespace spectrum_memory

/// Allocator that reports to spectrum_memory. Value-less construction is
/// default-initialisation so large tables are not zero-filled twice.
template <typename T>
class TrackedAllocator {
 public:
  using value_type = T;

  TrackedAllocator() noexcept = default;
  template <typename U>
  TrackedAllocator(const TrackedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    if (count > std::numeric_limits<std::size_t>::max() / sizeof(T)) {
      throw std::bad_array_new_length();
    }
    T* p = static_cast<T*>(::operator new(count * sizeof(T)));
    spectrum_memory::record_allocation(count * sizeof(T));
    return p;
  }

  void deallocate(T* p, std::size_t count) noexcept {
    spectrum_memory::record_release(count * sizeof(T));
    ::operator delete(p);
  }

  template <typename U>
  void construct(U* p) noexcept {
    ::new (static_cast<void*>(p)) U;
  }
  template <typename U, typename... Args>
  void construct(U* p, Args&&... args) {
    ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
  }

  friend bool operator==(const TrackedAllocator&, const TrackedAllocator&) noexcept {
    return true;
  }
};

using SpectrumStorage = std::vector<spectrum_t, TrackedAllocator<spectrum_t>>;

/// Raised before allocating when a run would exceed its byte budget.
class MemoryBudgetExceeded : public std::runtime_error {
 public:
  MemoryBudgetExceeded(std::uint64_t required, std::uint64_t budget);

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

inline constexpr std::uint64_t unlimited_memory = std::numeric_limits<std::uint64_t>::max();

/// Throws MemoryBudgetExceeded when required > budget.
void check_budget(std::uint64_t required, std::uint64_t budget);

}  // namespace sboxnl
