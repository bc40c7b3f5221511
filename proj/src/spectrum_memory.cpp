#include "sboxnl/spectrum_memory.hpp"

#include <atomic>

namespace sboxnl {
namespace spectrum_memory {
namespace {

std::atomic<std::uint64_t> g_current{0};
std::atomic<std::uint64_t> g_peak{0};

}  // namespace

std::uint64_t current_bytes() noexcept { return g_current.load(); }

std::uint64_t peak_bytes() noexcept { return g_peak.load(); }

void reset_peak() noexcept { g_peak.store(g_current.load()); }

void record_allocation(std::uint64_t bytes) noexcept {
  const std::uint64_t now = g_current.fetch_add(bytes) + bytes;
  std::uint64_t seen = g_peak.load();
  while (now > seen && !g_peak.compare_exchange_weak(seen, now)) {
  }
}

void record_release(std::uint64_t bytes) noexcept { g_current.fetch_sub(bytes); }

}  // namespace spectrum_memory

MemoryBudgetExceeded::MemoryBudgetExceeded(std::uint64_t required, std::uint64_t budget)
    : std::runtime_error("memory budget exceeded: need " + std::to_string(required) +
                         " bytes, budget is " + std::to_string(budget) + " bytes"),
      required_(required),
      budget_(budget) {}

void check_budget(std::uint64_t required, std::uint64_t budget) {
  if (required > budget) {
    throw MemoryBudgetExceeded(required, budget);
  }
}

}  // namespace sboxnl
