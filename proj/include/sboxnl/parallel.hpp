#pragma once

#include <cstdint>
#include <vector>

#include "sboxnl/walsh.hpp"

namespace sboxnl {

/// Half-open range of output masks [begin, end).
struct ColumnRange {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  std::uint32_t size() const noexcept { return end - begin; }
  friend bool operator==(const ColumnRange&, const ColumnRange&) = default;
};

/// Contiguous ranges covering masks 1..total_columns exactly once.
struct ColumnPartition {
  std::vector<ColumnRange> ranges;
  unsigned worker_count = 0;
};

/// Balanced split: sizes differ by at most one, larger ranges first. With
/// more workers than columns every column gets its own range.
/// Throws std::invalid_argument when either argument is zero.
ColumnPartition partition_columns(std::uint64_t total_columns, unsigned workers);

/// Hardware execution units, at least 1.
unsigned default_worker_count();

/// Fused transform with columns split across a per-call pool of workers.
/// Results are bit-identical to fwht_fused for every worker count. In retain
/// mode each worker fills then transforms its own rows; the timing covers
/// the transform phase only. Stream mode gives each worker one column buffer.
TransformResult fwht_parallel(const SBox& s, unsigned workers, SpectrumMode mode,
                              std::uint64_t max_bytes = unlimited_memory,
                              PhaseTiming* timing = nullptr);

}  // namespace sboxnl
