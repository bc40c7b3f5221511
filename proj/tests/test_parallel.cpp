#include <doctest.h>

#include <algorithm>

#include "sboxnl/nonlinearity.hpp"
#include "sboxnl/parallel.hpp"
#include "support/aes.hpp"

using namespace sboxnl;
using sboxnl::testing::aes_sbox;

namespace {

std::vector<std::uint32_t> sizes(const ColumnPartition& p) {
  std::vector<std::uint32_t> out;
  for (const auto& r : p.ranges) out.push_back(r.size());
  return out;
}

}  // namespace

TEST_CASE("partition_columns worked examples") {
  CHECK(sizes(partition_columns(15, 8)) == std::vector<std::uint32_t>{2, 2, 2, 2, 2, 2, 2, 1});
  CHECK(partition_columns(15, 8).ranges.front() == ColumnRange{1, 3});
  CHECK(partition_columns(15, 8).ranges.back() == ColumnRange{15, 16});

  const auto single = partition_columns(7, 1);
  REQUIRE(single.ranges.size() == 1);
  CHECK(single.ranges[0] == ColumnRange{1, 8});

  const auto wide = partition_columns(3, 8);
  CHECK(wide.worker_count == 8);
  CHECK(wide.ranges == std::vector<ColumnRange>{{1, 2}, {2, 3}, {3, 4}});
}

TEST_CASE("partition_columns rejects empty inputs") {
  CHECK_THROWS_AS(partition_columns(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(partition_columns(4, 0), std::invalid_argument);
}

TEST_CASE("partitions are disjoint, covering and balanced (exhaustive sweep)") {
  for (std::uint64_t columns = 1; columns <= 300; ++columns) {
    for (unsigned workers = 1; workers <= 40; ++workers) {
      const auto p = partition_columns(columns, workers);
      REQUIRE(p.ranges.size() == std::min<std::uint64_t>(columns, workers));
      std::uint32_t next = 1;
      std::uint32_t lo = p.ranges[0].size();
      std::uint32_t hi = lo;
      for (const auto& r : p.ranges) {
        REQUIRE(r.begin == next);
        REQUIRE(r.end > r.begin);
        next = r.end;
        lo = std::min(lo, r.size());
        hi = std::max(hi, r.size());
      }
      REQUIRE(next == columns + 1);
      REQUIRE(hi - lo <= 1);
    }
  }
}

TEST_CASE("fwht_parallel on AES") {
  const SBox aes = aes_sbox();
  const auto reference = fwht_fused(aes, SpectrumMode::retain);
  for (unsigned workers : {1u, 2u, 4u, 10u}) {
    const auto r = fwht_parallel(aes, workers, SpectrumMode::retain);
    CHECK(nonlinearity_from_maxima(r.maxima).value == 112);
    CHECK(r.maxima == reference.maxima);
    CHECK(*r.spectrum == *reference.spectrum);
  }
}

TEST_CASE("single worker reproduces fwht_fused in both modes") {
  const SBox s = generate_sbox(7, 6, 31, false);
  for (SpectrumMode mode : {SpectrumMode::retain, SpectrumMode::stream}) {
    const auto fused = fwht_fused(s, mode);
    const auto par = fwht_parallel(s, 1, mode);
    CHECK(par.maxima == fused.maxima);
    CHECK(par.spectrum.has_value() == fused.spectrum.has_value());
    if (par.spectrum) CHECK(*par.spectrum == *fused.spectrum);
  }
}

TEST_CASE("random 8x8 seed 9 is identical across worker counts") {
  const SBox s = generate_sbox(8, 8, 9, false);
  const auto reference = fwht_parallel(s, 1, SpectrumMode::retain);
  for (unsigned workers : {2u, 3u, 4u, 7u, 12u}) {
    const auto r = fwht_parallel(s, workers, SpectrumMode::retain);
    CHECK(r.maxima == reference.maxima);
    CHECK(*r.spectrum == *reference.spectrum);
    CHECK(fwht_parallel(s, workers, SpectrumMode::stream).maxima == reference.maxima);
  }
}

TEST_CASE("oversubscribed pools shrink to one column per worker") {
  const SBox s = generate_sbox(4, 2, 3, false);  // three columns
  const auto r = fwht_parallel(s, 32, SpectrumMode::retain);
  CHECK(r.maxima == fwht_fused(s, SpectrumMode::retain).maxima);
}

TEST_CASE("stream mode allocates one column per worker") {
  const SBox s = generate_sbox(10, 6, 1, false);
  spectrum_memory::reset_peak();
  const std::uint64_t base = spectrum_memory::current_bytes();
  fwht_parallel(s, 4, SpectrumMode::stream);
  CHECK(spectrum_memory::peak_bytes() - base <= 4 * 1024 * sizeof(spectrum_t));
  CHECK(spectrum_memory::current_bytes() == base);
}

TEST_CASE("fwht_parallel argument and budget errors") {
  const SBox s = generate_sbox(6, 6, 1, true);
  CHECK_THROWS_AS(fwht_parallel(s, 0, SpectrumMode::retain), std::invalid_argument);
  CHECK_THROWS_AS(fwht_parallel(s, 2, SpectrumMode::retain, 1000), MemoryBudgetExceeded);
  CHECK_THROWS_AS(fwht_parallel(s, 8, SpectrumMode::stream, 1000), MemoryBudgetExceeded);
  // (1 + 1) * 64 * 4 + 64 * 4 = 768 bytes for a single streaming worker.
  CHECK_NOTHROW(fwht_parallel(s, 1, SpectrumMode::stream, 1000));
}

TEST_CASE("transform timing is reported") {
  PhaseTiming t;
  fwht_parallel(generate_sbox(9, 9, 2, true), 3, SpectrumMode::retain, unlimited_memory, &t);
  CHECK(t.transform_ms > 0.0);
}

TEST_CASE("default_worker_count is positive") { CHECK(default_worker_count() >= 1); }
