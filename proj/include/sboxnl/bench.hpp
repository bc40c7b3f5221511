#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "sboxnl/nonlinearity.hpp"

namespace sboxnl {

/// Timings of one (method, workers) configuration.
struct BenchRecord {
  Method method = Method::fused;
  unsigned n = 0;
  unsigned m = 0;
  unsigned workers = 1;
  unsigned repetitions = 0;
  std::vector<double> wall_times_ms;       // end to end, one per repetition
  std::vector<double> transform_times_ms;  // butterfly passes only
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
  double transform_only_mean_ms = 0.0;
};

/// Builds a record and its statistics from raw samples. stddev is the
/// sample standard deviation, 0 for a single sample.
BenchRecord summarize(Method method, unsigned n, unsigned m, unsigned workers,
                      std::vector<double> wall_times_ms, std::vector<double> transform_times_ms);

/// A timed run disagreed with the reference result.
class BenchmarkMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchOptions {
  SpectrumMode mode = SpectrumMode::retain;  // for fused and parallel
  std::uint64_t max_bytes = unlimited_memory;
  bool warmup = true;  // one discarded run before the timed ones
};

/// One record per (method, workers) pair; methods other than parallel get a
/// single workers = 1 record. Every run, warm-up included, is checked
/// against a single-threaded fused reference (spectrum in retain mode,
/// per-mask maxima always) before its time is kept.
/// Records come back in (n, m, method, workers) order.
std::vector<BenchRecord> run_benchmark(const SBox& s, std::span<const Method> methods,
                                       std::span<const unsigned> worker_counts,
                                       unsigned repetitions, const BenchOptions& options = {});

struct SpeedupRow {
  Method method = Method::fused;
  unsigned workers = 1;
  double ratio = 0.0;            // baseline mean / record mean
  double transform_ratio = 0.0;  // same on transform-only means
};

/// Ratios against the baseline method's record with the fewest workers.
/// Throws std::invalid_argument if no record uses the baseline method.
std::vector<SpeedupRow> speedup_report(std::span<const BenchRecord> records, Method baseline);

/// CSV: method,n,m,workers,repetitions,mean_ms,stddev_ms,transform_only_mean_ms
void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);

/// Parses write_bench_csv output. Raw samples are not part of the format.
std::vector<BenchRecord> read_bench_csv(std::istream& in);

}  // namespace sboxnl
