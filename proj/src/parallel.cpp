#include "sboxnl/parallel.hpp"

#include <atomic>
#include <barrier>
#include <chrono>
#include <exception>
#include <latch>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace sboxnl {

ColumnPartition partition_columns(std::uint64_t total_columns, unsigned workers) {
  if (total_columns == 0) throw std::invalid_argument("partition_columns: no columns");
  if (workers == 0) throw std::invalid_argument("partition_columns: zero workers");
  if (total_columns > std::uint64_t{1} << max_bit_width) {
    throw std::invalid_argument("partition_columns: too many columns");
  }
  ColumnPartition p;
  p.worker_count = workers;
  const std::uint64_t parts = std::min<std::uint64_t>(workers, total_columns);
  const std::uint64_t base = total_columns / parts;
  const std::uint64_t extra = total_columns % parts;
  std::uint64_t begin = 1;
  p.ranges.reserve(parts);
  for (std::uint64_t k = 0; k < parts; ++k) {
    const std::uint64_t len = base + (k < extra ? 1 : 0);
    p.ranges.push_back(ColumnRange{static_cast<std::uint32_t>(begin),
                                   static_cast<std::uint32_t>(begin + len)});
    begin += len;
  }
  return p;
}

unsigned default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

using Clock = std::chrono::steady_clock;

/// Runs body(worker_index) on one thread per range. Threads are all created
/// before any starts work, so a creation failure leaves nobody waiting.
template <typename Body>
void run_workers(std::size_t count, Body&& body) {
  std::latch start(1);
  std::atomic<bool> abort{false};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::jthread> pool;
  pool.reserve(count);
  try {
    for (std::size_t k = 0; k < count; ++k) {
      pool.emplace_back([&, k] {
        start.wait();
        if (abort.load()) return;
        try {
          body(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
  } catch (const std::system_error& e) {
    abort.store(true);
    start.count_down();
    pool.clear();
    throw std::runtime_error(std::string("failed to create worker pool: ") + e.what());
  }
  start.count_down();
  pool.clear();  // joins: the completion barrier
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace

TransformResult fwht_parallel(const SBox& s, unsigned workers, SpectrumMode mode,
                              std::uint64_t max_bytes, PhaseTiming* timing) {
  const unsigned n = s.input_bits();
  const unsigned m = s.output_bits();
  const ColumnPartition partition = partition_columns(s.mask_count(), workers);
  const auto& ranges = partition.ranges;

  TransformResult result;
  result.maxima = ColumnMaxima{n, m, std::vector<std::uint32_t>(s.mask_count())};
  auto& values = result.maxima.values;

  if (mode == SpectrumMode::retain) {
    check_budget(memory_estimate(n, m, sizeof(spectrum_t), SpectrumMode::retain), max_bytes);
    PolarityTruthTable ptt(n, m);
    Clock::time_point transform_start;
    // Completion step runs once every worker has filled its rows.
    std::barrier filled(static_cast<std::ptrdiff_t>(ranges.size()),
                        [&transform_start]() noexcept { transform_start = Clock::now(); });
    run_workers(ranges.size(), [&](std::size_t k) {
      const ColumnRange r = ranges[k];
      for (std::uint32_t v = r.begin; v < r.end; ++v) fill_polarity_row(s, v, ptt.row(v));
      filled.arrive_and_wait();
      for (std::uint32_t v = r.begin; v < r.end; ++v) {
        values[v - 1] = column_nonlinearity(n, fwht_column_in_place(ptt.row(v)));
      }
    });
    if (timing) {
      timing->transform_ms =
          std::chrono::duration<double, std::milli>(Clock::now() - transform_start).count();
    }
    result.spectrum.emplace(std::move(ptt));
    return result;
  }

  check_budget(memory_estimate(n, m, sizeof(spectrum_t), SpectrumMode::stream,
                               static_cast<unsigned>(ranges.size())),
               max_bytes);
  const auto start = Clock::now();
  run_workers(ranges.size(), [&](std::size_t k) {
    const ColumnRange r = ranges[k];
    SpectrumStorage column(s.size());
    for (std::uint32_t v = r.begin; v < r.end; ++v) {
      fill_polarity_row(s, v, column);
      values[v - 1] = column_nonlinearity(n, fwht_column_in_place(column));
    }
  });
  if (timing) {
    timing->transform_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
  return result;
}

}  // namespace sboxnl
