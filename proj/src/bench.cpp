#include "sboxnl/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

namespace sboxnl {

BenchRecord summarize(Method method, unsigned n, unsigned m, unsigned workers,
                      std::vector<double> wall_times_ms, std::vector<double> transform_times_ms) {
  if (wall_times_ms.empty() || wall_times_ms.size() != transform_times_ms.size()) {
    throw std::invalid_argument("summarize: need one wall and one transform time per repetition");
  }
  BenchRecord r;
  r.method = method;
  r.n = n;
  r.m = m;
  r.workers = workers;
  r.repetitions = static_cast<unsigned>(wall_times_ms.size());
  const double count = static_cast<double>(r.repetitions);
  r.mean_ms = std::accumulate(wall_times_ms.begin(), wall_times_ms.end(), 0.0) / count;
  r.transform_only_mean_ms =
      std::accumulate(transform_times_ms.begin(), transform_times_ms.end(), 0.0) / count;
  if (r.repetitions > 1) {
    double sq = 0.0;
    for (double t : wall_times_ms) sq += (t - r.mean_ms) * (t - r.mean_ms);
    r.stddev_ms = std::sqrt(sq / (count - 1.0));
  }
  r.wall_times_ms = std::move(wall_times_ms);
  r.transform_times_ms = std::move(transform_times_ms);
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Reference {
  std::optional<WalshSpectrum> spectrum;  // absent when benchmarking in stream mode
  ColumnMaxima maxima;
  std::uint32_t nonlinearity;
};

struct Sample {
  double wall_ms;
  double transform_ms;
};

Sample timed_run(const SBox& s, Method method, unsigned workers, const BenchOptions& options,
                 const Reference& ref) {
  PhaseTiming phase;
  std::optional<WalshSpectrum> spectrum;
  std::optional<ColumnMaxima> maxima;
  std::uint32_t nonlinearity = 0;
  const auto start = Clock::now();
  switch (method) {
    case Method::rowmajor:
      spectrum.emplace(fwht_rowmajor(s, options.max_bytes, &phase));
      break;
    case Method::transposed:
      spectrum.emplace(fwht_transposed(s, options.max_bytes, &phase));
      break;
    case Method::fused:
    case Method::parallel: {
      TransformResult r = method == Method::fused
                              ? fwht_fused(s, options.mode, options.max_bytes, &phase)
                              : fwht_parallel(s, workers, options.mode, options.max_bytes, &phase);
      spectrum = std::move(r.spectrum);
      maxima = std::move(r.maxima);
      break;
    }
    case Method::bruteforce:
      nonlinearity = nonlinearity_bruteforce(s).value;
      break;
  }
  const double wall = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  bool ok = true;
  if (method == Method::bruteforce) {
    ok = nonlinearity == ref.nonlinearity;
  } else {
    if (spectrum && ref.spectrum) ok = *spectrum == *ref.spectrum;
    if (!maxima) maxima = maxima_from_spectrum(*spectrum);
    ok = ok && *maxima == ref.maxima;
  }
  if (!ok) {
    throw BenchmarkMismatch(std::string(to_string(method)) + " with " + std::to_string(workers) +
                            " workers disagrees with the reference result");
  }
  // Brute force has no transform phase; its whole run counts.
  return Sample{wall, method == Method::bruteforce ? wall : phase.transform_ms};
}

auto order_key(const BenchRecord& r) {
  return std::make_tuple(r.n, r.m, static_cast<int>(r.method), r.workers);
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(value);
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const SBox& s, std::span<const Method> methods,
                                       std::span<const unsigned> worker_counts,
                                       unsigned repetitions, const BenchOptions& options) {
  if (repetitions == 0) throw std::invalid_argument("run_benchmark: repetitions must be >= 1");
  if (std::find(worker_counts.begin(), worker_counts.end(), 0u) != worker_counts.end()) {
    throw std::invalid_argument("run_benchmark: worker counts must be >= 1");
  }

  TransformResult ref_run = fwht_fused(s, options.mode, options.max_bytes);
  const Reference ref{std::move(ref_run.spectrum), ref_run.maxima,
                      nonlinearity_from_maxima(ref_run.maxima).value};

  std::vector<std::pair<Method, unsigned>> configs;
  for (Method method : methods) {
    if (method == Method::parallel) {
      for (unsigned w : worker_counts) configs.emplace_back(method, w);
    } else {
      configs.emplace_back(method, 1u);
    }
  }
  std::sort(configs.begin(), configs.end());
  configs.erase(std::unique(configs.begin(), configs.end()), configs.end());

  std::vector<BenchRecord> records;
  for (const auto& [method, workers] : configs) {
    if (options.warmup) timed_run(s, method, workers, options, ref);
    std::vector<double> wall;
    std::vector<double> transform;
    for (unsigned rep = 0; rep < repetitions; ++rep) {
      const Sample sample = timed_run(s, method, workers, options, ref);
      wall.push_back(sample.wall_ms);
      transform.push_back(sample.transform_ms);
    }
    records.push_back(summarize(method, s.input_bits(), s.output_bits(), workers,
                                std::move(wall), std::move(transform)));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const BenchRecord& a, const BenchRecord& b) {
                     return order_key(a) < order_key(b);
                   });
  return records;
}

std::vector<SpeedupRow> speedup_report(std::span<const BenchRecord> records, Method baseline) {
  const BenchRecord* base = nullptr;
  for (const auto& r : records) {
    if (r.method == baseline && (!base || r.workers < base->workers)) base = &r;
  }
  if (!base) {
    throw std::invalid_argument("speedup_report: no record for baseline method " +
                                std::string(to_string(baseline)));
  }
  std::vector<SpeedupRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    SpeedupRow row{r.method, r.workers, 0.0, 0.0};
    if (r.mean_ms > 0.0) row.ratio = base->mean_ms / r.mean_ms;
    if (r.transform_only_mean_ms > 0.0) {
      row.transform_ratio = base->transform_only_mean_ms / r.transform_only_mean_ms;
    }
    if (&r == base) row.ratio = row.transform_ratio = 1.0;
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << "method,n,m,workers,repetitions,mean_ms,stddev_ms,transform_only_mean_ms\n";
  for (const auto& r : records) {
    out << to_string(r.method) << ',' << r.n << ',' << r.m << ',' << r.workers << ','
        << r.repetitions << ',' << format_double(r.mean_ms) << ','
        << format_double(r.stddev_ms) << ',' << format_double(r.transform_only_mean_ms) << '\n';
  }
}

namespace {

template <typename T>
T parse_field(const std::string& text, std::size_t line) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw std::runtime_error("bench CSV line " + std::to_string(line) + ": bad field '" + text +
                             "'");
  }
  return value;
}

}  // namespace

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "method,n,m,workers,repetitions,mean_ms,stddev_ms,transform_only_mean_ms") {
    throw std::runtime_error("bench CSV: unexpected header");
  }
  std::vector<BenchRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
    if (fields.size() != 8) {
      throw std::runtime_error("bench CSV line " + std::to_string(line_no) +
                               ": expected 8 fields");
    }
    const auto method = parse_method(fields[0]);
    if (!method) {
      throw std::runtime_error("bench CSV line " + std::to_string(line_no) +
                               ": unknown method '" + fields[0] + "'");
    }
    BenchRecord r;
    r.method = *method;
    r.n = parse_field<unsigned>(fields[1], line_no);
    r.m = parse_field<unsigned>(fields[2], line_no);
    r.workers = parse_field<unsigned>(fields[3], line_no);
    r.repetitions = parse_field<unsigned>(fields[4], line_no);
    r.mean_ms = parse_field<double>(fields[5], line_no);
    r.stddev_ms = parse_field<double>(fields[6], line_no);
    r.transform_only_mean_ms = parse_field<double>(fields[7], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace sboxnl
