#include "sboxnl/walsh.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

namespace sboxnl {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_power_of_two(std::size_t len) {
  if (!std::has_single_bit(len)) {
    throw std::invalid_argument("FWHT length must be a power of two, got " +
                                std::to_string(len));
  }
}

spectrum_t abs_value(spectrum_t x) { return x < 0 ? -x : x; }

}  // namespace

std::int64_t walsh_direct(const SBox& s, std::uint32_t u, std::uint32_t v) {
  if (u >= s.size() || v >= (std::uint32_t{1} << s.output_bits())) {
    throw std::out_of_range("walsh_direct: mask out of range");
  }
  std::int64_t sum = 0;
  for (std::uint32_t x = 0; x < s.size(); ++x) {
    const int bit = (std::popcount(v & s[x]) ^ std::popcount(u & x)) & 1;
    sum += bit ? -1 : 1;
  }
  return sum;
}

void fwht_column(std::span<spectrum_t> col) {
  const std::size_t len = col.size();
  require_power_of_two(len);
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t k = i; k < i + h; ++k) {
        const spectrum_t a = col[k];
        const spectrum_t b = col[k + h];
        col[k] = a + b;
        col[k + h] = a - b;
      }
    }
  }
}

spectrum_t fwht_column_in_place(std::span<spectrum_t> col) {
  const std::size_t len = col.size();
  require_power_of_two(len);
  if (len == 1) return abs_value(col[0]);
  const std::size_t last = len >> 1;
  for (std::size_t h = 1; h < last; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t k = i; k < i + h; ++k) {
        const spectrum_t a = col[k];
        const spectrum_t b = col[k + h];
        col[k] = a + b;
        col[k + h] = a - b;
      }
    }
  }
  // Final pass: every element is written exactly once, so the maximum of
  // what is written here is the maximum of the finished column.
  spectrum_t peak = 0;
  for (std::size_t k = 0; k < last; ++k) {
    const spectrum_t a = col[k];
    const spectrum_t b = col[k + last];
    const spectrum_t sum = a + b;
    const spectrum_t diff = a - b;
    col[k] = sum;
    col[k + last] = diff;
    peak = std::max(peak, std::max(abs_value(sum), abs_value(diff)));
  }
  return peak;
}

std::uint32_t column_nonlinearity(unsigned input_bits, spectrum_t max_abs) {
  const std::int64_t diff = (std::int64_t{1} << input_bits) - max_abs;
  if (diff < 0 || (diff & 1) != 0) {
    throw std::logic_error("spectrum maximum " + std::to_string(max_abs) +
                           " has the wrong parity or magnitude for n = " +
                           std::to_string(input_bits));
  }
  return static_cast<std::uint32_t>(diff >> 1);
}

WalshSpectrum fwht_rowmajor(const SBox& s, std::uint64_t max_bytes, PhaseTiming* timing) {
  const unsigned n = s.input_bits();
  const unsigned m = s.output_bits();
  const std::uint64_t retain = memory_estimate(n, m, sizeof(spectrum_t), SpectrumMode::retain);
  check_budget(retain > unlimited_memory / 2 ? unlimited_memory : 2 * retain, max_bytes);

  const std::size_t rows = s.size();
  const std::size_t cols = s.mask_count();
  SpectrumStorage wt(rows * cols);
  for (std::size_t x = 0; x < rows; ++x) {
    spectrum_t* line = wt.data() + x * cols;
    for (std::size_t z = 0; z < cols; ++z) {
      line[z] = 1 - 2 * (std::popcount(static_cast<std::uint32_t>(z + 1) & s[x]) & 1);
    }
  }

  const auto start = Clock::now();
  for (std::size_t z = 0; z < cols; ++z) {
    for (std::size_t j = 1; j < rows; j <<= 1) {
      for (std::size_t i = 0; i < rows; ++i) {
        if ((i & j) == 0) {
          const spectrum_t a = wt[i * cols + z];
          const spectrum_t b = wt[(i + j) * cols + z];
          wt[i * cols + z] = a + b;
          wt[(i + j) * cols + z] = a - b;
        }
      }
    }
  }
  if (timing) timing->transform_ms = elapsed_ms(start);

  WalshSpectrum out(n, m);
  for (std::size_t z = 0; z < cols; ++z) {
    auto dst = out.row(static_cast<std::uint32_t>(z + 1));
    for (std::size_t u = 0; u < rows; ++u) dst[u] = wt[u * cols + z];
  }
  return out;
}

WalshSpectrum fwht_transposed(const SBox& s, std::uint64_t max_bytes, PhaseTiming* timing) {
  PolarityTruthTable ptt = polarity_truth_table(s, max_bytes);
  const auto start = Clock::now();
  for (std::uint32_t v = 1; v <= ptt.row_count(); ++v) fwht_column(ptt.row(v));
  if (timing) timing->transform_ms = elapsed_ms(start);
  return WalshSpectrum(std::move(ptt));
}

TransformResult fwht_fused(const SBox& s, SpectrumMode mode, std::uint64_t max_bytes,
                           PhaseTiming* timing) {
  const unsigned n = s.input_bits();
  TransformResult result;
  result.maxima = ColumnMaxima{n, s.output_bits(), std::vector<std::uint32_t>(s.mask_count())};
  auto& values = result.maxima.values;

  if (mode == SpectrumMode::retain) {
    PolarityTruthTable ptt = polarity_truth_table(s, max_bytes);
    const auto start = Clock::now();
    for (std::uint32_t v = 1; v <= ptt.row_count(); ++v) {
      values[v - 1] = column_nonlinearity(n, fwht_column_in_place(ptt.row(v)));
    }
    if (timing) timing->transform_ms = elapsed_ms(start);
    result.spectrum.emplace(std::move(ptt));
    return result;
  }

  check_budget(memory_estimate(n, s.output_bits(), sizeof(spectrum_t), SpectrumMode::stream, 1),
               max_bytes);
  SpectrumStorage column(s.size());
  const auto start = Clock::now();
  for (std::uint32_t v = 1; v <= s.mask_count(); ++v) {
    fill_polarity_row(s, v, column);
    values[v - 1] = column_nonlinearity(n, fwht_column_in_place(column));
  }
  if (timing) timing->transform_ms = elapsed_ms(start);
  return result;
}

ColumnMaxima maxima_from_spectrum(const WalshSpectrum& w) {
  ColumnMaxima cm{w.input_bits(), w.output_bits(), std::vector<std::uint32_t>(w.row_count())};
  for (std::uint32_t v = 1; v <= w.row_count(); ++v) {
    spectrum_t peak = 0;
    for (spectrum_t value : w.row(v)) peak = std::max(peak, abs_value(value));
    cm.values[v - 1] = column_nonlinearity(w.input_bits(), peak);
  }
  return cm;
}

void write_spectrum(std::ostream& out, const WalshSpectrum& w) {
  out << w.input_bits() << ' ' << w.output_bits() << '\n';
  for (std::uint32_t v = 1; v <= w.row_count(); ++v) {
    const auto row = w.row(v);
    for (std::size_t u = 0; u < row.size(); ++u) {
      if (u) out << ' ';
      out << row[u];
    }
    out << '\n';
  }
}

WalshSpectrum read_spectrum(std::istream& in) {
  unsigned n = 0;
  unsigned m = 0;
  if (!(in >> n >> m)) throw std::runtime_error("spectrum dump: missing header");
  WalshSpectrum w(n, m);
  for (spectrum_t& value : w.data()) {
    if (!(in >> value)) throw std::runtime_error("spectrum dump: truncated body");
  }
  return w;
}

}  // namespace sboxnl
