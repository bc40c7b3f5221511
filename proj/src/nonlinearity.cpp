#include "sboxnl/nonlinearity.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>
#include <vector>

namespace sboxnl {
namespace {

constexpr std::array<std::pair<Method, std::string_view>, 5> method_names{{
    {Method::rowmajor, "rowmajor"},
    {Method::transposed, "transposed"},
    {Method::fused, "fused"},
    {Method::parallel, "parallel"},
    {Method::bruteforce, "bruteforce"},
}};

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : method_names) {
    if (m == method) return name;
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [m, text] : method_names) {
    if (text == name) return m;
  }
  return std::nullopt;
}

NonlinearityResult nonlinearity_from_spectrum(const WalshSpectrum& w, Method method) {
  const unsigned n = w.input_bits();
  // Start from the analytic ceiling 2^(n-1); any row can only lower it.
  NonlinearityResult best{std::uint32_t{1} << (n - 1), 1, method};
  for (std::uint32_t v = 1; v <= w.row_count(); ++v) {
    spectrum_t peak = 0;
    for (spectrum_t value : w.row(v)) peak = std::max(peak, value < 0 ? -value : value);
    const std::uint32_t nl = column_nonlinearity(n, peak);
    if (nl < best.value) {
      best.value = nl;
      best.argmin_v = v;
    }
  }
  return best;
}

NonlinearityResult nonlinearity_from_maxima(const ColumnMaxima& cm, Method method) {
  NonlinearityResult best{std::uint32_t{1} << (cm.input_bits - 1), 1, method};
  for (std::size_t k = 0; k < cm.values.size(); ++k) {
    if (cm.values[k] < best.value) {
      best.value = cm.values[k];
      best.argmin_v = static_cast<std::uint32_t>(k + 1);
    }
  }
  return best;
}

NonlinearityResult nonlinearity_bruteforce(const SBox& s) {
  const unsigned n = s.input_bits();
  if (n > bruteforce_max_bits || s.output_bits() > bruteforce_max_bits) {
    throw std::invalid_argument("brute-force nonlinearity is capped at " +
                                std::to_string(bruteforce_max_bits) + "x" +
                                std::to_string(bruteforce_max_bits));
  }
  const std::uint32_t size = static_cast<std::uint32_t>(s.size());

  // Truth tables of every linear function <w,x>; the constant c = 1 variant
  // is the complement, at distance size - d.
  std::vector<std::vector<std::uint8_t>> linear(size, std::vector<std::uint8_t>(size));
  for (std::uint32_t w = 0; w < size; ++w) {
    for (std::uint32_t x = 0; x < size; ++x) {
      linear[w][x] = static_cast<std::uint8_t>(std::popcount(w & x) & 1);
    }
  }

  NonlinearityResult best{size / 2, 1, Method::bruteforce};
  std::vector<std::uint8_t> g(size);
  for (std::uint32_t v = 1; v <= s.mask_count(); ++v) {
    for (std::uint32_t x = 0; x < size; ++x) {
      g[x] = static_cast<std::uint8_t>(std::popcount(v & s[x]) & 1);
    }
    std::uint32_t nearest = size;
    for (std::uint32_t w = 0; w < size; ++w) {
      std::uint32_t d = 0;
      for (std::uint32_t x = 0; x < size; ++x) d += g[x] != linear[w][x];
      nearest = std::min({nearest, d, size - d});
    }
    if (nearest < best.value) {
      best.value = nearest;
      best.argmin_v = v;
    }
  }
  return best;
}

NonlinearityResult evaluate_nonlinearity(const SBox& s, const EvalConfig& config) {
  const bool streaming = config.mode == SpectrumMode::stream;
  switch (config.method) {
    case Method::rowmajor:
    case Method::transposed:
      if (streaming) {
        throw std::invalid_argument(std::string(to_string(config.method)) +
                                    " cannot run in stream mode");
      }
      return nonlinearity_from_spectrum(config.method == Method::rowmajor
                                            ? fwht_rowmajor(s, config.max_bytes)
                                            : fwht_transposed(s, config.max_bytes),
                                        config.method);
    case Method::fused:
      return nonlinearity_from_maxima(fwht_fused(s, config.mode, config.max_bytes).maxima,
                                      Method::fused);
    case Method::parallel:
      return nonlinearity_from_maxima(
          fwht_parallel(s, config.workers, config.mode, config.max_bytes).maxima,
          Method::parallel);
    case Method::bruteforce:
      return nonlinearity_bruteforce(s);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace sboxnl
