#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sboxnl/parallel.hpp"
#include "sboxnl/walsh.hpp"

namespace sboxnl {

enum class Method { rowmajor, transposed, fused, parallel, bruteforce };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct NonlinearityResult {
  std::uint32_t value = 0;
  std::uint32_t argmin_v = 0;  // smallest mask achieving the minimum
  Method method = Method::fused;

  friend bool operator==(const NonlinearityResult&, const NonlinearityResult&) = default;
};

/// Largest n or m accepted by nonlinearity_bruteforce.
inline constexpr unsigned bruteforce_max_bits = 8;

/// Scans every |W(u,v)| of a finished spectrum.
NonlinearityResult nonlinearity_from_spectrum(const WalshSpectrum& w,
                                              Method method = Method::transposed);

/// Minimum over the per-mask values of a fused run.
NonlinearityResult nonlinearity_from_maxima(const ColumnMaxima& cm,
                                            Method method = Method::fused);

/// Minimum Hamming distance from each g_v to all 2^(n+1) affine functions,
/// by direct comparison. Throws std::invalid_argument when n or m exceeds
/// bruteforce_max_bits.
NonlinearityResult nonlinearity_bruteforce(const SBox& s);

struct EvalConfig {
  Method method = Method::parallel;
  unsigned workers = default_worker_count();
  SpectrumMode mode = SpectrumMode::retain;
  std::uint64_t max_bytes = unlimited_memory;
};

/// Runs the configured pipeline end to end. rowmajor and transposed always
/// retain the spectrum; stream mode applies to fused and parallel only.
NonlinearityResult evaluate_nonlinearity(const SBox& s, const EvalConfig& config);

}  // namespace sboxnl
