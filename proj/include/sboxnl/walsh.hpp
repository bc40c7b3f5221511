#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sboxnl/sbox.hpp"

namespace sboxnl {

/// Per-mask nonlinearity: values[v-1] = (2^n - max_u |W(u,v)|) / 2.
struct ColumnMaxima {
  unsigned input_bits = 0;
  unsigned output_bits = 0;
  std::vector<std::uint32_t> values;

  std::uint32_t at(std::uint32_t v) const { return values.at(v - 1); }

  friend bool operator==(const ColumnMaxima&, const ColumnMaxima&) = default;
};

struct TransformResult {
  std::optional<WalshSpectrum> spectrum;  // empty in stream mode
  ColumnMaxima maxima;
};

/// Wall time spent in the butterfly passes only (filled when non-null).
struct PhaseTiming {
  double transform_ms = 0.0;
};

/// Sum over x of (-1)^(<v,S(x)> xor <u,x>), evaluated directly.
std::int64_t walsh_direct(const SBox& s, std::uint32_t u, std::uint32_t v);

/// In-place unnormalised Walsh-Hadamard transform of one column.
/// Throws std::invalid_argument unless the length is a power of two.
void fwht_column(std::span<spectrum_t> col);

/// As fwht_column, and returns max |col[u]| collected during the final pass.
spectrum_t fwht_column_in_place(std::span<spectrum_t> col);

/// (2^n - max_abs) / 2; throws std::logic_error when the difference is odd.
std::uint32_t column_nonlinearity(unsigned input_bits, spectrum_t max_abs);

/// Baseline: x-major store, each mask column transformed with strided access.
/// Needs twice the retain estimate while the result is transposed out.
WalshSpectrum fwht_rowmajor(const SBox& s, std::uint64_t max_bytes = unlimited_memory,
                            PhaseTiming* timing = nullptr);

/// Mask-major store, one contiguous transform per mask.
WalshSpectrum fwht_transposed(const SBox& s, std::uint64_t max_bytes = unlimited_memory,
                              PhaseTiming* timing = nullptr);

/// Transposed transform that harvests each column's maximum in its last pass.
/// Stream mode holds a single column buffer and returns no spectrum.
TransformResult fwht_fused(const SBox& s, SpectrumMode mode,
                           std::uint64_t max_bytes = unlimited_memory,
                           PhaseTiming* timing = nullptr);

/// Recomputes the maxima with a separate scan of a finished spectrum.
ColumnMaxima maxima_from_spectrum(const WalshSpectrum& w);

/// ".wspec": header "n m", then one line of 2^n integers per mask v = 1, 2, ...
void write_spectrum(std::ostream& out, const WalshSpectrum& w);
WalshSpectrum read_spectrum(std::istream& in);

}  // namespace sboxnl
