#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sboxnl/spectrum_memory.hpp"

namespace sboxnl {

inline constexpr unsigned max_bit_width = 24;

/// An n x m substitution box: 2^n entries, each an m-bit output word.
/// Bit i of an entry is component function f_i.
class SBox {
 public:
  /// Throws std::invalid_argument if the widths or table violate the invariants.
  SBox(unsigned input_bits, unsigned output_bits, std::vector<std::uint32_t> table);

  unsigned input_bits() const noexcept { return n_; }
  unsigned output_bits() const noexcept { return m_; }

  /// 2^n.
  std::size_t size() const noexcept { return table_.size(); }
  /// 2^m - 1, the number of nonzero output masks.
  std::uint32_t mask_count() const noexcept { return (std::uint32_t{1} << m_) - 1; }

  std::uint32_t operator[](std::size_t x) const noexcept { return table_[x]; }
  std::span<const std::uint32_t> table() const noexcept { return table_; }

  bool is_bijective() const;

  friend bool operator==(const SBox&, const SBox&) = default;

 private:
  unsigned n_;
  unsigned m_;
  std::vector<std::uint32_t> table_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Reads the ".sbox" text format: "n m", then 2^n decimal or 0x-hex
/// entries; '#' comments run to end of line.
SBox parse_sbox(std::istream& in);
SBox parse_sbox(std::string_view text);
SBox load_sbox(const std::string& path);

/// Writes the ".sbox" format, 16 hexadecimal entries per line.
void render_sbox(std::ostream& out, const SBox& s);
std::string render_sbox(const SBox& s);

/// Deterministic for fixed arguments on every platform. Bijective mode
/// shuffles 0..2^n-1 and requires n == m.
SBox generate_sbox(unsigned input_bits, unsigned output_bits, std::uint64_t seed,
                   bool bijective);

/// parity(v AND S(x)); throws std::out_of_range on bad indices.
bool component_value(const SBox& s, std::uint32_t v, std::uint32_t x);

/// Table of 2^m - 1 rows of 2^n signed values, stored mask-major:
/// row v (1 <= v < 2^m) lives at offset (v - 1) * 2^n.
class MaskMajorTable {
 public:
  /// Storage is left uninitialised.
  MaskMajorTable(unsigned input_bits, unsigned output_bits);

  unsigned input_bits() const noexcept { return n_; }
  unsigned output_bits() const noexcept { return m_; }
  std::size_t row_length() const noexcept { return std::size_t{1} << n_; }
  std::uint32_t row_count() const noexcept { return (std::uint32_t{1} << m_) - 1; }

  std::span<spectrum_t> row(std::uint32_t v);
  std::span<const spectrum_t> row(std::uint32_t v) const;

  std::span<spectrum_t> data() noexcept { return data_; }
  std::span<const spectrum_t> data() const noexcept { return data_; }

  friend bool operator==(const MaskMajorTable&, const MaskMajorTable&) = default;

 protected:
  unsigned n_;
  unsigned m_;
  SpectrumStorage data_;
};

/// rows[v-1][x] = (-1)^parity(v AND S(x)).
class PolarityTruthTable : public MaskMajorTable {
 public:
  using MaskMajorTable::MaskMajorTable;
};

/// rows[v-1][u] = W(u, v).
class WalshSpectrum : public MaskMajorTable {
 public:
  using MaskMajorTable::MaskMajorTable;

  /// Takes over a polarity table that has been transformed in place.
  explicit WalshSpectrum(PolarityTruthTable&& transformed) noexcept
      : MaskMajorTable(std::move(transformed)) {}
};

/// Writes (-1)^parity(v AND S(x)) for every x into row.
void fill_polarity_row(const SBox& s, std::uint32_t v, std::span<spectrum_t> row);

PolarityTruthTable polarity_truth_table(const SBox& s,
                                        std::uint64_t max_bytes = unlimited_memory);

enum class SpectrumMode { retain, stream };

/// Bytes needed for spectrum storage plus the 2^m-entry maxima array.
/// Retain keeps all 2^m - 1 rows; stream keeps (workers + 1) column buffers.
std::uint64_t memory_estimate(unsigned input_bits, unsigned output_bits,
                              std::size_t element_width, SpectrumMode mode,
                              unsigned workers = 1);

}  // namespace sboxnl
