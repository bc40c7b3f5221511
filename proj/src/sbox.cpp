#include "sboxnl/sbox.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace sboxnl {

SBox::SBox(unsigned input_bits, unsigned output_bits, std::vector<std::uint32_t> table)
    : n_(input_bits), m_(output_bits), table_(std::move(table)) {
  if (n_ < 1 || n_ > max_bit_width || m_ < 1 || m_ > max_bit_width) {
    throw std::invalid_argument("S-box widths must lie in 1.." +
                                std::to_string(max_bit_width));
  }
  if (table_.size() != (std::size_t{1} << n_)) {
    throw std::invalid_argument("S-box table must have 2^n entries");
  }
  const std::uint32_t limit = std::uint32_t{1} << m_;
  if (std::any_of(table_.begin(), table_.end(), [limit](std::uint32_t e) { return e >= limit; })) {
    throw std::invalid_argument("S-box entry does not fit in m bits");
  }
}

bool SBox::is_bijective() const {
  if (n_ != m_) return false;
  std::vector<bool> seen(table_.size(), false);
  for (std::uint32_t e : table_) {
    if (seen[e]) return false;
    seen[e] = true;
  }
  return true;
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::istream& in) : in_(in) {}

  bool next(Token& tok) {
    for (;;) {
      while (pos_ < current_.size() &&
             (current_[pos_] == ' ' || current_[pos_] == '\t' || current_[pos_] == '\r' ||
              current_[pos_] == ',')) {
        ++pos_;
      }
      if (pos_ < current_.size() && current_[pos_] != '#') break;
      if (!std::getline(in_, current_)) return false;
      ++line_;
      pos_ = 0;
    }
    const std::size_t start = pos_;
    while (pos_ < current_.size() && current_[pos_] != ' ' && current_[pos_] != '\t' &&
           current_[pos_] != '\r' && current_[pos_] != ',' && current_[pos_] != '#') {
      ++pos_;
    }
    tok = Token{current_.substr(start, pos_ - start), line_, start + 1};
    return true;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::string current_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::uint64_t parse_number(const Token& tok) {
  std::string_view text = tok.text;
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError("number out of range '" + tok.text + "'", tok.line, tok.column);
  }
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ParseError("not a number '" + tok.text + "'", tok.line, tok.column);
  }
  return value;
}

unsigned parse_width(const Token& tok, const char* name) {
  const std::uint64_t w = parse_number(tok);
  if (w < 1 || w > max_bit_width) {
    throw ParseError(std::string(name) + " must lie in 1.." + std::to_string(max_bit_width) +
                         ", got " + tok.text,
                     tok.line, tok.column);
  }
  return static_cast<unsigned>(w);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

SBox parse_sbox(std::istream& in) {
  Tokenizer tokens(in);
  Token tok;
  if (!tokens.next(tok)) throw ParseError("missing header 'n m'", 1, 1);
  const unsigned n = parse_width(tok, "n");
  if (!tokens.next(tok)) throw ParseError("missing output width m", tokens.line(), 1);
  const unsigned m = parse_width(tok, "m");

  const std::size_t expected = std::size_t{1} << n;
  const std::uint64_t limit = std::uint64_t{1} << m;
  std::vector<std::uint32_t> table;
  table.reserve(expected);
  while (tokens.next(tok)) {
    if (table.size() == expected) {
      throw ParseError("expected " + std::to_string(expected) + " entries, found more",
                       tok.line, tok.column);
    }
    const std::uint64_t e = parse_number(tok);
    if (e >= limit) {
      throw ParseError("entry " + tok.text + " does not fit in " + std::to_string(m) + " bits",
                       tok.line, tok.column);
    }
    table.push_back(static_cast<std::uint32_t>(e));
  }
  if (table.size() != expected) {
    throw ParseError("expected " + std::to_string(expected) + " entries, found " +
                         std::to_string(table.size()),
                     tokens.line(), 1);
  }
  return SBox(n, m, std::move(table));
}

SBox parse_sbox(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sbox(in);
}

SBox load_sbox(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_sbox(in);
}

void render_sbox(std::ostream& out, const SBox& s) {
  out << s.input_bits() << ' ' << s.output_bits() << '\n';
  const int digits = static_cast<int>((s.output_bits() + 3) / 4);
  const auto flags = out.flags();
  const auto fill = out.fill();
  for (std::size_t x = 0; x < s.size(); ++x) {
    out << "0x" << std::hex << std::setw(digits) << std::setfill('0') << s[x];
    out << ((x % 16 == 15 || x + 1 == s.size()) ? '\n' : ' ');
  }
  out.flags(flags);
  out.fill(fill);
}

std::string render_sbox(const SBox& s) {
  std::ostringstream out;
  render_sbox(out, s);
  return out.str();
}

SBox generate_sbox(unsigned input_bits, unsigned output_bits, std::uint64_t seed,
                   bool bijective) {
  if (bijective && input_bits != output_bits) {
    throw std::invalid_argument("a bijective S-box needs n == m");
  }
  if (input_bits < 1 || input_bits > max_bit_width || output_bits < 1 ||
      output_bits > max_bit_width) {
    throw std::invalid_argument("S-box widths must lie in 1.." +
                                std::to_string(max_bit_width));
  }
  std::mt19937_64 rng(seed);
  const std::size_t size = std::size_t{1} << input_bits;
  std::vector<std::uint32_t> table(size);
  if (bijective) {
    for (std::size_t i = 0; i < size; ++i) table[i] = static_cast<std::uint32_t>(i);
    // Fisher-Yates with our own bounded draw: std::shuffle is not portable.
    for (std::size_t i = size - 1; i > 0; --i) {
      std::swap(table[i], table[uniform_below(rng, i + 1)]);
    }
  } else {
    const std::uint64_t bound = std::uint64_t{1} << output_bits;
    for (auto& e : table) e = static_cast<std::uint32_t>(uniform_below(rng, bound));
  }
  return SBox(input_bits, output_bits, std::move(table));
}

bool component_value(const SBox& s, std::uint32_t v, std::uint32_t x) {
  if (x >= s.size() || v >= (std::uint32_t{1} << s.output_bits())) {
    throw std::out_of_range("component_value: mask or input out of range");
  }
  return (std::popcount(v & s[x]) & 1) != 0;
}

MaskMajorTable::MaskMajorTable(unsigned input_bits, unsigned output_bits)
    : n_(input_bits), m_(output_bits) {
  if (n_ < 1 || n_ > max_bit_width || m_ < 1 || m_ > max_bit_width) {
    throw std::invalid_argument("table widths must lie in 1.." + std::to_string(max_bit_width));
  }
  data_.resize(static_cast<std::size_t>(row_count()) * row_length());
}

std::span<spectrum_t> MaskMajorTable::row(std::uint32_t v) {
  if (v == 0 || v > row_count()) throw std::out_of_range("row mask out of range");
  return std::span<spectrum_t>(data_).subspan((v - 1) * row_length(), row_length());
}

std::span<const spectrum_t> MaskMajorTable::row(std::uint32_t v) const {
  if (v == 0 || v > row_count()) throw std::out_of_range("row mask out of range");
  return std::span<const spectrum_t>(data_).subspan((v - 1) * row_length(), row_length());
}

void fill_polarity_row(const SBox& s, std::uint32_t v, std::span<spectrum_t> row) {
  const auto table = s.table();
  for (std::size_t x = 0; x < row.size(); ++x) {
    row[x] = 1 - 2 * (std::popcount(v & table[x]) & 1);
  }
}

PolarityTruthTable polarity_truth_table(const SBox& s, std::uint64_t max_bytes) {
  check_budget(memory_estimate(s.input_bits(), s.output_bits(), sizeof(spectrum_t),
                               SpectrumMode::retain),
               max_bytes);
  PolarityTruthTable ptt(s.input_bits(), s.output_bits());
  for (std::uint32_t v = 1; v <= ptt.row_count(); ++v) fill_polarity_row(s, v, ptt.row(v));
  return ptt;
}

std::uint64_t memory_estimate(unsigned input_bits, unsigned output_bits,
                              std::size_t element_width, SpectrumMode mode, unsigned workers) {
  const std::uint64_t row = (std::uint64_t{1} << input_bits) * element_width;
  const std::uint64_t maxima = (std::uint64_t{1} << output_bits) * element_width;
  if (mode == SpectrumMode::retain) {
    return ((std::uint64_t{1} << output_bits) - 1) * row + maxima;
  }
  return (std::uint64_t{workers} + 1) * row + maxima;
}

}  // namespace sboxnl
