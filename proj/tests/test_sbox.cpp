#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "sboxnl/sbox.hpp"
#include "support/aes.hpp"
#include "support/oracles.hpp"

using namespace sboxnl;
using sboxnl::testing::aes_sbox;
using sboxnl::testing::identity_sbox;
using sboxnl::testing::parity_by_shifting;

TEST_CASE("SBox rejects tables that break its invariants") {
  CHECK_THROWS_AS(SBox(2, 2, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(SBox(2, 2, {0, 1, 2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(SBox(0, 2, {0}), std::invalid_argument);
  CHECK_THROWS_AS(SBox(25, 2, {}), std::invalid_argument);
  CHECK_NOTHROW(SBox(1, 1, {0, 1}));
}

TEST_CASE("parse_sbox reads the AES table") {
  const SBox aes = parse_sbox(render_sbox(aes_sbox()));
  CHECK(aes.input_bits() == 8);
  CHECK(aes.output_bits() == 8);
  CHECK(aes[0] == 0x63);
  CHECK(aes[1] == 0x7C);
  CHECK(aes[255] == 0x16);
  CHECK(aes.is_bijective());
}

TEST_CASE("parse_sbox accepts decimal, hex and comments") {
  CHECK(parse_sbox("1 1\n0 1") == SBox(1, 1, {0, 1}));
  CHECK(parse_sbox("# header comment\n2 3 # widths\n0x7 6 # trailing\n0X0 1\n") ==
        SBox(2, 3, {7, 6, 0, 1}));
}

TEST_CASE("parse_sbox reports errors with positions") {
  SUBCASE("too few entries") {
    try {
      parse_sbox("2 2\n0 1 2");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("expected 4 entries, found 3") != std::string::npos);
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("too many entries") {
    try {
      parse_sbox("1 1\n0 1 1");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 5);
    }
  }
  SUBCASE("entry too wide") {
    try {
      parse_sbox("1 2\n0\n  4");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 3);
    }
  }
  SUBCASE("non-numeric token") {
    try {
      parse_sbox("1 1\n0 x1");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("x1") != std::string::npos);
      CHECK(e.column() == 3);
    }
  }
  SUBCASE("widths out of range") {
    CHECK_THROWS_AS(parse_sbox("0 1\n0"), ParseError);
    CHECK_THROWS_AS(parse_sbox("1 25\n0 1"), ParseError);
    CHECK_THROWS_AS(parse_sbox(""), ParseError);
    CHECK_THROWS_AS(parse_sbox("3"), ParseError);
  }
}

TEST_CASE("render_sbox writes 16 hex entries per line") {
  const std::string text = render_sbox(aes_sbox());
  CHECK(text.rfind("8 8\n0x63 0x7c 0x77 0x7b", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 17);
}

TEST_CASE("render then parse is the identity on generated boxes") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const unsigned n = 1 + static_cast<unsigned>(seed % 9);
    const unsigned m = 1 + static_cast<unsigned>((seed * 7) % 13);
    const SBox s = generate_sbox(n, m, seed, false);
    CHECK(parse_sbox(render_sbox(s)) == s);
  }
  const SBox wide = generate_sbox(4, 24, 5, false);
  CHECK(parse_sbox(render_sbox(wide)) == wide);
}

TEST_CASE("generate_sbox") {
  SUBCASE("bijective mode yields a permutation") {
    const SBox s = generate_sbox(3, 3, 7, true);
    std::vector<std::uint32_t> sorted(s.table().begin(), s.table().end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint32_t> expected(8);
    std::iota(expected.begin(), expected.end(), 0u);
    CHECK(sorted == expected);
  }
  SUBCASE("entries stay below 2^m") {
    const SBox s = generate_sbox(4, 3, 1, false);
    CHECK(s.size() == 16);
    CHECK(std::all_of(s.table().begin(), s.table().end(), [](std::uint32_t e) { return e < 8; }));
  }
  SUBCASE("deterministic per seed") {
    CHECK(generate_sbox(6, 5, 99, false) == generate_sbox(6, 5, 99, false));
    CHECK(generate_sbox(6, 6, 99, true) == generate_sbox(6, 6, 99, true));
    CHECK_FALSE(generate_sbox(6, 6, 99, true) == generate_sbox(6, 6, 100, true));
  }
  SUBCASE("bijective needs n == m") {
    CHECK_THROWS_AS(generate_sbox(4, 3, 1, true), std::invalid_argument);
  }
}

TEST_CASE("component_value") {
  const SBox aes = aes_sbox();
  CHECK_FALSE(component_value(aes, 0, 17));
  CHECK(component_value(identity_sbox(3), 0b001, 5));
  // 0x63 = 0110'0011 has four set bits.
  CHECK(parity_by_shifting(0x63) == 0);
  CHECK_FALSE(component_value(aes, 0xFF, 0));
  CHECK_THROWS_AS(component_value(aes, 256, 0), std::out_of_range);
  CHECK_THROWS_AS(component_value(aes, 1, 256), std::out_of_range);
}

TEST_CASE("polarity_truth_table") {
  SUBCASE("identity 1x1") {
    const auto ptt = polarity_truth_table(identity_sbox(1));
    CHECK(ptt.row_count() == 1);
    CHECK(std::vector<spectrum_t>(ptt.row(1).begin(), ptt.row(1).end()) ==
          std::vector<spectrum_t>{1, -1});
  }
  SUBCASE("constant box gives all +1") {
    const auto ptt = polarity_truth_table(SBox(3, 2, std::vector<std::uint32_t>(8, 0)));
    CHECK(std::all_of(ptt.data().begin(), ptt.data().end(), [](spectrum_t e) { return e == 1; }));
  }
  SUBCASE("AES row v=1 follows bit 0 of the table") {
    const auto ptt = polarity_truth_table(aes_sbox());
    CHECK(ptt.row_count() == 255);
    CHECK(ptt.row_length() == 256);
    CHECK(ptt.row(1)[0] == -1);
    CHECK(ptt.row(1)[1] == 1);
  }
  SUBCASE("budget is enforced") {
    CHECK_THROWS_AS(polarity_truth_table(aes_sbox(), 1000), MemoryBudgetExceeded);
  }
}

TEST_CASE("polarity rows invert back to component values") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const unsigned n = 1 + rng() % 6;
    const unsigned m = 1 + rng() % 6;
    const SBox s = generate_sbox(n, m, rng(), false);
    const auto ptt = polarity_truth_table(s);
    for (std::uint32_t v = 1; v <= ptt.row_count(); ++v) {
      std::int64_t sum = 0;
      std::int64_t weight = 0;
      for (std::uint32_t x = 0; x < s.size(); ++x) {
        const spectrum_t e = ptt.row(v)[x];
        REQUIRE((e == 1 || e == -1));
        REQUIRE((e == -1) == component_value(s, v, x));
        sum += e;
        weight += parity_by_shifting(v & s[x]);
      }
      CHECK(sum == static_cast<std::int64_t>(s.size()) - 2 * weight);
    }
  }
}

TEST_CASE("bijective boxes have balanced polarity rows") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SBox s = generate_sbox(5, 5, seed, true);
    const auto ptt = polarity_truth_table(s);
    for (std::uint32_t v = 1; v <= ptt.row_count(); ++v) {
      const auto row = ptt.row(v);
      CHECK(std::accumulate(row.begin(), row.end(), 0) == 0);
    }
  }
}

TEST_CASE("memory_estimate") {
  CHECK(memory_estimate(8, 8, 4, SpectrumMode::retain) == 255 * 256 * 4 + 256 * 4);
  // (2^16 - 1) * 2^16 * 4 + 2^16 * 4 = 2^32 * 4, i.e. 16 GiB.
  CHECK(memory_estimate(16, 16, 4, SpectrumMode::retain) == (std::uint64_t{1} << 34));
  // 11 column buffers of 2^16 ints plus the maxima array.
  CHECK(memory_estimate(16, 16, 4, SpectrumMode::stream, 10) == 11 * 262144 + 262144);
  CHECK(memory_estimate(24, 24, 4, SpectrumMode::retain) > (std::uint64_t{1} << 49));
}

TEST_CASE("tracked storage reports live and peak bytes") {
  const std::uint64_t before = spectrum_memory::current_bytes();
  spectrum_memory::reset_peak();
  {
    SpectrumStorage block(1024);
    CHECK(spectrum_memory::current_bytes() == before + 4096);
  }
  CHECK(spectrum_memory::current_bytes() == before);
  CHECK(spectrum_memory::peak_bytes() == before + 4096);
}
