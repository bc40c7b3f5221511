#include "sboxnl/verify.hpp"

#include <sstream>

#include "sboxnl/nonlinearity.hpp"
#include "sboxnl/parallel.hpp"
#include "sboxnl/walsh.hpp"

namespace sboxnl {
namespace {

/// First (u, v) where w differs from walsh_direct, as text; empty if none.
std::string first_oracle_mismatch(const SBox& s, const WalshSpectrum& w) {
  for (std::uint32_t v = 1; v <= w.row_count(); ++v) {
    const auto row = w.row(v);
    for (std::uint32_t u = 0; u < row.size(); ++u) {
      const std::int64_t expected = walsh_direct(s, u, v);
      if (row[u] != expected) {
        std::ostringstream msg;
        msg << "W(" << u << ", " << v << ") = " << row[u] << ", direct sum gives " << expected;
        return msg.str();
      }
    }
  }
  return {};
}

std::string first_parseval_violation(const WalshSpectrum& w) {
  const std::int64_t expected = std::int64_t{1} << (2 * w.input_bits());
  for (std::uint32_t v = 1; v <= w.row_count(); ++v) {
    std::int64_t energy = 0;
    for (spectrum_t value : w.row(v)) energy += std::int64_t{value} * value;
    if (energy != expected) {
      return "row v = " + std::to_string(v) + " has energy " + std::to_string(energy) +
             ", expected " + std::to_string(expected);
    }
  }
  return {};
}

CheckResult make_check(std::string name, const std::string& failure) {
  return CheckResult{std::move(name), failure.empty(), failure};
}

}  // namespace

std::vector<CheckResult> verify_sbox(const SBox& s, const VerifyOptions& options) {
  if (s.input_bits() > verify_max_bits || s.output_bits() > verify_max_bits) {
    throw std::invalid_argument("verify is limited to " + std::to_string(verify_max_bits) + "x" +
                                std::to_string(verify_max_bits) + " boxes");
  }
  if (options.max_workers == 0) throw std::invalid_argument("verify: max_workers must be >= 1");

  WalshSpectrum rowmajor = fwht_rowmajor(s);
  WalshSpectrum transposed = fwht_transposed(s);
  TransformResult fused = fwht_fused(s, SpectrumMode::retain);
  if (options.inject_fault) {
    spectrum_t& victim = transposed.row(1)[0];
    victim += victim > 0 ? -2 : 2;  // keeps parity and |W| <= 2^n
  }

  std::vector<CheckResult> checks;

  std::string oracle = first_oracle_mismatch(s, rowmajor);
  if (oracle.empty()) oracle = first_oracle_mismatch(s, transposed);
  if (oracle.empty()) oracle = first_oracle_mismatch(s, *fused.spectrum);
  checks.push_back(make_check("direct-oracle equivalence", oracle));

  std::string parseval = first_parseval_violation(rowmajor);
  if (parseval.empty()) parseval = first_parseval_violation(transposed);
  if (parseval.empty()) parseval = first_parseval_violation(*fused.spectrum);
  checks.push_back(make_check("parseval", parseval));

  checks.push_back(make_check("maxima consistency",
                              maxima_from_spectrum(*fused.spectrum) == fused.maxima
                                  ? ""
                                  : "fused maxima differ from a rescan of the spectrum"));

  if (s.is_bijective()) {
    std::string balance;
    for (std::uint32_t v = 1; v <= fused.spectrum->row_count() && balance.empty(); ++v) {
      if (fused.spectrum->row(v)[0] != 0) balance = "W(0, " + std::to_string(v) + ") != 0";
    }
    checks.push_back(make_check("bijection balance", balance));
  }

  const auto from_spectrum = nonlinearity_from_spectrum(transposed);
  const auto from_maxima = nonlinearity_from_maxima(fused.maxima);
  const auto brute = nonlinearity_bruteforce(s);
  std::string agreement;
  if (from_spectrum.value != brute.value || from_maxima.value != brute.value) {
    agreement = "spectrum " + std::to_string(from_spectrum.value) + ", maxima " +
                std::to_string(from_maxima.value) + ", brute force " +
                std::to_string(brute.value);
  }
  checks.push_back(make_check("nonlinearity agreement", agreement));

  std::string determinism;
  for (unsigned w = 1; w <= options.max_workers && determinism.empty(); ++w) {
    for (SpectrumMode mode : {SpectrumMode::retain, SpectrumMode::stream}) {
      const TransformResult r = fwht_parallel(s, w, mode);
      const bool same = r.maxima == fused.maxima && (!r.spectrum || *r.spectrum == *fused.spectrum);
      if (!same) {
        determinism = std::to_string(w) + " workers (" +
                      (mode == SpectrumMode::retain ? "retain" : "stream") +
                      ") differ from the single-threaded fused run";
        break;
      }
    }
  }
  checks.push_back(make_check("thread determinism", determinism));

  return checks;
}

}  // namespace sboxnl
