#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace sboxnl {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_parse = 2,
  exit_memory = 3,
  exit_size_guard = 4,
  exit_verify_failed = 5,
};

/// Largest n or m that `walsh` will dump.
inline constexpr unsigned dump_max_bits = 10;

/// Budget for retain-mode spectra when --max-mem is absent: the
/// SBOX_EVAL_MAX_MEM environment variable, else 75% of physical memory.
std::uint64_t default_memory_budget();

/// Runs one invocation; args exclude the program name. Results go to out,
/// diagnostics to err. Returns an ExitCode.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sboxnl
