#include "sboxnl/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <vector>

#include "sboxnl/bench.hpp"
#include "sboxnl/nonlinearity.hpp"
#include "sboxnl/verify.hpp"

namespace sboxnl {

std::uint64_t default_memory_budget() {
  if (const char* env = std::getenv("SBOX_EVAL_MAX_MEM")) {
    std::uint64_t bytes = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, bytes);
    if (ec == std::errc{} && ptr == end) return bytes;
  }
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page_size = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page_size <= 0) return unlimited_memory;
  return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page_size) / 4 * 3;
}

namespace {

const std::vector<std::string> method_choices{"rowmajor", "transposed", "fused", "parallel",
                                              "bruteforce"};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SBox read_box(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_sbox(in);
}

SpectrumMode to_mode(const std::string& name) {
  return name == "stream" ? SpectrumMode::stream : SpectrumMode::retain;
}

/// Opens path for writing, or returns out when path is empty.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct Options {
  std::string path;
  std::string method = "parallel";
  std::vector<std::string> methods;
  unsigned workers = default_worker_count();
  std::vector<unsigned> worker_list;
  std::string mode = "retain";
  std::uint64_t max_mem = 0;
  std::string out;
  unsigned reps = 5;
  unsigned n = 0;
  unsigned m = 0;
  std::uint64_t seed = 0;
  bool bijective = false;
  bool inject_fault = false;
};

int cmd_nl(const Options& opt, std::uint64_t budget, std::ostream& out, std::ostream& err) {
  const SBox s = read_box(opt.path);
  EvalConfig config;
  config.method = *parse_method(opt.method);
  config.workers = opt.workers;
  config.mode = to_mode(opt.mode);
  config.max_bytes = budget;
  if (config.method == Method::bruteforce &&
      (s.input_bits() > bruteforce_max_bits || s.output_bits() > bruteforce_max_bits)) {
    err << "error: bruteforce is limited to " << bruteforce_max_bits << "x" << bruteforce_max_bits
        << " boxes\n";
    return exit_size_guard;
  }
  if (config.mode == SpectrumMode::stream &&
      (config.method == Method::rowmajor || config.method == Method::transposed)) {
    err << "error: --mode stream needs --method fused or parallel\n";
    return exit_usage;
  }
  const NonlinearityResult r = evaluate_nonlinearity(s, config);
  out << "nl = " << r.value << " (argmin v = " << r.argmin_v << ")\n";
  return exit_ok;
}

int cmd_walsh(const Options& opt, std::uint64_t budget, std::ostream& out, std::ostream& err) {
  const SBox s = read_box(opt.path);
  if (s.input_bits() > dump_max_bits || s.output_bits() > dump_max_bits) {
    err << "error: spectrum dumps are limited to " << dump_max_bits << "x" << dump_max_bits
        << " boxes\n";
    return exit_size_guard;
  }
  const Method method = *parse_method(opt.method);
  std::optional<WalshSpectrum> w;
  switch (method) {
    case Method::rowmajor:
      w.emplace(fwht_rowmajor(s, budget));
      break;
    case Method::transposed:
      w.emplace(fwht_transposed(s, budget));
      break;
    case Method::fused:
      w = std::move(fwht_fused(s, SpectrumMode::retain, budget).spectrum);
      break;
    case Method::parallel:
      w = std::move(fwht_parallel(s, opt.workers, SpectrumMode::retain, budget).spectrum);
      break;
    case Method::bruteforce:
      err << "error: bruteforce does not produce a spectrum\n";
      return exit_usage;
  }
  OutputTarget target(opt.out, out);
  write_spectrum(target.get(), *w);
  return exit_ok;
}

int cmd_bench(const Options& opt, std::uint64_t budget, std::ostream& out, std::ostream& err) {
  const SBox s = read_box(opt.path);
  std::vector<Method> methods;
  for (const auto& name : opt.methods) methods.push_back(*parse_method(name));
  if (methods.empty()) {
    methods = {Method::rowmajor, Method::transposed, Method::fused, Method::parallel};
  }
  const bool brute = std::find(methods.begin(), methods.end(), Method::bruteforce) != methods.end();
  if (brute && (s.input_bits() > bruteforce_max_bits || s.output_bits() > bruteforce_max_bits)) {
    err << "error: bruteforce is limited to " << bruteforce_max_bits << "x" << bruteforce_max_bits
        << " boxes\n";
    return exit_size_guard;
  }
  BenchOptions options;
  options.mode = to_mode(opt.mode);
  options.max_bytes = budget;
  if (options.mode == SpectrumMode::stream) {
    for (Method m : methods) {
      if (m == Method::rowmajor || m == Method::transposed) {
        err << "error: --mode stream needs --method fused or parallel\n";
        return exit_usage;
      }
    }
  }
  std::vector<unsigned> workers = opt.worker_list;
  if (workers.empty()) workers = {1};

  const auto records = run_benchmark(s, methods, workers, opt.reps, options);
  OutputTarget target(opt.out, out);
  write_bench_csv(target.get(), records);

  const Method baseline = records.front().method;
  err << "speedup vs " << to_string(baseline) << " (end-to-end, transform-only):\n";
  for (const auto& row : speedup_report(records, baseline)) {
    err << "  " << std::left << std::setw(11) << to_string(row.method) << " workers "
        << std::setw(3) << row.workers << std::right << std::fixed << std::setprecision(2)
        << std::setw(9) << row.ratio << std::setw(9) << row.transform_ratio << '\n';
  }
  return exit_ok;
}

int cmd_gen(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.bijective && opt.n != opt.m) {
    err << "error: --bijective needs n == m\n";
    return exit_usage;
  }
  const SBox s = generate_sbox(opt.n, opt.m, opt.seed, opt.bijective);
  OutputTarget target(opt.out, out);
  render_sbox(target.get(), s);
  return exit_ok;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  const SBox s = read_box(opt.path);
  if (s.input_bits() > verify_max_bits || s.output_bits() > verify_max_bits) {
    err << "error: verify is limited to " << verify_max_bits << "x" << verify_max_bits
        << " boxes\n";
    return exit_size_guard;
  }
  VerifyOptions vo;
  vo.max_workers = opt.workers;
  vo.inject_fault = opt.inject_fault;
  bool all = true;
  for (const auto& check : verify_sbox(s, vo)) {
    out << (check.passed ? "PASS " : "FAIL ") << check.name;
    if (!check.passed) out << ": " << check.detail;
    out << '\n';
    all = all && check.passed;
  }
  return all ? exit_ok : exit_verify_failed;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Walsh-Hadamard spectrum and nonlinearity of S-boxes", "sboxnl"};
  app.require_subcommand(1);
  Options opt;

  auto add_max_mem = [&opt](CLI::App* cmd) {
    cmd->add_option("--max-mem", opt.max_mem,
                    "Byte budget for spectrum storage (default: SBOX_EVAL_MAX_MEM or 75% of RAM)");
  };
  auto add_mode = [&opt](CLI::App* cmd) {
    cmd->add_option("--mode", opt.mode, "Keep the whole spectrum or stream columns")
        ->check(CLI::IsMember({"retain", "stream"}));
  };

  CLI::App* nl = app.add_subcommand("nl", "Print the nonlinearity of an S-box");
  nl->add_option("path", opt.path, ".sbox file")->required();
  nl->add_option("--method", opt.method)->check(CLI::IsMember(method_choices));
  nl->add_option("--workers", opt.workers)->check(CLI::PositiveNumber);
  add_mode(nl);
  add_max_mem(nl);

  CLI::App* walsh = app.add_subcommand("walsh", "Write the Walsh spectrum as .wspec");
  walsh->add_option("path", opt.path, ".sbox file")->required();
  walsh->add_option("--out", opt.out, "Output file (default: stdout)");
  walsh->add_option("--method", opt.method)->check(CLI::IsMember(method_choices));
  walsh->add_option("--workers", opt.workers)->check(CLI::PositiveNumber);
  add_max_mem(walsh);

  CLI::App* bench = app.add_subcommand("bench", "Time the transform variants, CSV output");
  bench->add_option("path", opt.path, ".sbox file")->required();
  bench->add_option("--method", opt.methods, "Methods to time (repeatable or comma list)")
      ->delimiter(',')
      ->check(CLI::IsMember(method_choices));
  bench->add_option("--workers", opt.worker_list, "Worker counts for parallel")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--reps", opt.reps, "Timed repetitions per configuration")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", opt.out, "CSV file (default: stdout)");
  add_mode(bench);
  add_max_mem(bench);

  CLI::App* gen = app.add_subcommand("gen", "Generate a seeded random S-box");
  gen->add_option("n", opt.n, "Input bits")->required()->check(CLI::Range(1u, max_bit_width));
  gen->add_option("m", opt.m, "Output bits")->required()->check(CLI::Range(1u, max_bit_width));
  gen->add_option("--seed", opt.seed);
  gen->add_flag("--bijective", opt.bijective, "Random permutation (needs n == m)");
  gen->add_option("--out", opt.out, "Output file (default: stdout)");

  CLI::App* verify = app.add_subcommand("verify", "Check spectra and nonlinearity against oracles");
  verify->add_option("path", opt.path, ".sbox file")->required();
  verify->add_option("--workers", opt.workers, "Largest worker count in the determinism sweep")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--inject-fault", opt.inject_fault)->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  const std::uint64_t budget = opt.max_mem != 0 ? opt.max_mem : default_memory_budget();
  try {
    if (nl->parsed()) return cmd_nl(opt, budget, out, err);
    if (walsh->parsed()) return cmd_walsh(opt, budget, out, err);
    if (bench->parsed()) return cmd_bench(opt, budget, out, err);
    if (gen->parsed()) return cmd_gen(opt, out, err);
    if (verify->parsed()) {
      if (verify->count("--workers") == 0) opt.workers = 12;
      return cmd_verify(opt, out, err);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_parse;
  } catch (const MemoryBudgetExceeded& e) {
    err << "error: " << e.what() << "\n"
        << "hint: use --mode stream (with --method fused or parallel) to keep one column per "
           "worker, or raise --max-mem\n";
    return exit_memory;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_parse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace sboxnl
