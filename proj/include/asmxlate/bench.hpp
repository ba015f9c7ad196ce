#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "asmxlate/error.hpp"

namespace asmxlate {

inline constexpr std::string_view kBenchSchema = "asmxlate.bench/1";

struct BenchSample {
  double wall_time = 0.0;  // seconds
  std::size_t max_rss = 0;  // bytes
  int exit_code = 0;       // 128+signal when killed, -1 on timeout
  std::optional<double> energy_joules;
  bool valid() const { return exit_code == 0 && wall_time > 0.0; }
  friend bool operator==(const BenchSample&, const BenchSample&) = default;
};

struct BenchSummary {
  std::string mode;
  std::size_t requested = 0;
  std::size_t n_valid = 0;
  std::size_t n_failed = 0;
  double geomean_time = 0.0;
  double geomean_rss = 0.0;
  std::optional<double> geomean_energy;
  std::vector<BenchSample> samples;
};

class AllRunsFailed : public Error {
 public:
  using Error::Error;
};

/// exp(mean(log xs)). Throws on an empty list or a non-positive element.
double geomean(const std::vector<double>& xs);

/// Aggregates valid samples only.
BenchSummary summarize_samples(std::string mode, std::vector<BenchSample> samples, std::size_t requested);

struct BenchOptions {
  std::vector<std::string> args;
  std::size_t runs = 100;
  std::size_t warmup = 3;  // discarded runs before measurement
  double timeout_seconds = 0.0;
  std::string mode = "native";
  /// Optional energy sampler wrapping each measured run. `{input}` expands
  /// to the binary and its arguments; the command must print
  /// `energy_joules=<value>` on stdout or stderr.
  std::string energy_command;
};

/// Runs the binary back to back, never concurrently.
BenchSummary bench_run(const std::filesystem::path& binary, const BenchOptions& options);

struct ModeRatio {
  std::string mode;
  double speedup = 1.0;       // baseline time / mode time
  double memory_ratio = 1.0;  // baseline rss / mode rss
  std::optional<double> energy_ratio;
};

std::vector<ModeRatio> compare_modes(const std::vector<BenchSummary>& summaries, const std::string& baseline_mode);

std::string bench_to_ndjson(const BenchSummary& s);
/// Reads the summary record (and samples) back from bench_to_ndjson output.
BenchSummary bench_from_ndjson(std::string_view text);
std::string render_ratios(const std::vector<ModeRatio>& ratios, const std::string& baseline_mode);

}  // namespace asmxlate
