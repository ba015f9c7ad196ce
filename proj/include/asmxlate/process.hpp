#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asmxlate {

struct CommandResult {
  int exit_code = -1;               // valid when !signal && !timed_out
  std::optional<int> signal;        // terminating signal, if any
  bool timed_out = false;
  std::string out;
  std::string err;
  double wall_seconds = 0.0;
  std::size_t max_rss_bytes = 0;

  bool ok() const { return !timed_out && !signal && exit_code == 0; }
};

struct RunOptions {
  double timeout_seconds = 0.0;  // <= 0 disables the timeout
  std::filesystem::path cwd;
  std::size_t max_capture_bytes = 1 << 20;
};

/// Spawns argv[0] (PATH lookup) in its own process group, captures both
/// streams, and kills the whole group on timeout. Throws ToolNotFound when
/// the executable cannot be started.
CommandResult run_command(const std::vector<std::string>& argv, const RunOptions& options = {});

struct TemplateVars {
  std::vector<std::string> inputs;
  std::string output;
  std::string opt;
  std::filesystem::path config_dir;
};

/// Splits a command template into argv (single/double quotes group words),
/// then substitutes placeholders and environment references. A word that is
/// exactly `{input}` expands to one argv entry per input.
std::vector<std::string> expand_command(std::string_view tmpl, const TemplateVars& vars);

/// Substitutes `{config_dir}` and environment references in a single path.
std::string expand_path(std::string_view tmpl, const std::filesystem::path& config_dir);

std::string join_command(const std::vector<std::string>& argv);

/// "SIGSEGV" style name; "SIG<n>" for unknown numbers.
std::string signal_name(int signal);

}  // namespace asmxlate
