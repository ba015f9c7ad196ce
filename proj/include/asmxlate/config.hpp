#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asmxlate/isa.hpp"

namespace asmxlate {

/// Command templates for one ISA. Templates are whitespace-separated argv
/// with `{input}`, `{output}`, `{opt}` and `{config_dir}` placeholders and
/// `${VAR}` / `${VAR:-default}` environment references, expanded at use.
struct IsaToolchain {
  std::string compile;   // C source -> assembly text (-S semantics)
  std::string assemble;  // .s -> object
  std::string link;      // objects -> static executable; {input} expands to all inputs
  std::string emulate;   // run the executable
  std::string version;   // prints a version banner used as fingerprint
  std::vector<std::string> support_sources;  // extra C sources linked into test binaries

  bool can_run() const { return !assemble.empty() && !link.empty() && !emulate.empty(); }
  friend bool operator==(const IsaToolchain&, const IsaToolchain&) = default;
};

struct ToolchainConfig {
  std::map<IsaName, IsaToolchain> toolchains;
  std::string optimization_level = "-O0";
  double timeout_compile = 30.0;  // seconds
  double timeout_run = 10.0;      // seconds
  std::string prompt_version = "x86-to-risc/v1";
  std::string prompt_preamble =
      "Translate the following x86-64 assembly (AT&T syntax, gcc {opt}) into equivalent {target} "
      "assembly. Reply with the assembly only.";
  /// Directory the config was loaded from; substituted for `{config_dir}`.
  /// Not serialized.
  std::filesystem::path base_dir;

  bool has(IsaName isa) const { return toolchains.count(isa) != 0; }

  /// Throws ConfigError naming `isas.<isa>` (or the missing key) when the
  /// ISA lacks what the caller needs.
  const IsaToolchain& require_compile(IsaName isa) const;
  const IsaToolchain& require_run(IsaName isa) const;

  friend bool operator==(const ToolchainConfig& a, const ToolchainConfig& b) {
    return a.toolchains == b.toolchains && a.optimization_level == b.optimization_level &&
           a.timeout_compile == b.timeout_compile && a.timeout_run == b.timeout_run &&
           a.prompt_version == b.prompt_version && a.prompt_preamble == b.prompt_preamble;
  }
};

ToolchainConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ToolchainConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ToolchainConfig& config);

/// Short stable hash of the serialized config, recorded in run records.
std::string config_fingerprint(const ToolchainConfig& config);

/// Decoding parameters passed through to backends.
struct GenerationParams {
  int num_beams = 1;
  int max_new_tokens = 4096;
  bool sampling_enabled = false;
  int context_window = 16384;

  void validate() const;
  friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

}  // namespace asmxlate
