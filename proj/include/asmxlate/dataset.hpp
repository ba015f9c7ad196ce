#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "asmxlate/config.hpp"
#include "asmxlate/error.hpp"
#include "asmxlate/tokenizer.hpp"

namespace asmxlate {

inline constexpr std::string_view kPairSchema = "asmxlate.pair/1";
inline constexpr std::string_view kManifestSchema = "asmxlate.manifest/1";

struct AssemblyText {
  std::string raw;
  std::string normalized;
  friend bool operator==(const AssemblyText&, const AssemblyText&) = default;
};

struct TranspilePair {
  std::string pair_id;
  std::filesystem::path c_source_path;
  AssemblyText x86;
  AssemblyText target;
  IsaName target_isa = IsaName::ARMV5;
  std::optional<std::filesystem::path> test_source_path;
  std::size_t token_count_x86 = 0;
  std::size_t token_count_target = 0;
  std::string tokenizer_version;
  std::string opt_level;
  std::string build_log;  // compiler stderr from both sides
  friend bool operator==(const TranspilePair&, const TranspilePair&) = default;
};

std::string pair_to_json_line(const TranspilePair& pair);
TranspilePair pair_from_json_line(std::string_view line);

class CompileFailed : public Error {
 public:
  CompileFailed(IsaName isa, int exit_code, std::string excerpt);
  IsaName isa() const noexcept { return isa_; }
  int exit_code() const noexcept { return exit_code_; }
  const std::string& excerpt() const noexcept { return excerpt_; }

 private:
  IsaName isa_;
  int exit_code_;
  std::string excerpt_;
};

class CompileTimeout : public Error {
 public:
  explicit CompileTimeout(IsaName isa);
  IsaName isa() const noexcept { return isa_; }

 private:
  IsaName isa_;
};

class NoSources : public Error {
 public:
  using Error::Error;
};

class StoreWriteFailed : public Error {
 public:
  using Error::Error;
};

/// Eval suite directory entry without func.c or test.c.
class LayoutError : public Error {
 public:
  LayoutError(std::string entry, const std::string& message)
      : Error(entry + ": " + message), entry_(std::move(entry)) {}
  const std::string& entry() const noexcept { return entry_; }

 private:
  std::string entry_;
};

/// Runs the ISA's compile template with -S semantics and returns the
/// assembly text. `log` receives the compiler's stderr.
std::string compile_to_assembly(const std::filesystem::path& c_path, IsaName isa,
                                const ToolchainConfig& cfg, std::string* log = nullptr);

TranspilePair compile_pair(const std::filesystem::path& c_path, IsaName target_isa,
                           const ToolchainConfig& cfg, const TokenizerSpec& spec,
                           std::string pair_id = {});

struct ToolFingerprint {
  IsaName isa = IsaName::X86_64;
  std::string command;
  std::string version;  // first non-empty line of the version command's output
  friend bool operator==(const ToolFingerprint&, const ToolFingerprint&) = default;
};

std::vector<ToolFingerprint> toolchain_fingerprints(const ToolchainConfig& cfg,
                                                    const std::vector<IsaName>& isas);

struct BuildFailure {
  std::string source;
  std::string error;
  friend bool operator==(const BuildFailure&, const BuildFailure&) = default;
};

struct CorpusManifest {
  std::size_t records = 0;
  IsaName target_isa = IsaName::ARMV5;
  std::string opt_level;
  std::string tokenizer_version;
  std::vector<ToolFingerprint> toolchain;
  std::string created;
  std::uint64_t seed = 0;
  std::size_t requested = 0;  // sample size asked for, 0 = all
  std::size_t available = 0;
  std::vector<BuildFailure> failures;
  std::vector<std::string> warnings;
};

std::string manifest_to_json(const CorpusManifest& m);
CorpusManifest manifest_from_json(std::string_view text);
std::filesystem::path manifest_path(const std::filesystem::path& store);

/// All `.c` files under dir, recursively, sorted by relative path.
std::vector<std::filesystem::path> list_sources(const std::filesystem::path& dir);

/// Uniform in [0, bound) by rejection; identical on every platform, unlike
/// std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Seeded sample without replacement, returned in sorted order.
std::vector<std::filesystem::path> sample_sources(std::vector<std::filesystem::path> sorted,
                                                  std::size_t sample, std::uint64_t seed);

struct CorpusBuildOptions {
  std::optional<std::size_t> sample;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::function<void(const std::string&)> warn;  // defaults to stderr
};

/// Compiles a seeded sample of `src_dir` into an NDJSON store at `store`
/// (written atomically) and then writes `<store>.manifest.json`.
CorpusManifest build_corpus(const std::filesystem::path& src_dir, const std::filesystem::path& store,
                            IsaName target_isa, const ToolchainConfig& cfg,
                            const TokenizerSpec& spec, const CorpusBuildOptions& options = {});

std::vector<TranspilePair> read_store(const std::filesystem::path& store);
void write_store(const std::filesystem::path& store, const std::vector<TranspilePair>& pairs);

/// `<id>/func.c` + `<id>/test.c` per problem; pairs in ascending id order
/// with test_source_path set.
std::vector<TranspilePair> load_eval_suite(const std::filesystem::path& dir, IsaName target_isa,
                                           const ToolchainConfig& cfg, const TokenizerSpec& spec,
                                           std::size_t jobs = 1);

/// The vocabulary shipped in `<data_dir>/vocab/default.vocab`.
const TokenizerSpec& default_tokenizer();

}  // namespace asmxlate
