#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "asmxlate/assembly.hpp"
#include "asmxlate/config.hpp"
#include "asmxlate/error.hpp"
#include "asmxlate/tokenizer.hpp"

namespace asmxlate {

struct TranspileRequest {
  std::string source_text;  // normalized x86
  IsaName source_isa = IsaName::X86_64;
  IsaName target_isa = IsaName::ARMV5;
  GenerationParams params;
  std::string pair_id;  // lets oracle backends look up ground truth

  void validate() const;
};

struct Candidate {
  std::string text;
  std::optional<double> score;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct TranspileResponse {
  std::vector<Candidate> candidates;
  std::string backend_id;
  double latency_ms = 0.0;
};

/// Candidate-level failure from a backend (as opposed to a harness fault).
class BackendError : public Error {
 public:
  using Error::Error;
};

class BackendUnavailable : public BackendError {
 public:
  using BackendError::BackendError;
};

class BackendRefused : public BackendError {
 public:
  using BackendError::BackendError;
};

class ContextOverflow : public BackendError {
 public:
  ContextOverflow(std::size_t tokens, std::size_t window);
  std::size_t tokens() const noexcept { return tokens_; }
  std::size_t window() const noexcept { return window_; }

 private:
  std::size_t tokens_;
  std::size_t window_;
};

class UnsupportedInstruction : public BackendError {
 public:
  UnsupportedInstruction(std::string mnemonic, std::size_t line);
  const std::string& mnemonic() const noexcept { return mnemonic_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string mnemonic_;
  std::size_t line_;
};

/// Implementations must tolerate concurrent transpile_impl calls.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;

  /// Validates the request, times the call and enforces 1 <= candidates <= num_beams.
  TranspileResponse transpile(const TranspileRequest& req);

 protected:
  virtual std::vector<Candidate> transpile_impl(const TranspileRequest& req) = 0;
};

class IdentityBackend final : public Backend {
 public:
  std::string id() const override { return "identity"; }

 protected:
  std::vector<Candidate> transpile_impl(const TranspileRequest& req) override;
};

/// Returns the ground-truth target text registered for each pair id.
class ReplayBackend final : public Backend {
 public:
  explicit ReplayBackend(std::map<std::string, std::string> by_pair_id)
      : by_pair_id_(std::move(by_pair_id)) {}
  std::string id() const override { return "replay"; }

 protected:
  std::vector<Candidate> transpile_impl(const TranspileRequest& req) override;

 private:
  std::map<std::string, std::string> by_pair_id_;
};

/// Template translation of a small integer x86 subset into ARMv5.
std::string rule_translate(const AssemblyUnit& unit);

class RuleBackend final : public Backend {
 public:
  std::string id() const override { return "rule"; }

 protected:
  std::vector<Candidate> transpile_impl(const TranspileRequest& req) override;
};

struct RemoteOptions {
  std::string url = "http://127.0.0.1:8000";  // scheme://host[:port]
  std::string path = "/v1/completions";
  std::string model;  // sent when non-empty
  std::size_t max_in_flight = 4;
  double timeout_seconds = 120.0;
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{200};
};

/// Compiles `preamble` (with `{target}` and `{opt}` filled) and the x86 text
/// into one prompt.
std::string compose_prompt(const ToolchainConfig& cfg, IsaName target, std::string_view x86_text);

class RemoteBackend final : public Backend {
 public:
  RemoteBackend(RemoteOptions options, ToolchainConfig cfg, TokenizerSpec spec);
  ~RemoteBackend() override;
  std::string id() const override { return "remote"; }

 protected:
  std::vector<Candidate> transpile_impl(const TranspileRequest& req) override;

 private:
  RemoteOptions options_;
  ToolchainConfig cfg_;
  TokenizerSpec spec_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace asmxlate
