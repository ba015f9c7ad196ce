#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asmxlate/assembly.hpp"
#include "asmxlate/backend.hpp"
#include "asmxlate/config.hpp"
#include "asmxlate/dataset.hpp"

namespace asmxlate {

inline constexpr std::string_view kResultSchema = "asmxlate.result/1";
inline constexpr std::string_view kSummarySchema = "asmxlate.summary/1";

enum class OutcomeKind { Pass, TestFailed, AssembleError, LinkError, RuntimeCrash, Timeout };

std::string_view to_string(OutcomeKind kind);
OutcomeKind outcome_kind_from_string(std::string_view text);

struct TestOutcome {
  OutcomeKind kind = OutcomeKind::Pass;
  int failed_count = 0;  // TestFailed: the driver's exit status
  std::string signal;    // RuntimeCrash: "SIGSEGV" etc.

  static TestOutcome pass() { return {}; }
  static TestOutcome test_failed(int n) { return {OutcomeKind::TestFailed, n, {}}; }
  static TestOutcome crash(std::string sig) { return {OutcomeKind::RuntimeCrash, 0, std::move(sig)}; }
  static TestOutcome of(OutcomeKind k) { return {k, 0, {}}; }

  bool passed() const noexcept { return kind == OutcomeKind::Pass; }
  /// "Pass", "TestFailed(3)", "RuntimeCrash(SIGSEGV)", ...
  std::string describe() const;
  friend bool operator==(const TestOutcome&, const TestOutcome&) = default;
};

enum class ErrorClass { RegisterAllocation, Addressing, Other };

std::string_view to_string(ErrorClass c);
ErrorClass error_class_from_string(std::string_view text);

/// Exact rational with round-half-up percentage rendering.
struct Rate {
  std::size_t num = 0;
  std::size_t den = 0;
  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  /// 130/164 -> "79.27" (decimals = 2), computed in integers.
  std::string percent(int decimals = 2) const;
  friend bool operator==(const Rate&, const Rate&) = default;
};

struct EvalResult {
  std::string pair_id;
  std::string backend_id;
  std::size_t edit_distance = 0;
  std::size_t line_edit_distance = 0;
  bool exact_match = false;
  TestOutcome outcome;
  std::optional<ErrorClass> error_class;
  int candidate_index_used = 0;
  std::size_t candidates = 0;
  std::string backend_error;  // set when the backend produced no candidate
  std::string logs;
  double latency_ms = 0.0;
  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

struct SuiteSummary {
  std::size_t n = 0;
  std::size_t total_edit_distance = 0;
  double avg_edit_distance = 0.0;
  double avg_line_edit_distance = 0.0;
  Rate exact_match_rate;
  Rate test_accuracy;
  std::map<ErrorClass, std::size_t> error_class_histogram;
  friend bool operator==(const SuiteSummary&, const SuiteSummary&) = default;
};

SuiteSummary summarize(const std::vector<EvalResult>& results);

struct SyntacticScore {
  std::size_t edit_distance = 0;
  std::size_t line_edit_distance = 0;
  bool exact_match = false;
};

SyntacticScore score_syntactic(std::string_view candidate, std::string_view ground_truth,
                               IsaName isa, NormalizationPolicy policy = NormalizationPolicy::Canonical);

/// Assembles the candidate, links it with the pair's compiled test driver
/// and support sources, and runs it under the configured emulator. Tool
/// output is appended to `logs` with the work directory shown as `<work>`.
/// Throws InfrastructureError when the harness side (test driver, tools)
/// is broken.
TestOutcome run_functional(std::string_view candidate_text, const TranspilePair& pair,
                           const ToolchainConfig& cfg, std::string* logs = nullptr);

enum class RuleSource { Signal, Log, Outcome, Profile };

struct ClassifierRule {
  ErrorClass cls = ErrorClass::Other;
  RuleSource source = RuleSource::Log;
  std::string pattern;
  std::vector<std::string> exclude;  // Profile: registers ignored
};

/// Ordered cascade; first matching rule decides, otherwise Other.
struct ClassifierRules {
  std::string version;
  std::vector<ClassifierRule> rules;

  static ClassifierRules parse(std::string_view text);
  static ClassifierRules load(const std::filesystem::path& path);
  /// `<data_dir>/classifier/rules-v1.txt`.
  static const ClassifierRules& builtin();
};

ErrorClass classify_error(const TestOutcome& outcome, std::string_view logs,
                          const AssemblyUnit& candidate, const ClassifierRules& rules);
ErrorClass classify_error(const TestOutcome& outcome, std::string_view logs,
                          const AssemblyUnit& candidate);

struct EvalOptions {
  GenerationParams params;
  NormalizationPolicy policy = NormalizationPolicy::Canonical;
  std::size_t jobs = 1;
  const ClassifierRules* rules = nullptr;  // builtin when null
};

struct SuiteRun {
  std::vector<EvalResult> results;  // ascending pair_id
  SuiteSummary summary;
};

SuiteRun evaluate_suite(const std::vector<TranspilePair>& pairs, Backend& backend,
                        const ToolchainConfig& cfg, const EvalOptions& options = {});

class MismatchedSuites : public Error {
 public:
  using Error::Error;
};

struct ConfusionMatrix {
  std::size_t both_pass = 0;
  std::size_t both_fail = 0;
  std::size_t a_only_fail = 0;
  std::size_t b_only_fail = 0;
  Rate agreement;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(const std::vector<EvalResult>& a, const std::vector<EvalResult>& b);

std::string result_to_json_line(const EvalResult& r);
EvalResult result_from_json_line(std::string_view line);
std::string summary_to_json_line(const SuiteSummary& s, std::string_view backend_id);

struct ResultsFile {
  std::vector<EvalResult> results;
  std::optional<SuiteSummary> summary;
};

/// One record per result followed by the summary record.
std::string results_to_ndjson(const SuiteRun& run, std::string_view backend_id);
ResultsFile read_results(const std::filesystem::path& path);
ResultsFile parse_results(std::string_view text);

/// Text table with the columns Average Edit Distance, Exact Match, Test Accuracy.
std::string render_table(const std::vector<std::pair<std::string, SuiteSummary>>& rows);
std::string render_confusion(const ConfusionMatrix& m, std::string_view label_a, std::string_view label_b);

}  // namespace asmxlate
