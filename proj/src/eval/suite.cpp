#include <algorithm>

#include "asmxlate/eval.hpp"
#include "asmxlate/parallel.hpp"

namespace asmxlate {

namespace {

EvalResult evaluate_pair(const TranspilePair& pair, Backend& backend, const ToolchainConfig& cfg,
                         const EvalOptions& options, const ClassifierRules& rules) {
  EvalResult r;
  r.pair_id = pair.pair_id;
  r.backend_id = backend.id();
  TranspileRequest req;
  req.source_text = pair.x86.normalized;
  req.target_isa = pair.target_isa;
  req.params = options.params;
  req.pair_id = pair.pair_id;

  std::vector<Candidate> candidates;
  try {
    TranspileResponse resp = backend.transpile(req);
    r.latency_ms = resp.latency_ms;
    candidates = std::move(resp.candidates);
  } catch (const BackendError& e) {
    r.backend_error = e.what();
    candidates = {Candidate{}};
  }
  r.candidates = r.backend_error.empty() ? candidates.size() : 0;

  // syntactic metrics always come from beam 0
  const SyntacticScore s = score_syntactic(candidates[0].text, pair.target.raw, pair.target_isa, options.policy);
  r.edit_distance = s.edit_distance;
  r.line_edit_distance = s.line_edit_distance;
  r.exact_match = s.exact_match;

  std::string first_logs;
  TestOutcome first_outcome;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    std::string logs;
    const TestOutcome outcome = run_functional(candidates[k].text, pair, cfg, &logs);
    if (k == 0) {
      first_logs = logs;
      first_outcome = outcome;
    }
    if (outcome.passed()) {
      r.outcome = outcome;
      r.logs = std::move(logs);
      r.candidate_index_used = static_cast<int>(k);
      return r;
    }
  }
  r.outcome = first_outcome;
  r.logs = std::move(first_logs);
  r.candidate_index_used = 0;
  if (!r.backend_error.empty()) {
    r.error_class = ErrorClass::Other;
  } else {
    const AssemblyUnit unit = parse_assembly(candidates[0].text, isa(pair.target_isa), pair.pair_id);
    r.error_class = classify_error(r.outcome, r.logs, unit, rules);
  }
  return r;
}

}  // namespace

SuiteRun evaluate_suite(const std::vector<TranspilePair>& pairs, Backend& backend, const ToolchainConfig& cfg,
                        const EvalOptions& options) {
  if (pairs.empty()) throw Error("evaluate_suite: no pairs");
  options.params.validate();
  const ClassifierRules& rules = options.rules != nullptr ? *options.rules : ClassifierRules::builtin();
  SuiteRun run;
  run.results.resize(pairs.size());
  parallel_for(pairs.size(), options.jobs, [&](std::size_t i) {
    run.results[i] = evaluate_pair(pairs[i], backend, cfg, options, rules);
  });
  std::sort(run.results.begin(), run.results.end(),
            [](const EvalResult& a, const EvalResult& b) { return a.pair_id < b.pair_id; });
  for (const auto& r : run.results) {
    if (r.exact_match && r.edit_distance != 0) {
      throw std::logic_error("exact match with non-zero edit distance for " + r.pair_id);
    }
    if (r.error_class.has_value() == r.outcome.passed()) {
      throw std::logic_error("error class / outcome mismatch for " + r.pair_id);
    }
  }
  run.summary = summarize(run.results);
  return run;
}

}  // namespace asmxlate
