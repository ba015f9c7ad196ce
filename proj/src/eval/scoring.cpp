#include <map>

#include "asmxlate/eval.hpp"
#include "asmxlate/levenshtein.hpp"

namespace asmxlate {

namespace {

template <class E>
E parse_enum(std::string_view text, std::initializer_list<E> all, std::string_view what) {
  for (E e : all) {
    if (to_string(e) == text) return e;
  }
  throw Error("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

}  // namespace

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Pass: return "Pass";
    case OutcomeKind::TestFailed: return "TestFailed";
    case OutcomeKind::AssembleError: return "AssembleError";
    case OutcomeKind::LinkError: return "LinkError";
    case OutcomeKind::RuntimeCrash: return "RuntimeCrash";
    case OutcomeKind::Timeout: return "Timeout";
  }
  return "?";
}

OutcomeKind outcome_kind_from_string(std::string_view text) {
  return parse_enum(text,
                    {OutcomeKind::Pass, OutcomeKind::TestFailed, OutcomeKind::AssembleError,
                     OutcomeKind::LinkError, OutcomeKind::RuntimeCrash, OutcomeKind::Timeout},
                    "outcome");
}

std::string TestOutcome::describe() const {
  std::string s(to_string(kind));
  if (kind == OutcomeKind::TestFailed) s += "(" + std::to_string(failed_count) + ")";
  if (kind == OutcomeKind::RuntimeCrash) s += "(" + signal + ")";
  return s;
}

std::string_view to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::RegisterAllocation: return "RegisterAllocation";
    case ErrorClass::Addressing: return "Addressing";
    case ErrorClass::Other: return "Other";
  }
  return "?";
}

ErrorClass error_class_from_string(std::string_view text) {
  if (text == "register") return ErrorClass::RegisterAllocation;
  if (text == "addressing") return ErrorClass::Addressing;
  if (text == "other") return ErrorClass::Other;
  return parse_enum(text, {ErrorClass::RegisterAllocation, ErrorClass::Addressing, ErrorClass::Other},
                    "error class");
}

std::string Rate::percent(int decimals) const {
  if (den == 0) return "n/a";
  unsigned long long scale = 100;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  // round half up: floor((2*num*scale + den) / (2*den))
  const unsigned long long q = (2ULL * num * scale + den) / (2ULL * den);
  std::string whole = std::to_string(q);
  if (decimals == 0) return whole;
  if (whole.size() <= static_cast<std::size_t>(decimals)) {
    whole.insert(0, static_cast<std::size_t>(decimals) + 1 - whole.size(), '0');
  }
  whole.insert(whole.size() - static_cast<std::size_t>(decimals), ".");
  return whole;
}

SyntacticScore score_syntactic(std::string_view candidate, std::string_view ground_truth, IsaName target,
                               NormalizationPolicy policy) {
  const Isa& arch = isa(target);
  const std::string a = normalize_text(candidate, arch, policy);
  const std::string b = normalize_text(ground_truth, arch, policy);
  SyntacticScore s;
  s.edit_distance = levenshtein(a, b);
  s.line_edit_distance = line_levenshtein(a, b);
  s.exact_match = a == b;
  return s;
}

SuiteSummary summarize(const std::vector<EvalResult>& results) {
  SuiteSummary s;
  s.n = results.size();
  s.exact_match_rate.den = s.n;
  s.test_accuracy.den = s.n;
  s.error_class_histogram = {{ErrorClass::RegisterAllocation, 0}, {ErrorClass::Addressing, 0}, {ErrorClass::Other, 0}};
  std::size_t lines = 0;
  for (const auto& r : results) {
    s.total_edit_distance += r.edit_distance;
    lines += r.line_edit_distance;
    if (r.exact_match) ++s.exact_match_rate.num;
    if (r.outcome.passed()) ++s.test_accuracy.num;
    if (r.error_class) ++s.error_class_histogram[*r.error_class];
  }
  if (s.n > 0) {
    s.avg_edit_distance = static_cast<double>(s.total_edit_distance) / static_cast<double>(s.n);
    s.avg_line_edit_distance = static_cast<double>(lines) / static_cast<double>(s.n);
  }
  return s;
}

ConfusionMatrix confusion_matrix(const std::vector<EvalResult>& a, const std::vector<EvalResult>& b) {
  std::map<std::string, bool> pass_a, pass_b;
  for (const auto& r : a) pass_a[r.pair_id] = r.outcome.passed();
  for (const auto& r : b) pass_b[r.pair_id] = r.outcome.passed();
  if (pass_a.size() != a.size() || pass_b.size() != b.size()) {
    throw MismatchedSuites("confusion_matrix: duplicate pair ids");
  }
  ConfusionMatrix m;
  for (const auto& [id, pa] : pass_a) {
    const auto it = pass_b.find(id);
    if (it == pass_b.end()) throw MismatchedSuites("confusion_matrix: '" + id + "' missing from second run");
    const bool pb = it->second;
    if (pa && pb) ++m.both_pass;
    else if (!pa && !pb) ++m.both_fail;
    else if (!pa) ++m.a_only_fail;
    else ++m.b_only_fail;
  }
  if (pass_b.size() != pass_a.size()) throw MismatchedSuites("confusion_matrix: pair id sets differ");
  m.agreement = Rate{m.both_pass + m.both_fail, pass_a.size()};
  return m;
}

}  // namespace asmxlate
