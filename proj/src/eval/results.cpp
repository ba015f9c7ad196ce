#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "asmxlate/eval.hpp"
#include "asmxlate/files.hpp"

namespace asmxlate {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

ordered_json rate_json(const Rate& r) {
  return {{"num", r.num}, {"den", r.den}, {"percent", r.percent(2)}};
}

Rate rate_from(const json& j) { return {j.at("num").get<std::size_t>(), j.at("den").get<std::size_t>()}; }

}  // namespace

std::string result_to_json_line(const EvalResult& r) {
  ordered_json j;
  j["schema"] = kResultSchema;
  j["kind"] = "result";
  j["pair_id"] = r.pair_id;
  j["backend_id"] = r.backend_id;
  j["edit_distance"] = r.edit_distance;
  j["line_edit_distance"] = r.line_edit_distance;
  j["exact_match"] = r.exact_match;
  j["outcome"] = {{"kind", to_string(r.outcome.kind)},
                  {"failed_count", r.outcome.failed_count},
                  {"signal", r.outcome.signal}};
  j["error_class"] = r.error_class ? ordered_json(to_string(*r.error_class)) : ordered_json(nullptr);
  j["candidate_index_used"] = r.candidate_index_used;
  j["candidates"] = r.candidates;
  j["backend_error"] = r.backend_error;
  j["logs"] = r.logs;
  j["latency_ms"] = r.latency_ms;
  return j.dump();
}

EvalResult result_from_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    if (j.value("schema", "") != kResultSchema) throw Error("result record: unsupported schema");
    EvalResult r;
    r.pair_id = j.at("pair_id").get<std::string>();
    r.backend_id = j.at("backend_id").get<std::string>();
    r.edit_distance = j.at("edit_distance").get<std::size_t>();
    r.line_edit_distance = j.value("line_edit_distance", std::size_t{0});
    r.exact_match = j.at("exact_match").get<bool>();
    const auto& o = j.at("outcome");
    r.outcome.kind = outcome_kind_from_string(o.at("kind").get<std::string>());
    r.outcome.failed_count = o.value("failed_count", 0);
    r.outcome.signal = o.value("signal", "");
    if (!j.at("error_class").is_null()) r.error_class = error_class_from_string(j["error_class"].get<std::string>());
    r.candidate_index_used = j.value("candidate_index_used", 0);
    r.candidates = j.value("candidates", std::size_t{0});
    r.backend_error = j.value("backend_error", "");
    r.logs = j.value("logs", "");
    r.latency_ms = j.value("latency_ms", 0.0);
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("result record: ") + e.what());
  }
}

std::string summary_to_json_line(const SuiteSummary& s, std::string_view backend_id) {
  ordered_json j;
  j["schema"] = kSummarySchema;
  j["kind"] = "summary";
  j["backend_id"] = backend_id;
  j["n"] = s.n;
  j["total_edit_distance"] = s.total_edit_distance;
  j["avg_edit_distance"] = s.avg_edit_distance;
  j["avg_line_edit_distance"] = s.avg_line_edit_distance;
  j["exact_match_rate"] = rate_json(s.exact_match_rate);
  j["test_accuracy"] = rate_json(s.test_accuracy);
  ordered_json hist = ordered_json::object();
  for (const auto& [cls, count] : s.error_class_histogram) hist[std::string(to_string(cls))] = count;
  j["error_class_histogram"] = hist;
  return j.dump();
}

std::string results_to_ndjson(const SuiteRun& run, std::string_view backend_id) {
  std::string out;
  for (const auto& r : run.results) out += result_to_json_line(r) + "\n";
  out += summary_to_json_line(run.summary, backend_id) + "\n";
  return out;
}

ResultsFile parse_results(std::string_view text) {
  ResultsFile f;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(std::string("results: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind == "result") {
      f.results.push_back(result_from_json_line(line));
    } else if (kind == "summary") {
      if (j.value("schema", "") != kSummarySchema) throw Error("summary record: unsupported schema");
      SuiteSummary s;
      s.n = j.at("n").get<std::size_t>();
      s.total_edit_distance = j.at("total_edit_distance").get<std::size_t>();
      s.avg_edit_distance = j.at("avg_edit_distance").get<double>();
      s.avg_line_edit_distance = j.value("avg_line_edit_distance", 0.0);
      s.exact_match_rate = rate_from(j.at("exact_match_rate"));
      s.test_accuracy = rate_from(j.at("test_accuracy"));
      for (const auto& [k, v] : j.at("error_class_histogram").items()) {
        s.error_class_histogram[error_class_from_string(k)] = v.get<std::size_t>();
      }
      f.summary = s;
    } else {
      throw Error("results: unknown record kind '" + kind + "'");
    }
  }
  return f;
}

ResultsFile read_results(const std::filesystem::path& path) { return parse_results(read_file(path)); }

std::string render_table(const std::vector<std::pair<std::string, SuiteSummary>>& rows) {
  const std::vector<std::string> head = {"Run", "N", "Average Edit Distance", "Exact Match", "Test Accuracy",
                                         "Register", "Addressing", "Other"};
  std::vector<std::vector<std::string>> cells{head};
  for (const auto& [label, s] : rows) {
    const auto hist = [&](ErrorClass c) {
      const auto it = s.error_class_histogram.find(c);
      return std::to_string(it == s.error_class_histogram.end() ? 0 : it->second);
    };
    cells.push_back({label, std::to_string(s.n), fixed(s.avg_edit_distance, 2),
                     s.exact_match_rate.percent(2) + "%", s.test_accuracy.percent(2) + "%",
                     hist(ErrorClass::RegisterAllocation), hist(ErrorClass::Addressing), hist(ErrorClass::Other)});
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  const auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += " | ";
      if (c == 0) {
        out += row[c] + std::string(width[c] - row[c].size(), ' ');
      } else {
        out += std::string(width[c] - row[c].size(), ' ') + row[c];
      }
    }
    out += "\n";
  };
  emit_row(cells[0]);
  for (std::size_t c = 0; c < width.size(); ++c) {
    if (c > 0) out += "-+-";
    out += std::string(width[c], '-');
  }
  out += "\n";
  for (std::size_t r = 1; r < cells.size(); ++r) emit_row(cells[r]);
  return out;
}

std::string render_confusion(const ConfusionMatrix& m, std::string_view a, std::string_view b) {
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"both pass", std::to_string(m.both_pass)},
      {"both fail", std::to_string(m.both_fail)},
      {"fail only in " + std::string(a), std::to_string(m.a_only_fail)},
      {"fail only in " + std::string(b), std::to_string(m.b_only_fail)},
      {"agreement", std::to_string(m.agreement.num) + "/" + std::to_string(m.agreement.den) + " = " +
                        m.agreement.percent(1) + "%"},
  };
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  std::ostringstream out;
  out << "Confusion (" << a << " vs " << b << ")\n";
  for (const auto& [k, v] : rows) out << "  " << k << ":" << std::string(w - k.size() + 1, ' ') << v << "\n";
  return out.str();
}

}  // namespace asmxlate
