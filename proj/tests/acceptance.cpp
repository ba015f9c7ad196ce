// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures, so ctest reports the binary as failed if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <sstream>
#include <unistd.h>

#include "asmxlate/backend.hpp"
#include "asmxlate/bench.hpp"
#include "asmxlate/dataset.hpp"
#include "asmxlate/eval.hpp"
#include "asmxlate/files.hpp"
#include "asmxlate/levenshtein.hpp"
#include "asmxlate/process.hpp"
#include "asmxlate/segmenter.hpp"
#include "asmxlate/tokenizer.hpp"
#include "support.hpp"

using namespace asmxlate;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// tolerances
constexpr double kLevenshteinBudgetSeconds = 10.0;
constexpr double kReplayBudgetSeconds = 300.0;
constexpr double kSleepLow = 0.010, kSleepHigh = 0.050;
constexpr double kRatioTol = 0.005;  // two-decimal ratios
constexpr double kGeomeanTol = 1e-12;
constexpr double kRelTol = 1e-9;
constexpr int kPropertyCases = 1000;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

const std::vector<TranspilePair>& suite(const std::string& name) {
  static std::map<std::string, std::vector<TranspilePair>> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    it = cache
             .emplace(name, load_eval_suite(testsupport::source_dir() / "suites" / name, IsaName::ARMV5,
                                            testsupport::test_config(10.0), default_tokenizer(), 4))
             .first;
  }
  return it->second;
}

std::vector<EvalResult> g_results;  // every result produced by criteria 4 and 5

std::string c1(Check& c) {
  std::vector<std::string> all{""};
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].size() == 6) continue;
    for (char ch : {'a', 'b', 'c'}) all.push_back(all[i] + ch);
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> len(0, 50);
  std::uniform_int_distribution<int> ch('a', 'z');
  for (int k = 0; k < 1000; ++k) {
    std::string a(len(rng), ' '), b(len(rng), ' ');
    for (auto& x : a) x = static_cast<char>(ch(rng));
    for (auto& x : b) x = static_cast<char>(ch(rng));
    pairs.emplace_back(a, b);
  }
  // library time only; the oracle is slow on purpose
  std::vector<std::size_t> got;
  got.reserve(all.size() * all.size() + pairs.size());
  const auto t0 = Clock::now();
  for (const auto& a : all)
    for (const auto& b : all) got.push_back(levenshtein(a, b));
  for (const auto& [a, b] : pairs) got.push_back(levenshtein(a, b));
  const double t = seconds_since(t0);
  std::size_t k = 0, bad = 0;
  for (const auto& a : all)
    for (const auto& b : all) bad += got[k++] != testsupport::levenshtein_oracle(a, b);
  for (const auto& [a, b] : pairs) bad += got[k++] != testsupport::levenshtein_oracle(a, b);
  c.expect(bad == 0, std::to_string(bad) + " mismatches");
  c.expect(t < kLevenshteinBudgetSeconds, "took " + std::to_string(t) + " s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu pairs match the oracle, %.2f s", got.size(), t);
  return buf;
}

std::string c2(Check& c) {
  const auto ext = tokenize("ldr r1, r2", default_tokenizer()).tokens;
  const auto base = tokenize("ldr r1, r2", TokenizerSpec::make({})).tokens;
  c.expect(ext == std::vector<std::string>{"ldr", " ", "r1", ",", " ", "r2"}, "extended tokens differ");
  c.expect(base.size() > ext.size(), "byte fallback not longer");
  return std::to_string(ext.size()) + " tokens extended, " + std::to_string(base.size()) + " byte-level";
}

std::string c3(Check& c) {
  std::vector<std::string> corpus;
  for (const char* d : {"x86_64", "armv5"})
    for (const auto& e : fs::directory_iterator(testsupport::fixtures() / "corpus" / d))
      corpus.push_back(read_file(e.path()));
  const double r = token_reduction_ratio(corpus, TokenizerSpec::make({}), default_tokenizer());
  c.expect(corpus.size() >= 20, "corpus too small");
  c.expect(r > 0.0, "no reduction");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu files, mean token count reduced by %.1f%%", corpus.size(), 100 * r);
  return buf;
}

std::string c4(Check& c) {
  const auto t0 = Clock::now();
  const auto& pairs = suite("mini");
  std::map<std::string, std::string> truth;
  for (const auto& p : pairs) truth[p.pair_id] = p.target.raw;
  ReplayBackend replay(truth);
  const auto run = evaluate_suite(pairs, replay, testsupport::test_config(10.0), {.params = {}, .jobs = 4});
  const double t = seconds_since(t0);
  g_results.insert(g_results.end(), run.results.begin(), run.results.end());
  const auto& s = run.summary;
  c.expect(s.n >= 10, "suite has fewer than 10 programs");
  c.expect(s.exact_match_rate == (Rate{s.n, s.n}), "exact match " + s.exact_match_rate.percent());
  c.expect(s.avg_edit_distance == 0.0, "non-zero edit distance");
  c.expect(s.test_accuracy == (Rate{s.n, s.n}), "test accuracy " + s.test_accuracy.percent());
  c.expect(t < kReplayBudgetSeconds, "took " + std::to_string(t) + " s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu programs, exact %s%%, ed %.1f, acc %s%%, %.1f s", s.n,
                s.exact_match_rate.percent().c_str(), s.avg_edit_distance, s.test_accuracy.percent().c_str(), t);
  return buf;
}

std::string c5(Check& c) {
  RuleBackend rule;
  const auto run = evaluate_suite(suite("rule"), rule, testsupport::test_config(10.0), {.params = {}, .jobs = 4});
  g_results.insert(g_results.end(), run.results.begin(), run.results.end());
  const auto& s = run.summary;
  c.expect(s.n >= 10, "fewer than 10 rule fixtures");
  c.expect(s.test_accuracy == (Rate{s.n, s.n}), "test accuracy " + s.test_accuracy.percent());
  for (const auto& r : run.results)
    c.expect(r.outcome.passed(), r.pair_id + " " + r.outcome.describe() + " " + r.backend_error);
  return std::to_string(s.n) + " fixtures, test accuracy " + s.test_accuracy.percent() + "%";
}

std::string c6(Check& c) {
  const std::string acc = Rate{130, 164}.percent(2);
  c.expect(acc == "79.27", "130/164 -> " + acc);
  std::vector<EvalResult> a, b;
  for (std::size_t i = 0; i < 164; ++i) {
    EvalResult x, y;
    x.pair_id = y.pair_id = "p" + std::to_string(1000 + i);
    x.outcome = i < 15 ? TestOutcome::test_failed(1) : TestOutcome::pass();
    y.outcome = i >= 15 && i < 38 ? TestOutcome::test_failed(1) : TestOutcome::pass();
    a.push_back(x);
    b.push_back(y);
  }
  const auto m = confusion_matrix(a, b);
  c.expect(m.agreement == (Rate{126, 164}), "agreement " + std::to_string(m.agreement.num));
  c.expect(m.agreement.percent(1) == "76.8", "agreement -> " + m.agreement.percent(1));
  return "130/164 -> " + acc + ", agreement " + std::to_string(m.agreement.num) + "/164 -> " +
         m.agreement.percent(1);
}

std::string c7(Check& c) {
  std::mt19937_64 rng(7);
  // exact match implies zero distance
  for (const auto& r : g_results) c.expect(!r.exact_match || r.edit_distance == 0, r.pair_id + " exact with ed>0");
  c.expect(!g_results.empty(), "no eval results collected");
  static const std::vector<std::string> lines = {"mov r0, #1", "mov r0, #1 @ c", "  mov   r0,#1", "bx lr",
                                                 "@ only", "", "add r1, r2, r3", "add r1, r3, r2"};
  std::uniform_int_distribution<std::size_t> pick(0, lines.size() - 1), n(0, 6);
  for (int k = 0; k < kPropertyCases; ++k) {
    std::string x, y;
    for (std::size_t i = n(rng); i; --i) x += lines[pick(rng)] + "\n";
    for (std::size_t i = n(rng); i; --i) y += lines[pick(rng)] + "\n";
    const auto s = score_syntactic(x, y, IsaName::ARMV5);
    c.expect(!s.exact_match || s.edit_distance == 0, "syntactic exact with ed>0");
    c.expect(s.exact_match == (s.edit_distance == 0), "exact flag disagrees with distance");
  }
  // tokenizer: lossless and never worse than the fallback
  static const std::vector<std::string> atoms = {"ldr", "r1", "r12", "%eax", "$8", "#0", " ", ",", "[", "]",
                                                 "\n", ".L1", "_x", "%", "é", "\xff", "movl", "x"};
  std::uniform_int_distribution<std::size_t> atom(0, atoms.size() - 1), len(0, 40);
  const auto base = TokenizerSpec::make({});
  for (int k = 0; k < kPropertyCases; ++k) {
    std::string s;
    for (std::size_t i = len(rng); i; --i) s += atoms[atom(rng)];
    const auto toks = tokenize(s, default_tokenizer()).tokens;
    c.expect(std::accumulate(toks.begin(), toks.end(), std::string{}) == s, "tokenizer lost bytes");
    c.expect(count_tokens(s, default_tokenizer()) <= count_tokens(s, base), "extended count above fallback");
  }
  // segmenter reconstruction on every assembly fixture
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(testsupport::fixtures())) {
    if (e.path().extension() != ".s") continue;
    ++files;
    const IsaName i = e.path().parent_path().filename() == "x86_64" ? IsaName::X86_64 : IsaName::ARMV5;
    const auto u = parse_assembly(read_file(e.path()), isa(i), e.path().stem().string());
    for (std::size_t budget : {16u, 1024u}) {
      std::vector<Line> joined;
      for (const auto& seg : segment_unit(u, default_tokenizer(), budget)) {
        c.expect(seg.budget_violation || seg.token_count <= budget, "segment over budget");
        joined.insert(joined.end(), seg.lines.begin(), seg.lines.end());
      }
      std::vector<Line> want;
      if (u.functions.empty()) {
        want = u.lines;
      } else {
        for (const auto& f : u.functions) want.insert(want.end(), u.lines.begin() + f.begin, u.lines.begin() + f.end);
      }
      c.expect(joined == want, e.path().filename().string() + " does not reconstruct");
    }
  }
  // geomean scale and permutation
  std::uniform_real_distribution<double> d(1e-3, 1e3);
  for (int k = 0; k < kPropertyCases; ++k) {
    std::vector<double> xs(1 + k % 13);
    for (auto& x : xs) x = d(rng);
    const double g = geomean(xs), s = d(rng);
    auto scaled = xs;
    for (auto& x : scaled) x *= s;
    c.expect(std::abs(geomean(scaled) - s * g) <= kRelTol * s * g, "geomean scale");
    std::shuffle(xs.begin(), xs.end(), rng);
    c.expect(std::abs(geomean(xs) - g) <= kRelTol * g, "geomean permutation");
  }
  return std::to_string(g_results.size()) + " results, " + std::to_string(kPropertyCases) +
         " cases per property, " + std::to_string(files) + " segmented fixtures";
}

std::string c8(Check& c) {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(testsupport::fixtures() / "classifier"))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  std::map<std::string, int> per;
  std::size_t right = 0;
  for (const auto& d : dirs) {
    std::string want = read_file(d / "expected");
    want.erase(want.find_last_not_of(" \n") + 1);
    ++per[want];
    TranspilePair p;
    p.pair_id = d.filename().string();
    p.test_source_path = d / "test.c";
    const auto text = read_file(d / "candidate.s");
    std::string logs;
    const auto o = run_functional(text, p, testsupport::test_config(3.0), &logs);
    const auto got = o.passed() ? std::string("Pass")
                                : std::string(to_string(classify_error(o, logs, parse_assembly(text, isa(IsaName::ARMV5)))));
    c.expect(got == want, p.pair_id + ": " + got + " != " + want);
    right += got == want;
  }
  for (const char* cls : {"RegisterAllocation", "Addressing", "Other"})
    c.expect(per[cls] >= 4, std::string("fewer than 4 ") + cls);
  return std::to_string(right) + "/" + std::to_string(dirs.size()) + " classified correctly";
}

std::string c9(Check& c) {
  c.expect(std::abs(geomean({1, 1, 1}) - 1) < kGeomeanTol, "[1,1,1]");
  c.expect(std::abs(geomean({2, 8}) - 4) < kGeomeanTol, "[2,8]");
  c.expect(std::abs(geomean({3, 9, 27}) - 9) < kGeomeanTol, "[3,9,27]");
  BenchOptions o;
  o.runs = 5;
  o.warmup = 1;
  const auto s = bench_run(BENCH_SLEEP_BIN, o);
  c.expect(s.geomean_time >= kSleepLow && s.geomean_time <= kSleepHigh,
           "sleep geomean " + std::to_string(s.geomean_time));
  auto mk = [](std::string mode, double t, double rss) {
    BenchSummary b;
    b.mode = std::move(mode);
    b.n_valid = 1;
    b.geomean_time = t;
    b.geomean_rss = rss;
    return b;
  };
  const auto r = compare_modes({mk("base", 1.73, 2.49e9), mk("other", 1.00, 1.034e9)}, "base");
  c.expect(std::abs(r.at(1).memory_ratio - 2.41) <= kRatioTol, "memory ratio " + std::to_string(r.at(1).memory_ratio));
  c.expect(std::abs(r.at(1).speedup - 1.73) <= kRatioTol, "speedup " + std::to_string(r.at(1).speedup));
  char buf[160];
  std::snprintf(buf, sizeof buf, "closed forms ok, sleep geomean %.4f s, memory %.2fx, speedup %.2fx", s.geomean_time,
                r.at(1).memory_ratio, r.at(1).speedup);
  return buf;
}

std::string strip_latency(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    auto j = nlohmann::ordered_json::parse(line);
    j.erase("latency_ms");
    out += j.dump() + "\n";
  }
  return out;
}

std::string c10(Check& c) {
  const auto dir = fs::temp_directory_path() / ("asmx_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<std::string> texts;
  for (const char* name : {"a.ndjson", "b.ndjson"}) {
    const auto out = dir / name;
    const auto r = run_command({testsupport::cli_path().string(), "--config",
                                (testsupport::source_dir() / "config" / "toolchain.json").string(), "--jobs", "4",
                                "eval", "run", "--suite", (testsupport::source_dir() / "suites" / "rule").string(),
                                "--backend", "rule", "--out", out.string()},
                               {.timeout_seconds = 600, .cwd = {}});
    c.expect(r.exit_code == 0, "eval run exited " + std::to_string(r.exit_code) + ": " + r.err);
    texts.push_back(fs::exists(out) ? read_file(out) : "");
  }
  fs::remove_all(dir);
  c.expect(!texts[0].empty(), "no output");
  c.expect(strip_latency(texts[0]) == strip_latency(texts[1]), "outputs differ");
  return "two runs identical apart from latency_ms (" + std::to_string(texts[0].size()) + " bytes)";
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<std::string(Check&)>>> criteria{
      {1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5}, {6, c6}, {7, c7}, {8, c8}, {9, c9}, {10, c10}};
  int failed = 0;
  for (const auto& [n, fn] : criteria) {
    Check c;
    std::string detail;
    try {
      detail = fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const std::string why = c.why.str();
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << (c.ok ? detail : why) << std::endl;
    failed += !c.ok;
  }
  return failed;
}
