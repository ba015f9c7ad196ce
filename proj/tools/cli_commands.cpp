#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <json.hpp>

#include "asmxlate/backend.hpp"
#include "asmxlate/bench.hpp"
#include "asmxlate/dataset.hpp"
#include "asmxlate/eval.hpp"
#include "asmxlate/files.hpp"
#include "asmxlate/parallel.hpp"
#include "asmxlate/segmenter.hpp"
#include "cli.hpp"

namespace asmxlate::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kRunSchema = "asmxlate.run/1";

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  std::size_t jobs = default_jobs();
};

fs::path config_path(const Globals& g) {
  if (!g.config.empty()) return g.config;
  if (const char* env = std::getenv("ASMXLATE_CONFIG"); env != nullptr && *env != '\0') return env;
  return fs::path(ASMXLATE_SOURCE_DIR) / "config" / "toolchain.json";
}

TokenizerSpec load_spec(const std::string& path) {
  return path.empty() ? default_tokenizer() : load_vocab(path);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text << std::flush;
  } else {
    write_file_atomic(out, text);
  }
}

/// One record per mutating subcommand, written next to its main output.
class RunRecord {
 public:
  explicit RunRecord(const std::vector<std::string>& argv) : argv_(argv), started_(utc_timestamp()) {}

  void add_output(const std::string& path) {
    if (!path.empty() && path != "-") outputs_.push_back(path);
  }

  void write(const std::string& primary, const ToolchainConfig* cfg, const std::vector<IsaName>& isas) const {
    if (primary.empty() || primary == "-") return;
    ordered_json j;
    j["schema"] = kRunSchema;
    j["command_line"] = argv_;
    j["config_fingerprint"] = cfg != nullptr ? config_fingerprint(*cfg) : "";
    j["tool_versions"] = ordered_json::array();
    if (cfg != nullptr) {
      for (const auto& fp : toolchain_fingerprints(*cfg, isas)) {
        j["tool_versions"].push_back({{"isa", to_string(fp.isa)}, {"command", fp.command}, {"version", fp.version}});
      }
    }
    j["started"] = started_;
    j["finished"] = utc_timestamp();
    j["outputs"] = outputs_;
    write_file_atomic(primary + ".run.json", j.dump(2) + "\n");
  }

 private:
  std::vector<std::string> argv_;
  std::string started_;
  std::vector<std::string> outputs_;
};

struct BackendFlags {
  std::string id = "rule";
  std::string url = "http://127.0.0.1:8000";
  std::string model;
  std::size_t max_in_flight = 4;
  double timeout = 120.0;
  int retries = 2;
};

void add_backend_flags(CLI::App* cmd, BackendFlags& f) {
  cmd->add_option("--backend", f.id, "identity | replay | rule | remote")
      ->check(CLI::IsMember({"identity", "replay", "rule", "remote"}))
      ->capture_default_str();
  cmd->add_option("--url", f.url, "remote: server base URL")->capture_default_str();
  cmd->add_option("--model", f.model, "remote: model name sent with each request");
  cmd->add_option("--max-in-flight", f.max_in_flight, "remote: concurrent request cap")->capture_default_str();
  cmd->add_option("--request-timeout", f.timeout, "remote: per-request timeout in seconds")->capture_default_str();
  cmd->add_option("--retries", f.retries, "remote: retries on transport or 5xx errors")->capture_default_str();
}

std::unique_ptr<Backend> make_backend(const BackendFlags& f, const ToolchainConfig& cfg, const TokenizerSpec& spec,
                                      const std::vector<TranspilePair>& pairs) {
  if (f.id == "identity") return std::make_unique<IdentityBackend>();
  if (f.id == "rule") return std::make_unique<RuleBackend>();
  if (f.id == "replay") {
    std::map<std::string, std::string> truth;
    for (const auto& p : pairs) truth[p.pair_id] = p.target.raw;
    return std::make_unique<ReplayBackend>(std::move(truth));
  }
  RemoteOptions o;
  o.url = f.url;
  o.model = f.model;
  o.max_in_flight = f.max_in_flight;
  o.timeout_seconds = f.timeout;
  o.max_retries = f.retries;
  return std::make_unique<RemoteBackend>(o, cfg, spec);
}

std::vector<AssemblyUnit> units_from(const std::vector<std::string>& stores, const std::vector<std::string>& asm_files,
                                     const std::string& asm_isa) {
  std::vector<AssemblyUnit> units;
  for (const auto& s : stores) {
    for (const auto& p : read_store(s)) {
      units.push_back(parse_assembly(p.x86.raw, isa(IsaName::X86_64), p.pair_id));
      units.push_back(parse_assembly(p.target.raw, isa(p.target_isa), p.pair_id));
    }
  }
  if (!asm_files.empty()) {
    if (asm_isa.empty()) throw Error("--isa is required with --asm");
    const Isa& arch = isa(isa_from_string(asm_isa));
    for (const auto& f : asm_files) units.push_back(parse_assembly(read_file(f), arch, f));
  }
  if (units.empty()) throw Error("no input: pass --store and/or --asm");
  return units;
}

}  // namespace

int run(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  Globals g;
  CLI::App app{"asmxlate: x86 to RISC assembly transpilation harness"};
  app.set_version_flag("--version", "asmxlate 0.1.0");
  app.require_subcommand(1);
  app.add_option("--config", g.config, "toolchain config (default: $ASMXLATE_CONFIG or config/toolchain.json)");
  app.add_option("--seed", g.seed, "seed for every stochastic choice")->capture_default_str();
  app.add_option("--jobs", g.jobs, "max parallel workers")->check(CLI::PositiveNumber);

  std::function<int()> action;
  RunRecord record(args);

  // dataset
  auto* dataset = app.add_subcommand("dataset", "build and inspect paired corpora");
  dataset->require_subcommand(1);
  struct {
    std::string src, target = "armv5", out, vocab;
    std::optional<std::size_t> sample;
  } db;
  auto* dbuild = dataset->add_subcommand("build", "compile C sources into an NDJSON pair store");
  dbuild->add_option("--src", db.src, "directory of .c files")->required();
  dbuild->add_option("--target", db.target, "target ISA")->capture_default_str();
  dbuild->add_option("--sample", db.sample, "number of sources to sample");
  dbuild->add_option("--out", db.out, "store path")->required();
  dbuild->add_option("--vocab", db.vocab, "tokenizer vocabulary for token counts");
  dbuild->callback([&] {
    action = [&] {
      const ToolchainConfig cfg = load_config(config_path(g));
      const IsaName target = isa_from_string(db.target);
      CorpusBuildOptions opts;
      opts.sample = db.sample;
      opts.seed = g.seed;
      opts.jobs = g.jobs;
      const CorpusManifest m = build_corpus(db.src, db.out, target, cfg, load_spec(db.vocab), opts);
      std::cout << manifest_to_json(m);
      record.add_output(db.out);
      record.add_output(manifest_path(db.out).string());
      record.write(db.out, &cfg, {IsaName::X86_64, target});
      return static_cast<int>(kOk);
    };
  });
  std::string inspect_store;
  auto* dinspect = dataset->add_subcommand("inspect", "summarize a pair store");
  dinspect->add_option("store", inspect_store, "store path")->required();
  dinspect->callback([&] {
    action = [&] {
      if (fs::exists(manifest_path(inspect_store))) std::cout << read_file(manifest_path(inspect_store));
      for (const auto& p : read_store(inspect_store)) {
        ordered_json j;
        j["pair_id"] = p.pair_id;
        j["target_isa"] = to_string(p.target_isa);
        j["token_count_x86"] = p.token_count_x86;
        j["token_count_target"] = p.token_count_target;
        j["tokenizer_version"] = p.tokenizer_version;
        j["has_test"] = p.test_source_path.has_value();
        std::cout << j.dump() << "\n";
      }
      return static_cast<int>(kOk);
    };
  });

  // tokenizer
  auto* tok = app.add_subcommand("tokenizer", "build vocabularies and count tokens");
  tok->require_subcommand(1);
  struct {
    std::vector<std::string> stores, asm_files;
    std::string isa, out, vocab, text, in, fallback = "byte";
    std::size_t top_k = kDefaultTopK;
  } tk;
  auto* tbuild = tok->add_subcommand("build", "extended vocabulary from a corpus");
  tbuild->add_option("--store", tk.stores, "pair store(s)");
  tbuild->add_option("--asm", tk.asm_files, "assembly file(s)");
  tbuild->add_option("--isa", tk.isa, "ISA of --asm files");
  tbuild->add_option("--top-k", tk.top_k, "mnemonics kept")->capture_default_str()->check(CLI::PositiveNumber);
  tbuild->add_option("--fallback", tk.fallback, "byte | charclass")->capture_default_str();
  tbuild->add_option("--out", tk.out, "vocab file")->required();
  tbuild->callback([&] {
    action = [&] {
      const auto spec = build_vocab(units_from(tk.stores, tk.asm_files, tk.isa), tk.top_k,
                                    fallback_from_string(tk.fallback));
      emit(tk.out, serialize_vocab(spec));
      record.add_output(tk.out);
      record.write(tk.out, nullptr, {});
      return static_cast<int>(kOk);
    };
  });
  auto* ttok = tok->add_subcommand("tokenize", "tokenize text");
  ttok->add_option("--vocab", tk.vocab, "vocab file (default: shipped vocabulary)");
  auto* text_opt = ttok->add_option("--text", tk.text, "literal text");
  ttok->add_option("--in", tk.in, "file to tokenize")->excludes(text_opt);
  ttok->callback([&] {
    action = [&] {
      const auto spec = load_spec(tk.vocab);
      const std::string text = tk.in.empty() ? tk.text : read_file(tk.in);
      const auto ts = tokenize(text, spec);
      ordered_json j;
      j["count"] = ts.tokens.size();
      j["source_len_chars"] = ts.source_len_chars;
      j["tokens"] = ts.tokens;
      std::cout << j.dump() << "\n";
      return static_cast<int>(kOk);
    };
  });
  auto* tstats = tok->add_subcommand("stats", "token reduction against the byte-level baseline");
  tstats->add_option("--vocab", tk.vocab, "extended vocab (default: shipped vocabulary)");
  tstats->add_option("--store", tk.stores, "pair store(s)");
  tstats->add_option("--asm", tk.asm_files, "assembly file(s)");
  tstats->add_option("--isa", tk.isa, "ISA of --asm files");
  tstats->callback([&] {
    action = [&] {
      const auto ext = load_spec(tk.vocab);
      const auto base = TokenizerSpec::make({}, ext.isa_scope, Fallback::ByteLevel);
      std::vector<std::string> corpus;
      for (const auto& u : units_from(tk.stores, tk.asm_files, tk.isa)) corpus.push_back(normalize(u));
      double nb = 0, ne = 0;
      for (const auto& t : corpus) {
        nb += static_cast<double>(count_tokens(t, base));
        ne += static_cast<double>(count_tokens(t, ext));
      }
      ordered_json j;
      j["items"] = corpus.size();
      j["vocab_version"] = ext.version;
      j["mean_tokens_base"] = nb / static_cast<double>(corpus.size());
      j["mean_tokens_extended"] = ne / static_cast<double>(corpus.size());
      j["reduction_ratio"] = token_reduction_ratio(corpus, base, ext);
      std::cout << j.dump() << "\n";
      return static_cast<int>(kOk);
    };
  });

  // transpile
  auto* tr = app.add_subcommand("transpile", "translate one x86 assembly file");
  BackendFlags tr_backend;
  struct {
    std::string in, target = "armv5", out, vocab, store, pair_id, format = "ndjson";
    int beams = 1;
  } tp;
  tr->add_option("--in", tp.in, "x86 assembly file")->required();
  tr->add_option("--target", tp.target, "target ISA")->capture_default_str();
  tr->add_option("--beams", tp.beams, "candidates requested")->capture_default_str()->check(CLI::PositiveNumber);
  tr->add_option("--out", tp.out, "output path (default stdout)");
  tr->add_option("--format", tp.format, "ndjson | asm (first candidate only)")
      ->check(CLI::IsMember({"ndjson", "asm"}))
      ->capture_default_str();
  tr->add_option("--vocab", tp.vocab, "vocab used for the context-window check");
  tr->add_option("--store", tp.store, "replay: store holding ground truth");
  tr->add_option("--pair-id", tp.pair_id, "replay: pair to replay");
  add_backend_flags(tr, tr_backend);
  tr->callback([&] {
    action = [&] {
      const ToolchainConfig cfg = load_config(config_path(g));
      std::vector<TranspilePair> pairs;
      if (!tp.store.empty()) pairs = read_store(tp.store);
      const auto backend = make_backend(tr_backend, cfg, load_spec(tp.vocab), pairs);
      TranspileRequest req;
      req.source_text = normalize_text(read_file(tp.in), isa(IsaName::X86_64));
      req.target_isa = isa_from_string(tp.target);
      req.params.num_beams = tp.beams;
      req.pair_id = tp.pair_id;
      TranspileResponse resp;
      try {
        resp = backend->transpile(req);
      } catch (const BackendError& e) {
        std::cerr << "transpile: " << e.what() << "\n";
        return static_cast<int>(kCandidateFailures);
      }
      std::string text;
      if (tp.format == "asm") {
        text = resp.candidates.front().text;
      } else {
        for (std::size_t i = 0; i < resp.candidates.size(); ++i) {
          ordered_json j;
          j["schema"] = "asmxlate.candidate/1";
          j["backend_id"] = resp.backend_id;
          j["index"] = i;
          j["text"] = resp.candidates[i].text;
          j["score"] = resp.candidates[i].score ? ordered_json(*resp.candidates[i].score) : ordered_json(nullptr);
          j["latency_ms"] = resp.latency_ms;
          text += j.dump() + "\n";
        }
      }
      emit(tp.out, text);
      record.add_output(tp.out);
      record.write(tp.out, &cfg, {IsaName::X86_64, req.target_isa});
      return static_cast<int>(kOk);
    };
  });

  // eval
  auto* ev = app.add_subcommand("eval", "score a backend on a suite");
  ev->require_subcommand(1);
  auto* erun = ev->add_subcommand("run", "transpile, score and execute every pair");
  BackendFlags ev_backend;
  struct {
    std::string suite, store, target = "armv5", out, vocab, policy = "canonical";
    int beams = 1, max_tokens = 4096, context = 16384;
  } er;
  auto* suite_opt = erun->add_option("--suite", er.suite, "suite directory (<id>/func.c, <id>/test.c)");
  erun->add_option("--store", er.store, "pair store with test programs")->excludes(suite_opt);
  erun->add_option("--target", er.target, "target ISA")->capture_default_str();
  erun->add_option("--beams", er.beams, "candidates per pair")->capture_default_str()->check(CLI::PositiveNumber);
  erun->add_option("--max-new-tokens", er.max_tokens, "generation cap")->capture_default_str();
  erun->add_option("--context-window", er.context, "source token limit")->capture_default_str();
  erun->add_option("--policy", er.policy, "canonical | raw")->capture_default_str();
  erun->add_option("--out", er.out, "results NDJSON (default stdout)");
  erun->add_option("--vocab", er.vocab, "tokenizer vocabulary");
  add_backend_flags(erun, ev_backend);
  erun->callback([&] {
    action = [&] {
      if (er.suite.empty() && er.store.empty()) throw Error("eval run: pass --suite or --store");
      const ToolchainConfig cfg = load_config(config_path(g));
      const IsaName target = isa_from_string(er.target);
      const TokenizerSpec spec = load_spec(er.vocab);
      std::vector<TranspilePair> pairs;
      if (!er.suite.empty()) {
        pairs = load_eval_suite(er.suite, target, cfg, spec, g.jobs);
      } else {
        pairs = read_store(er.store);
      }
      const auto backend = make_backend(ev_backend, cfg, spec, pairs);
      EvalOptions opts;
      opts.params.num_beams = er.beams;
      opts.params.max_new_tokens = er.max_tokens;
      opts.params.context_window = er.context;
      opts.policy = policy_from_string(er.policy);
      opts.jobs = g.jobs;
      const SuiteRun run = evaluate_suite(pairs, *backend, cfg, opts);
      emit(er.out, results_to_ndjson(run, backend->id()));
      if (!er.out.empty() && er.out != "-") std::cout << summary_to_json_line(run.summary, backend->id()) << "\n";
      record.add_output(er.out);
      record.write(er.out, &cfg, {IsaName::X86_64, target});
      return static_cast<int>(run.summary.test_accuracy.num == run.summary.n ? kOk : kCandidateFailures);
    };
  });

  // segment
  auto* seg = app.add_subcommand("segment", "split assembly into token-budgeted segments");
  struct {
    std::string in, isa, vocab, out;
    std::size_t budget = kDefaultSegmentBudget;
  } sg;
  seg->add_option("--in", sg.in, "assembly file")->required();
  seg->add_option("--isa", sg.isa, "ISA of the input")->required();
  seg->add_option("--budget", sg.budget, "tokens per segment")->capture_default_str()->check(CLI::PositiveNumber);
  seg->add_option("--vocab", sg.vocab, "tokenizer vocabulary");
  seg->add_option("--out", sg.out, "segment listing (default stdout)");
  seg->callback([&] {
    action = [&] {
      const AssemblyUnit unit = parse_assembly(read_file(sg.in), isa(isa_from_string(sg.isa)), sg.in);
      const auto segments = segment_unit(unit, load_spec(sg.vocab), sg.budget);
      emit(sg.out, segments_to_ndjson(segments, sg.budget));
      record.add_output(sg.out);
      record.write(sg.out, nullptr, {});
      return static_cast<int>(kOk);
    };
  });

  // bench
  auto* bench = app.add_subcommand("bench", "repeated timing and peak memory of a binary");
  bench->require_subcommand(0, 1);
  struct {
    std::string bin, out, mode = "native", energy;
    std::size_t runs = 100, warmup = 3;
    double timeout = 0;
    std::vector<std::string> args;
  } bn;
  bench->add_option("--bin", bn.bin, "executable to measure");
  bench->add_option("--runs", bn.runs, "measured runs")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--warmup", bn.warmup, "discarded runs before measuring")->capture_default_str();
  bench->add_option("--mode", bn.mode, "label for this execution mode")->capture_default_str();
  bench->add_option("--timeout", bn.timeout, "per-run timeout in seconds (0 = none)");
  bench->add_option("--energy-cmd", bn.energy, "energy sampler template wrapping {input}");
  bench->add_option("--out", bn.out, "samples + summary NDJSON (default stdout)");
  bench->add_option("args", bn.args, "arguments passed to the binary (after --)");
  auto* bcompare = bench->add_subcommand("compare", "ratios against a baseline mode");
  std::string baseline;
  std::vector<std::string> bench_files;
  bcompare->add_option("--baseline", baseline, "baseline mode label")->required();
  bcompare->add_option("files", bench_files, "bench NDJSON files")->required();
  bcompare->callback([&] {
    action = [&] {
      std::vector<BenchSummary> summaries;
      for (const auto& f : bench_files) summaries.push_back(bench_from_ndjson(read_file(f)));
      std::cout << render_ratios(compare_modes(summaries, baseline), baseline);
      return static_cast<int>(kOk);
    };
  });
  bench->callback([&] {
    if (action) return;  // compare ran
    action = [&] {
      if (bn.bin.empty()) throw CLI::RequiredError("--bin");
      BenchOptions o;
      o.args = bn.args;
      o.runs = bn.runs;
      o.warmup = bn.warmup;
      o.timeout_seconds = bn.timeout;
      o.mode = bn.mode;
      o.energy_command = bn.energy;
      const BenchSummary s = bench_run(bn.bin, o);
      emit(bn.out, bench_to_ndjson(s));
      record.add_output(bn.out);
      record.write(bn.out, nullptr, {});
      return static_cast<int>(kOk);
    };
  });

  // report
  auto* rep = app.add_subcommand("report", "render results as a table or JSON");
  std::string format = "table";
  std::vector<std::string> result_files;
  rep->add_option("--format", format, "table | json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  rep->add_option("files", result_files, "results NDJSON files; two files add a confusion matrix")->required();
  rep->callback([&] {
    action = [&] {
      std::vector<std::pair<std::string, SuiteSummary>> rows;
      std::vector<ResultsFile> files;
      for (const auto& f : result_files) {
        files.push_back(read_results(f));
        rows.emplace_back(fs::path(f).stem().string(), summarize(files.back().results));
      }
      std::optional<ConfusionMatrix> cm;
      if (files.size() == 2) cm = confusion_matrix(files[0].results, files[1].results);
      if (format == "table") {
        std::cout << render_table(rows);
        if (cm) std::cout << "\n" << render_confusion(*cm, rows[0].first, rows[1].first);
      } else {
        for (const auto& [label, s] : rows) {
          auto j = ordered_json::parse(summary_to_json_line(s, label));
          j["label"] = label;
          std::cout << j.dump() << "\n";
        }
        if (cm) {
          ordered_json j;
          j["schema"] = "asmxlate.confusion/1";
          j["a"] = rows[0].first;
          j["b"] = rows[1].first;
          j["both_pass"] = cm->both_pass;
          j["both_fail"] = cm->both_fail;
          j["a_only_fail"] = cm->a_only_fail;
          j["b_only_fail"] = cm->b_only_fail;
          j["agreement"] = {{"num", cm->agreement.num}, {"den", cm->agreement.den}, {"percent", cm->agreement.percent(1)}};
          std::cout << j.dump() << "\n";
        }
      }
      return static_cast<int>(kOk);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInfrastructure;
  }
  try {
    return action();
  } catch (const AllRunsFailed& e) {
    // the measured program failed, not the harness
    std::cerr << "error: " << e.what() << "\n";
    return kCandidateFailures;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfrastructure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfrastructure;
  }
}

}  // namespace asmxlate::cli
