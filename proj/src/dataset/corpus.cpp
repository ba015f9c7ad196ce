#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <json.hpp>

#include "asmxlate/dataset.hpp"
#include "asmxlate/files.hpp"
#include "asmxlate/parallel.hpp"

namespace asmxlate {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<fs::path> list_sources(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw NoSources("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".c") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end(), [&](const fs::path& a, const fs::path& b) {
    return a.lexically_relative(dir).generic_string() < b.lexically_relative(dir).generic_string();
  });
  return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  // reject the incomplete top bucket so every residue is equally likely
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<fs::path> sample_sources(std::vector<fs::path> sorted, std::size_t sample,
                                     std::uint64_t seed) {
  if (sample >= sorted.size()) return sorted;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < sample; ++i) {
    const std::size_t j = i + uniform_below(rng, sorted.size() - i);
    std::swap(sorted[i], sorted[j]);
  }
  sorted.resize(sample);
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

fs::path manifest_path(const fs::path& store) { return fs::path(store.string() + ".manifest.json"); }

std::string manifest_to_json(const CorpusManifest& m) {
  json j;
  j["schema"] = kManifestSchema;
  j["records"] = m.records;
  j["target_isa"] = to_string(m.target_isa);
  j["opt_level"] = m.opt_level;
  j["tokenizer_version"] = m.tokenizer_version;
  j["toolchain"] = json::array();
  for (const auto& fp : m.toolchain) {
    j["toolchain"].push_back({{"isa", to_string(fp.isa)}, {"command", fp.command}, {"version", fp.version}});
  }
  j["created"] = m.created;
  j["seed"] = m.seed;
  j["requested"] = m.requested;
  j["available"] = m.available;
  j["failures"] = json::array();
  for (const auto& f : m.failures) j["failures"].push_back({{"source", f.source}, {"error", f.error}});
  j["warnings"] = m.warnings;
  return j.dump(2) + "\n";
}

CorpusManifest manifest_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.value("schema", "") != kManifestSchema) throw Error("manifest: unsupported schema");
    CorpusManifest m;
    m.records = j.at("records").get<std::size_t>();
    m.target_isa = isa_from_string(j.at("target_isa").get<std::string>());
    m.opt_level = j.at("opt_level").get<std::string>();
    m.tokenizer_version = j.at("tokenizer_version").get<std::string>();
    for (const auto& fp : j.at("toolchain")) {
      m.toolchain.push_back({isa_from_string(fp.at("isa").get<std::string>()),
                             fp.at("command").get<std::string>(), fp.at("version").get<std::string>()});
    }
    m.created = j.at("created").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.requested = j.at("requested").get<std::size_t>();
    m.available = j.at("available").get<std::size_t>();
    for (const auto& f : j.at("failures")) {
      m.failures.push_back({f.at("source").get<std::string>(), f.at("error").get<std::string>()});
    }
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
}

CorpusManifest build_corpus(const fs::path& src_dir, const fs::path& store, IsaName target_isa,
                            const ToolchainConfig& cfg, const TokenizerSpec& spec,
                            const CorpusBuildOptions& options) {
  const auto warn = options.warn ? options.warn
                                 : [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
  auto sources = list_sources(src_dir);
  if (sources.empty()) throw NoSources("no .c files under " + src_dir.string());
  cfg.require_compile(IsaName::X86_64);
  cfg.require_compile(target_isa);

  CorpusManifest m;
  m.target_isa = target_isa;
  m.opt_level = cfg.optimization_level;
  m.tokenizer_version = spec.version;
  m.seed = options.seed;
  m.available = sources.size();
  m.requested = options.sample.value_or(0);
  if (options.sample) {
    if (*options.sample > sources.size()) {
      m.warnings.push_back("requested sample of " + std::to_string(*options.sample) + " exceeds " +
                           std::to_string(sources.size()) + " available sources; using all");
      warn(m.warnings.back());
    }
    sources = sample_sources(std::move(sources), *options.sample, options.seed);
  }
  m.toolchain = toolchain_fingerprints(cfg, {IsaName::X86_64, target_isa});

  const fs::path tmp_store = store.string() + ".partial";
  std::ofstream out(tmp_store, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreWriteFailed("cannot open " + tmp_store.string());
  std::mutex sink;
  parallel_for(sources.size(), options.jobs, [&](std::size_t i) {
    const fs::path& src = sources[i];
    const std::string id = src.lexically_relative(src_dir).replace_extension().generic_string();
    try {
      const TranspilePair pair = compile_pair(src, target_isa, cfg, spec, id);
      const std::string line = pair_to_json_line(pair) + "\n";
      std::lock_guard lock(sink);
      out << line;
      if (!out) throw StoreWriteFailed("write failed: " + tmp_store.string());
      ++m.records;
    } catch (const CompileFailed& e) {
      std::lock_guard lock(sink);
      m.failures.push_back({src.lexically_relative(src_dir).generic_string(), e.what()});
      warn("skipping " + src.string() + ": " + e.what());
    } catch (const CompileTimeout& e) {
      std::lock_guard lock(sink);
      m.failures.push_back({src.lexically_relative(src_dir).generic_string(), e.what()});
      warn("skipping " + src.string() + ": " + e.what());
    }
  });
  out.close();
  if (!out) throw StoreWriteFailed("write failed: " + tmp_store.string());
  std::error_code ec;
  fs::rename(tmp_store, store, ec);
  if (ec) throw StoreWriteFailed("cannot rename into " + store.string() + ": " + ec.message());
  std::sort(m.failures.begin(), m.failures.end(),
            [](const BuildFailure& a, const BuildFailure& b) { return a.source < b.source; });
  m.created = utc_timestamp();
  write_file_atomic(manifest_path(store), manifest_to_json(m));
  return m;
}

std::vector<TranspilePair> read_store(const fs::path& store) {
  std::ifstream in(store, std::ios::binary);
  if (!in) throw Error("cannot open store " + store.string());
  std::vector<TranspilePair> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(pair_from_json_line(line));
  }
  return out;
}

void write_store(const fs::path& store, const std::vector<TranspilePair>& pairs) {
  std::string text;
  for (const auto& p : pairs) text += pair_to_json_line(p) + "\n";
  try {
    write_file_atomic(store, text);
  } catch (const Error& e) {
    throw StoreWriteFailed(e.what());
  }
}

std::vector<TranspilePair> load_eval_suite(const fs::path& dir, IsaName target_isa,
                                           const ToolchainConfig& cfg, const TokenizerSpec& spec,
                                           std::size_t jobs) {
  if (!fs::is_directory(dir)) throw LayoutError(dir.string(), "suite directory does not exist");
  std::vector<std::string> ids;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) ids.push_back(e.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) throw LayoutError(dir.string(), "suite has no problem directories");
  for (const auto& id : ids) {
    if (!fs::is_regular_file(dir / id / "func.c")) throw LayoutError(id, "missing func.c");
    if (!fs::is_regular_file(dir / id / "test.c")) throw LayoutError(id, "missing test.c");
  }
  std::vector<TranspilePair> pairs(ids.size());
  parallel_for(ids.size(), jobs, [&](std::size_t i) {
    pairs[i] = compile_pair(dir / ids[i] / "func.c", target_isa, cfg, spec, ids[i]);
    pairs[i].test_source_path = dir / ids[i] / "test.c";
  });
  return pairs;
}

const TokenizerSpec& default_tokenizer() {
  static const TokenizerSpec spec = load_vocab(data_dir() / "vocab" / "default.vocab");
  return spec;
}

}  // namespace asmxlate
