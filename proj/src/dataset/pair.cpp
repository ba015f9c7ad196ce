#include <json.hpp>

#include "asmxlate/dataset.hpp"
#include "asmxlate/files.hpp"
#include "asmxlate/process.hpp"

namespace asmxlate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string excerpt(std::string_view text, std::size_t limit = 4000) {
  if (text.size() <= limit) return std::string(text);
  return std::string(text.substr(0, limit)) + "\n[... truncated]";
}

std::string exit_summary(const CommandResult& r) {
  if (r.signal) return "killed by " + signal_name(*r.signal);
  return "exit " + std::to_string(r.exit_code);
}

}  // namespace

CompileFailed::CompileFailed(IsaName isa, int exit_code, std::string excerpt_text)
    : Error("compile failed for " + std::string(to_string(isa)) + " (exit " +
            std::to_string(exit_code) + "): " + excerpt_text),
      isa_(isa),
      exit_code_(exit_code),
      excerpt_(std::move(excerpt_text)) {}

CompileTimeout::CompileTimeout(IsaName isa)
    : Error("compile timed out for " + std::string(to_string(isa))), isa_(isa) {}

std::string pair_to_json_line(const TranspilePair& p) {
  json j;
  j["schema"] = kPairSchema;
  j["pair_id"] = p.pair_id;
  j["c_source_path"] = p.c_source_path.string();
  j["x86"] = {{"raw", p.x86.raw}, {"normalized", p.x86.normalized}};
  j["target"] = {{"raw", p.target.raw}, {"normalized", p.target.normalized}};
  j["target_isa"] = to_string(p.target_isa);
  j["test_source_path"] = p.test_source_path ? json(p.test_source_path->string()) : json(nullptr);
  j["token_count_x86"] = p.token_count_x86;
  j["token_count_target"] = p.token_count_target;
  j["tokenizer_version"] = p.tokenizer_version;
  j["opt_level"] = p.opt_level;
  j["build_log"] = p.build_log;
  return j.dump();
}

TranspilePair pair_from_json_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(std::string("corrupt pair record: ") + e.what());
  }
  if (j.value("schema", "") != kPairSchema) {
    throw Error("pair record: unsupported schema '" + j.value("schema", "") + "'");
  }
  try {
    TranspilePair p;
    p.pair_id = j.at("pair_id").get<std::string>();
    p.c_source_path = j.at("c_source_path").get<std::string>();
    p.x86 = {j.at("x86").at("raw").get<std::string>(), j.at("x86").at("normalized").get<std::string>()};
    p.target = {j.at("target").at("raw").get<std::string>(),
                j.at("target").at("normalized").get<std::string>()};
    p.target_isa = isa_from_string(j.at("target_isa").get<std::string>());
    if (!j.at("test_source_path").is_null()) {
      p.test_source_path = j.at("test_source_path").get<std::string>();
    }
    p.token_count_x86 = j.at("token_count_x86").get<std::size_t>();
    p.token_count_target = j.at("token_count_target").get<std::size_t>();
    p.tokenizer_version = j.at("tokenizer_version").get<std::string>();
    p.opt_level = j.value("opt_level", "");
    p.build_log = j.value("build_log", "");
    return p;
  } catch (const json::exception& e) {
    throw Error(std::string("pair record: ") + e.what());
  }
}

std::string compile_to_assembly(const fs::path& c_path, IsaName isa, const ToolchainConfig& cfg,
                                std::string* log) {
  const IsaToolchain& tc = cfg.require_compile(isa);
  TempDir tmp("asmxlate-cc");
  const fs::path out = tmp.path() / (c_path.stem().string() + ".s");
  TemplateVars vars;
  vars.inputs = {fs::absolute(c_path).string()};
  vars.output = out.string();
  vars.opt = cfg.optimization_level;
  vars.config_dir = cfg.base_dir;
  RunOptions opts;
  opts.timeout_seconds = cfg.timeout_compile;
  const CommandResult r = run_command(expand_command(tc.compile, vars), opts);
  if (log != nullptr) *log += r.err;
  if (r.timed_out) throw CompileTimeout(isa);
  if (!r.ok()) {
    throw CompileFailed(isa, r.signal ? 128 + *r.signal : r.exit_code,
                        exit_summary(r) + "\n" + excerpt(r.err));
  }
  return read_file(out);
}

TranspilePair compile_pair(const fs::path& c_path, IsaName target_isa, const ToolchainConfig& cfg,
                           const TokenizerSpec& spec, std::string pair_id) {
  if (!fs::exists(c_path)) throw Error("no such C source: " + c_path.string());
  if (target_isa == IsaName::X86_64) throw Error("target ISA must be a RISC ISA");
  TranspilePair p;
  p.pair_id = pair_id.empty() ? c_path.stem().string() : std::move(pair_id);
  p.c_source_path = c_path;
  p.target_isa = target_isa;
  p.opt_level = cfg.optimization_level;

  std::string x86_log, target_log;
  p.x86.raw = compile_to_assembly(c_path, IsaName::X86_64, cfg, &x86_log);
  p.target.raw = compile_to_assembly(c_path, target_isa, cfg, &target_log);
  p.x86.normalized = normalize_text(p.x86.raw, isa(IsaName::X86_64));
  p.target.normalized = normalize_text(p.target.raw, isa(target_isa));
  if (!x86_log.empty()) p.build_log += "[x86_64]\n" + x86_log;
  if (!target_log.empty()) p.build_log += "[" + std::string(to_string(target_isa)) + "]\n" + target_log;

  p.token_count_x86 = count_tokens(p.x86.normalized, spec);
  p.token_count_target = count_tokens(p.target.normalized, spec);
  p.tokenizer_version = spec.version;
  return p;
}

std::vector<ToolFingerprint> toolchain_fingerprints(const ToolchainConfig& cfg,
                                                    const std::vector<IsaName>& isas) {
  std::vector<ToolFingerprint> out;
  for (IsaName name : isas) {
    ToolFingerprint fp;
    fp.isa = name;
    const auto it = cfg.toolchains.find(name);
    if (it == cfg.toolchains.end() || it->second.version.empty()) {
      fp.version = "unknown";
      out.push_back(fp);
      continue;
    }
    TemplateVars vars;
    vars.config_dir = cfg.base_dir;
    const auto argv = expand_command(it->second.version, vars);
    fp.command = join_command(argv);
    RunOptions opts;
    opts.timeout_seconds = cfg.timeout_compile;
    const CommandResult r = run_command(argv, opts);
    const std::string& text = r.out.empty() ? r.err : r.out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      if (nl > pos) {
        fp.version = text.substr(pos, nl - pos);
        break;
      }
      pos = nl + 1;
    }
    if (fp.version.empty()) fp.version = "unknown";
    out.push_back(fp);
  }
  return out;
}

}  // namespace asmxlate
