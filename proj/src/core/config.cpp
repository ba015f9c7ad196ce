#include "asmxlate/config.hpp"

#include <nlohmann/json.hpp>

#include "asmxlate/error.hpp"
#include "asmxlate/files.hpp"

namespace asmxlate {

namespace {

using nlohmann::json;

constexpr std::string_view kSchema = "asmxlate.toolchain/1";

std::string get_string(const json& obj, const std::string& key, const std::string& field,
                       bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw ConfigError(field, "missing required key");
    return {};
  }
  if (!it->is_string()) throw ConfigError(field, "expected a string");
  return it->get<std::string>();
}

double get_positive(const json& obj, const std::string& key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ConfigError(key, "expected a number of seconds");
  const double value = it->get<double>();
  if (!(value > 0.0)) throw ConfigError(key, "must be strictly positive");
  return value;
}

IsaToolchain parse_toolchain(const json& block, IsaName isa) {
  const std::string prefix = "isas." + std::string(to_string(isa));
  if (!block.is_object()) throw ConfigError(prefix, "expected an object");
  IsaToolchain tc;
  tc.compile = get_string(block, "compile", prefix + ".compile", true);
  tc.version = get_string(block, "version", prefix + ".version", false);
  const bool is_target = isa != IsaName::X86_64;
  if (auto it = block.find("assemble_link"); it != block.end()) {
    if (!it->is_object()) throw ConfigError(prefix + ".assemble_link", "expected an object");
    tc.assemble = get_string(*it, "assemble", prefix + ".assemble_link.assemble", is_target);
    tc.link = get_string(*it, "link", prefix + ".assemble_link.link", is_target);
  } else if (is_target) {
    throw ConfigError(prefix + ".assemble_link", "missing required key");
  }
  tc.emulate = get_string(block, "emulate", prefix + ".emulate", is_target);
  if (auto it = block.find("support"); it != block.end()) {
    if (!it->is_array()) throw ConfigError(prefix + ".support", "expected an array of paths");
    for (const auto& entry : *it) {
      if (!entry.is_string()) throw ConfigError(prefix + ".support", "expected an array of paths");
      tc.support_sources.push_back(entry.get<std::string>());
    }
  }
  return tc;
}

}  // namespace

const IsaToolchain& ToolchainConfig::require_compile(IsaName isa) const {
  auto it = toolchains.find(isa);
  if (it == toolchains.end()) {
    throw ConfigError("isas." + std::string(to_string(isa)), "no toolchain entry for this ISA");
  }
  return it->second;
}

const IsaToolchain& ToolchainConfig::require_run(IsaName isa) const {
  const IsaToolchain& tc = require_compile(isa);
  const std::string prefix = "isas." + std::string(to_string(isa));
  if (tc.assemble.empty()) throw ConfigError(prefix + ".assemble_link.assemble", "missing");
  if (tc.link.empty()) throw ConfigError(prefix + ".assemble_link.link", "missing");
  if (tc.emulate.empty()) throw ConfigError(prefix + ".emulate", "missing");
  return tc;
}

ToolchainConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config parse failure: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config parse failure: top level must be an object");

  ToolchainConfig cfg;
  cfg.base_dir = base_dir;
  if (auto it = doc.find("schema"); it != doc.end() && *it != kSchema) {
    throw ConfigError("schema", "unsupported schema tag (expected " + std::string(kSchema) + ")");
  }
  if (auto it = doc.find("opt_level"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>().empty()) {
      throw ConfigError("opt_level", "expected a non-empty string");
    }
    cfg.optimization_level = it->get<std::string>();
  }
  cfg.timeout_compile = get_positive(doc, "timeout_compile", cfg.timeout_compile);
  cfg.timeout_run = get_positive(doc, "timeout_run", cfg.timeout_run);
  if (auto it = doc.find("prompt"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("prompt", "expected an object");
    if (auto v = get_string(*it, "version", "prompt.version", false); !v.empty()) {
      cfg.prompt_version = v;
    }
    if (auto v = get_string(*it, "preamble", "prompt.preamble", false); !v.empty()) {
      cfg.prompt_preamble = v;
    }
  }

  auto isas = doc.find("isas");
  if (isas == doc.end() || !isas->is_object()) throw ConfigError("isas", "missing ISA table");
  for (const auto& [key, block] : isas->items()) {
    auto isa = parse_isa_name(key);
    if (!isa) throw ConfigError("isas." + key, "unknown ISA name");
    cfg.toolchains[*isa] = parse_toolchain(block, *isa);
  }
  if (!cfg.has(IsaName::X86_64)) throw ConfigError("isas.x86_64", "missing source ISA entry");
  if (cfg.toolchains.size() < 2) throw ConfigError("isas", "no target ISA entry");
  return cfg;
}

ToolchainConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError("", e.what());
  }
  auto dir = std::filesystem::absolute(path).parent_path();
  return parse_config(text, dir);
}

std::string serialize_config(const ToolchainConfig& cfg) {
  json doc;
  doc["schema"] = kSchema;
  doc["opt_level"] = cfg.optimization_level;
  doc["timeout_compile"] = cfg.timeout_compile;
  doc["timeout_run"] = cfg.timeout_run;
  doc["prompt"] = {{"version", cfg.prompt_version}, {"preamble", cfg.prompt_preamble}};
  json isas = json::object();
  for (const auto& [isa, tc] : cfg.toolchains) {
    json block;
    block["compile"] = tc.compile;
    if (!tc.version.empty()) block["version"] = tc.version;
    if (!tc.assemble.empty() || !tc.link.empty()) {
      block["assemble_link"] = {{"assemble", tc.assemble}, {"link", tc.link}};
    }
    if (!tc.emulate.empty()) block["emulate"] = tc.emulate;
    if (!tc.support_sources.empty()) block["support"] = tc.support_sources;
    isas[std::string(to_string(isa))] = block;
  }
  doc["isas"] = isas;
  return doc.dump(2) + "\n";
}

std::string config_fingerprint(const ToolchainConfig& config) {
  return hex64(fnv1a(serialize_config(config)));
}

void GenerationParams::validate() const {
  if (num_beams < 1) throw ConfigError("num_beams", "must be >= 1");
  if (max_new_tokens < 1) throw ConfigError("max_new_tokens", "must be >= 1");
  if (context_window < 1) throw ConfigError("context_window", "must be >= 1");
}

}  // namespace asmxlate
