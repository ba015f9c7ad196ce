#include "support.hpp"

#include <fstream>
#include <map>

#include "asmxlate/process.hpp"

namespace testsupport {

namespace fs = std::filesystem;

fs::path fixtures() { return ASMXLATE_FIXTURES; }
fs::path source_dir() { return ASMXLATE_SOURCE_DIR; }
fs::path cli_path() { return ASMXLATE_CLI_PATH; }

asmxlate::ToolchainConfig test_config(double run_timeout) {
  auto cfg = asmxlate::load_config(source_dir() / "config" / "toolchain.json");
  cfg.timeout_run = run_timeout;
  return cfg;
}

bool toolchain_available() {
  static const bool ok = [] {
    const auto cfg = test_config();
    const auto starts = [](std::vector<std::string> argv) {
      try {
        return asmxlate::run_command(argv, {.timeout_seconds = 30}).ok();
      } catch (const std::exception&) {
        return false;
      }
    };
    const auto arm = cfg.toolchains.at(asmxlate::IsaName::ARMV5);
    const auto emu = asmxlate::expand_command(arm.emulate, {.inputs = {}, .config_dir = cfg.base_dir});
    return starts(asmxlate::expand_command(cfg.toolchains.at(asmxlate::IsaName::X86_64).version, {})) &&
           starts(asmxlate::expand_command(arm.version, {})) &&
           starts({emu.front(), "-c", "import unicorn, elftools"});
  }();
  return ok;
}

std::size_t levenshtein_oracle(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  // d(i, j) = distance between a[i:] and b[j:]
  const auto d = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    const auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = self(self, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, self(self, i + 1, j) + 1);
    best = std::min(best, self(self, i, j + 1) + 1);
    memo[key] = best;
    return best;
  };
  return d(d, 0, 0);
}

namespace {

bool ident(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u == '_' || u == '.';
}

// a lead byte only counts as multi-byte when its continuation bytes follow
std::size_t utf8_units(const std::string& text, std::size_t i) {
  const auto lead = static_cast<unsigned char>(text[i]);
  std::size_t n = 1;
  if (lead >= 0xC0 && lead < 0xE0) n = 2;
  if (lead >= 0xE0 && lead < 0xF0) n = 3;
  if (lead >= 0xF0 && lead < 0xF8) n = 4;
  if (i + n > text.size()) return 1;
  for (std::size_t k = 1; k < n; ++k)
    if (static_cast<unsigned char>(text[i + k]) < 0x80 || static_cast<unsigned char>(text[i + k]) > 0xBF) return 1;
  return n;
}

}  // namespace

std::vector<std::string> tokenize_oracle(const std::string& text, const std::vector<std::string>& entries,
                                         asmxlate::Fallback fallback) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t best = 0;
    for (const auto& e : entries) {
      if (e.size() <= best || text.compare(i, e.size(), e) != 0) continue;
      const bool left_ok = !ident(e.front()) || i == 0 || !ident(text[i - 1]);
      const std::size_t end = i + e.size();
      const bool right_ok = end == text.size() || !ident(text[end]);
      if (left_ok && right_ok) best = e.size();
    }
    if (best == 0) {
      best = fallback == asmxlate::Fallback::ByteLevel
                 ? 1
                 : utf8_units(text, i);
    }
    out.push_back(text.substr(i, best));
    i += best;
  }
  return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace testsupport
