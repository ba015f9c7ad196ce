#include "asmxlate/tokenizer.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "asmxlate/error.hpp"
#include "asmxlate/files.hpp"

namespace asmxlate {

namespace {

bool is_ident(unsigned char c) { return std::isalnum(c) || c == '_' || c == '.'; }
bool is_prefix(unsigned char c) { return c == '%' || c == '$' || c == '#'; }

// Bytes in one code point starting at i; malformed sequences are one byte each.
std::size_t utf8_len(std::string_view text, std::size_t i) {
  const auto c = static_cast<unsigned char>(text[i]);
  const std::size_t n = c >= 0xF8 ? 1 : c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
  if (i + n > text.size()) return 1;
  for (std::size_t k = 1; k < n; ++k)
    if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) return 1;
  return n;
}

bool entry_order(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

// With entries restricted to [%$#]?ident+, a match at a boundary must cover
// a whole identifier run (plus its prefix char), so greedy longest match
// reduces to a set lookup per run.
template <class Emit>
void scan(std::string_view text, const TokenizerSpec& spec,
          const std::unordered_set<std::string_view>& set, Emit&& emit) {
  const auto fallback = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to;) {
      std::size_t n = spec.base_fallback == Fallback::ByteLevel
                          ? 1
                          : std::min(utf8_len(text, i), to - i);
      emit(text.substr(i, n));
      i += n;
    }
  };
  const auto run_end = [&](std::size_t i) {
    while (i < text.size() && is_ident(static_cast<unsigned char>(text[i]))) ++i;
    return i;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_prefix(c) && i + 1 < text.size() && is_ident(static_cast<unsigned char>(text[i + 1]))) {
      const std::size_t end = run_end(i + 1);
      if (set.count(text.substr(i, end - i))) {
        emit(text.substr(i, end - i));
        i = end;
        continue;
      }
      fallback(i, i + 1);
      ++i;
      continue;
    }
    if (is_ident(c)) {
      const std::size_t end = run_end(i);
      if (set.count(text.substr(i, end - i))) {
        emit(text.substr(i, end - i));
      } else {
        fallback(i, end);
      }
      i = end;
      continue;
    }
    const std::size_t n = spec.base_fallback == Fallback::ByteLevel
                              ? 1
                              : utf8_len(text, i);
    emit(text.substr(i, n));
    i += n;
  }
}

std::unordered_set<std::string_view> entry_set(const TokenizerSpec& spec) {
  return {spec.extended_entries.begin(), spec.extended_entries.end()};
}

std::string scope_string(const std::set<IsaName>& scope) {
  std::string out;
  for (auto isa : scope) {
    if (!out.empty()) out += ',';
    out += to_string(isa);
  }
  return out;
}

}  // namespace

std::string_view to_string(Fallback f) {
  return f == Fallback::ByteLevel ? "byte" : "charclass";
}

Fallback fallback_from_string(std::string_view text) {
  if (text == "byte" || text == "ByteLevel") return Fallback::ByteLevel;
  if (text == "charclass" || text == "CharClass") return Fallback::CharClass;
  throw Error("unknown tokenizer fallback '" + std::string(text) + "'");
}

bool is_valid_entry(std::string_view e) {
  if (!e.empty() && is_prefix(static_cast<unsigned char>(e.front()))) e.remove_prefix(1);
  if (e.empty()) return false;
  return std::all_of(e.begin(), e.end(), [](char c) { return is_ident(static_cast<unsigned char>(c)); });
}

TokenizerSpec TokenizerSpec::make(std::vector<std::string> entries, std::set<IsaName> scope,
                                  Fallback fallback, std::string version) {
  for (const auto& e : entries) {
    if (!is_valid_entry(e)) throw Error("invalid tokenizer entry '" + e + "'");
  }
  std::sort(entries.begin(), entries.end(), entry_order);
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  TokenizerSpec spec;
  spec.isa_scope = std::move(scope);
  spec.extended_entries = std::move(entries);
  spec.base_fallback = fallback;
  if (version.empty()) {
    std::string blob(to_string(fallback));
    for (const auto& e : spec.extended_entries) blob += "\n" + e;
    version = "v1-" + hex64(fnv1a(blob)).substr(0, 12);
  }
  spec.version = std::move(version);
  return spec;
}

bool TokenizerSpec::contains(std::string_view entry) const {
  return std::binary_search(extended_entries.begin(), extended_entries.end(), std::string(entry),
                            entry_order);
}

TokenStream tokenize(std::string_view text, const TokenizerSpec& spec) {
  TokenStream ts;
  const auto set = entry_set(spec);
  scan(text, spec, set, [&](std::string_view t) { ts.tokens.emplace_back(t); });
  for (std::size_t i = 0; i < text.size(); i += utf8_len(text, i)) ++ts.source_len_chars;
  return ts;
}

std::size_t count_tokens(std::string_view text, const TokenizerSpec& spec) {
  std::size_t n = 0;
  const auto set = entry_set(spec);
  scan(text, spec, set, [&](std::string_view) { ++n; });
  return n;
}

TokenizerSpec build_vocab(const std::vector<AssemblyUnit>& corpus, std::size_t top_k,
                          Fallback fallback) {
  if (corpus.empty()) throw Error("build_vocab: empty corpus");
  if (top_k == 0) throw Error("build_vocab: top_k must be >= 1");
  std::map<std::string, std::size_t> freq;
  std::set<std::string> registers;
  std::set<IsaName> scope;
  for (const auto& unit : corpus) {
    scope.insert(unit.isa);
    const std::string reg_prefix = unit.isa == IsaName::X86_64 ? "%" : "";
    const auto add_reg = [&](const std::string& r) {
      if (is_valid_entry(reg_prefix + r)) registers.insert(reg_prefix + r);
    };
    for (const auto& line : unit.lines) {
      if (!line.instruction) continue;
      const auto& ins = *line.instruction;
      if (is_valid_entry(ins.mnemonic)) ++freq[ins.mnemonic];
      for (const auto& op : ins.operands) {
        if (op.is<RegisterOperand>()) {
          add_reg(op.as<RegisterOperand>().name);
        } else if (op.is<MemoryOperand>()) {
          const auto& m = op.as<MemoryOperand>();
          if (m.base) add_reg(*m.base);
          if (m.index) add_reg(*m.index);
        } else if (op.is<RegisterListOperand>()) {
          for (const auto& r : op.as<RegisterListOperand>().registers) add_reg(r);
        }
      }
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> entries(registers.begin(), registers.end());
  for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i) entries.push_back(ranked[i].first);
  return TokenizerSpec::make(std::move(entries), std::move(scope), fallback);
}

double token_reduction_ratio(const std::vector<std::string>& corpus, const TokenizerSpec& base,
                             const TokenizerSpec& extended) {
  if (corpus.empty()) throw Error("token_reduction_ratio: empty corpus");
  double b = 0, e = 0;
  for (const auto& text : corpus) {
    b += static_cast<double>(count_tokens(text, base));
    e += static_cast<double>(count_tokens(text, extended));
  }
  if (b == 0) return 0.0;
  return 1.0 - e / b;  // the 1/n factors cancel
}

std::string serialize_vocab(const TokenizerSpec& spec) {
  std::string out = "version " + spec.version + "\n";
  out += "isa_scope " + scope_string(spec.isa_scope) + "\n";
  out += "fallback " + std::string(to_string(spec.base_fallback)) + "\n---\n";
  for (const auto& e : spec.extended_entries) out += e + "\n";
  return out;
}

TokenizerSpec parse_vocab(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, version;
  std::set<IsaName> scope;
  Fallback fallback = Fallback::ByteLevel;
  bool body = false;
  std::vector<std::string> entries;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (body) {
      if (!line.empty()) entries.push_back(line);
      continue;
    }
    if (line == "---") {
      body = true;
      continue;
    }
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    const std::string val = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (key == "version") {
      version = val;
    } else if (key == "isa_scope") {
      std::istringstream parts(val);
      std::string p;
      while (std::getline(parts, p, ',')) {
        if (!p.empty()) scope.insert(isa_from_string(p));
      }
    } else if (key == "fallback") {
      fallback = fallback_from_string(val);
    } else if (!key.empty()) {
      throw Error("vocab header: unknown key '" + key + "'");
    }
  }
  if (!body) throw Error("vocab file: missing '---' separator");
  return TokenizerSpec::make(std::move(entries), std::move(scope), fallback, version);
}

TokenizerSpec load_vocab(const std::filesystem::path& path) { return parse_vocab(read_file(path)); }

}  // namespace asmxlate
