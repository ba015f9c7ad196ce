#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "asmxlate/assembly.hpp"

namespace asmxlate {

enum class Fallback {
  ByteLevel,  // one token per byte
  CharClass,  // one token per UTF-8 code point
};

std::string_view to_string(Fallback f);
Fallback fallback_from_string(std::string_view text);

/// Extended vocabulary. Entries are identifier runs (alnum, '_', '.') with
/// an optional single '%', '$' or '#' prefix, e.g. "ldr", "%eax", "#0".
struct TokenizerSpec {
  std::set<IsaName> isa_scope;
  std::vector<std::string> extended_entries;  // descending length, then lexicographic
  Fallback base_fallback = Fallback::ByteLevel;
  std::string version;

  /// Validates, dedupes and orders `entries`; derives `version` from the
  /// content when `version` is empty.
  static TokenizerSpec make(std::vector<std::string> entries, std::set<IsaName> scope = {},
                            Fallback fallback = Fallback::ByteLevel, std::string version = {});

  bool contains(std::string_view entry) const;
  friend bool operator==(const TokenizerSpec&, const TokenizerSpec&) = default;
};

bool is_valid_entry(std::string_view entry);

struct TokenStream {
  std::vector<std::string> tokens;
  std::size_t source_len_chars = 0;  // code points
};

/// Greedy longest match with identifier boundaries; lossless.
TokenStream tokenize(std::string_view text, const TokenizerSpec& spec);

/// tokenize(text, spec).tokens.size() without materializing tokens.
std::size_t count_tokens(std::string_view text, const TokenizerSpec& spec);

inline constexpr std::size_t kDefaultTopK = 512;

/// Top-k mnemonics by frequency (ties lexicographic) plus every register
/// spelling observed in operands. Independent of corpus order.
TokenizerSpec build_vocab(const std::vector<AssemblyUnit>& corpus, std::size_t top_k = kDefaultTopK,
                          Fallback fallback = Fallback::ByteLevel);

/// 1 - mean(extended counts) / mean(base counts).
double token_reduction_ratio(const std::vector<std::string>& corpus, const TokenizerSpec& base,
                             const TokenizerSpec& extended);

/// Header lines `version`, `isa_scope`, `fallback`, then `---`, then one
/// entry per line.
std::string serialize_vocab(const TokenizerSpec& spec);
TokenizerSpec parse_vocab(std::string_view text);
TokenizerSpec load_vocab(const std::filesystem::path& path);

}  // namespace asmxlate
