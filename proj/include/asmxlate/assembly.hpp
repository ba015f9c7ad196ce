#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "asmxlate/isa.hpp"

namespace asmxlate {

struct RegisterOperand {
  std::string name;
  friend bool operator==(const RegisterOperand&, const RegisterOperand&) = default;
};

struct ImmediateOperand {
  std::int64_t value = 0;
  friend bool operator==(const ImmediateOperand&, const ImmediateOperand&) = default;
};

/// Register-relative memory reference. `symbol` holds a relocation such as
/// `.LC0` in `.LC0(%rip)` or `%lo(sym)` in `%lo(sym)(a0)`.
struct MemoryOperand {
  std::optional<std::string> base;
  std::optional<std::int64_t> offset;
  std::optional<std::string> index;
  std::optional<std::string> scale_or_shift;
  std::optional<std::string> symbol;
  friend bool operator==(const MemoryOperand&, const MemoryOperand&) = default;
};

struct LabelRefOperand {
  std::string name;
  friend bool operator==(const LabelRefOperand&, const LabelRefOperand&) = default;
};

/// ARM `{r4, fp, lr}` lists.
struct RegisterListOperand {
  std::vector<std::string> registers;
  friend bool operator==(const RegisterListOperand&, const RegisterListOperand&) = default;
};

/// Syntax outside the modeled categories (shift specifiers, literal-pool
/// loads, relocation operators, indirect targets).
struct OtherOperand {
  friend bool operator==(const OtherOperand&, const OtherOperand&) = default;
};

using OperandValue = std::variant<RegisterOperand, ImmediateOperand, MemoryOperand,
                                  LabelRefOperand, RegisterListOperand, OtherOperand>;

struct Operand {
  OperandValue value;
  std::string text;  // exact spelling in the source line

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(value);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(value);
  }
  friend bool operator==(const Operand&, const Operand&) = default;
};

struct Instruction {
  std::string mnemonic;  // lowercase
  std::vector<Operand> operands;
  std::set<std::string> label_refs;

  /// Mnemonic and operand spellings joined with canonical separators.
  std::string render() const;
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

enum class LineKind { Instruction, Label, Directive, Comment, Blank };

std::string_view to_string(LineKind kind);

struct Line {
  LineKind kind = LineKind::Blank;
  /// Comment-free text with whitespace runs collapsed and trimmed. For
  /// comment lines this is the collapsed comment itself.
  std::string text_normalized;
  std::string raw;
  std::optional<Instruction> instruction;
  std::string label;      // defined name, for Label lines
  std::string directive;  // ".word" etc., for Directive lines
  friend bool operator==(const Line&, const Line&) = default;
};

/// Lines [begin, end) of a function, 0-based; begin is the entry label.
struct FunctionSpan {
  std::string name;
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const FunctionSpan&, const FunctionSpan&) = default;
};

struct AssemblyUnit {
  IsaName isa = IsaName::X86_64;
  std::string source_id;
  std::string raw_text;
  std::vector<Line> lines;
  std::vector<FunctionSpan> functions;
  /// Operands that matched no grammar rule and fell back to OtherOperand.
  std::size_t fallback_count = 0;
};

/// Total parser: never throws on content. Invalid UTF-8 bytes are replaced
/// with U+FFFD before parsing.
AssemblyUnit parse_assembly(std::string_view text, const Isa& isa, std::string source_id = {});

enum class NormalizationPolicy {
  /// Strip comments, blank lines and `.file`/`.ident`; collapse whitespace.
  Canonical,
  /// Raw text with line endings unified and a trailing newline.
  Raw,
};

std::string_view to_string(NormalizationPolicy policy);
NormalizationPolicy policy_from_string(std::string_view text);

std::string normalize(const AssemblyUnit& unit,
                      NormalizationPolicy policy = NormalizationPolicy::Canonical);

/// parse_assembly + normalize.
std::string normalize_text(std::string_view text, const Isa& isa,
                           NormalizationPolicy policy = NormalizationPolicy::Canonical);

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view text);

}  // namespace asmxlate
