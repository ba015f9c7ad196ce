#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace asmxlate {

enum class IsaName { X86_64, ARMV5, ARMV8, RISCV64 };

enum class SyntaxFamily { ATT, ARM_UAL, RISCV_STD };

std::string_view to_string(IsaName isa);
std::string_view to_string(SyntaxFamily family);

/// Accepts the canonical lowercase names ("x86_64", "armv5", "armv8",
/// "riscv64") and the enum spellings, case-insensitively.
std::optional<IsaName> parse_isa_name(std::string_view text);

/// Throwing variant of parse_isa_name.
IsaName isa_from_string(std::string_view text);

/// Static facts about one instruction set as seen in compiler-emitted
/// assembly text.
class Isa {
 public:
  Isa(IsaName name, SyntaxFamily family, std::vector<std::string> comment_leaders,
      std::vector<std::string> register_names, std::set<std::string> branch_mnemonics,
      std::unordered_map<std::string, std::string> register_aliases);

  IsaName name() const noexcept { return name_; }
  SyntaxFamily syntax_family() const noexcept { return family_; }
  const std::vector<std::string>& comment_leaders() const noexcept { return comment_leaders_; }
  const std::vector<std::string>& register_names() const noexcept { return register_names_; }
  const std::set<std::string>& branch_mnemonics() const noexcept { return branch_mnemonics_; }

  bool is_register(std::string_view name) const;

  /// Maps sub-register and ABI aliases onto one architectural name
  /// (eax -> rax, w3 -> x3, a0 -> x10, fp -> r11). Unknown names pass through.
  std::string canonical_register(std::string_view name) const;

  /// True for jumps, calls and returns, including ARM conditional forms.
  bool is_branch(std::string_view mnemonic) const;

 private:
  IsaName name_;
  SyntaxFamily family_;
  std::vector<std::string> comment_leaders_;
  std::vector<std::string> register_names_;
  std::set<std::string, std::less<>> register_set_;
  std::set<std::string> branch_mnemonics_;
  std::unordered_map<std::string, std::string> aliases_;
};

/// The four built-in ISAs, in IsaName order. Pure; same object every call.
const std::vector<Isa>& isa_registry();

const Isa& isa(IsaName name);

}  // namespace asmxlate
