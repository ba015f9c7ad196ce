#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "asmxlate/assembly.hpp"

namespace asmxlate {

/// Which operand positions an instruction writes. Negative indices count
/// from the last operand.
struct OperandRoles {
  std::vector<int> writes;
  std::vector<int> read_writes;
  bool conditional = false;  // ARM condition-code suffix: the write may not happen
  bool known = true;         // false when the table default was applied
};

/// Per-ISA operand-role table loaded from a `mnemonic writes=<indices>` file.
class OperandRoleTable {
 public:
  OperandRoleTable() = default;

  static OperandRoleTable parse(std::string_view text, IsaName isa);
  static OperandRoleTable load(const std::filesystem::path& path, IsaName isa);

  /// The table shipped in `<data_dir>/roles/<isa>.roles`, loaded once.
  static const OperandRoleTable& builtin(IsaName isa);

  OperandRoles lookup(std::string_view mnemonic) const;
  const std::string& version() const noexcept { return version_; }
  std::size_t size() const noexcept { return exact_.size() + prefixes_.size(); }

 private:
  std::optional<OperandRoles> find(std::string_view mnemonic) const;

  IsaName isa_ = IsaName::X86_64;
  std::string version_;
  OperandRoles default_{{0}, {}, false, false};
  std::map<std::string, OperandRoles, std::less<>> exact_;
  std::vector<std::pair<std::string, OperandRoles>> prefixes_;
};

struct RegisterUsage {
  std::size_t writes = 0;
  std::size_t reads = 0;
  std::optional<std::size_t> first_write_line;  // 1-based
  /// 1-based lines where the register is written again with no read since
  /// its previous write.
  std::vector<std::size_t> overwrite_without_read_lines;
};

struct RegisterProfile {
  /// Keyed by canonical register name (eax and rax share "rax").
  std::map<std::string, RegisterUsage> registers;
  /// Mnemonics that fell back to the table default.
  std::set<std::string> assumed_mnemonics;

  const RegisterUsage* find(std::string_view reg) const;
};

/// Straight-line read/write accounting. Pending writes are forgotten at
/// label definitions and after branches, calls and returns, so only
/// overwrites inside one basic block are flagged.
RegisterProfile static_register_profile(const AssemblyUnit& unit, const OperandRoleTable& table);
RegisterProfile static_register_profile(const AssemblyUnit& unit);

}  // namespace asmxlate
