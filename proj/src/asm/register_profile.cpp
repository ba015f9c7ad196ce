#include "asmxlate/register_profile.hpp"

#include <array>
#include <charconv>
#include <mutex>
#include <sstream>

#include "asmxlate/error.hpp"
#include "asmxlate/files.hpp"

namespace asmxlate {

namespace {

constexpr std::array<std::string_view, 16> kArmConditions = {
    "eq", "ne", "cs", "cc", "mi", "pl", "vs", "vc",
    "hi", "ls", "ge", "lt", "gt", "le", "al", "hs"};

bool is_arm_condition(std::string_view s) {
  for (auto c : kArmConditions) {
    if (c == s || s == "lo") return true;
  }
  return false;
}

std::vector<int> parse_indices(std::string_view list, std::size_t line_no) {
  std::vector<int> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = list.substr(0, comma);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw ConfigError("roles", "bad operand index '" + std::string(item) + "' on line " +
                                     std::to_string(line_no));
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return out;
}

std::optional<std::size_t> resolve(int idx, std::size_t n) {
  const long long r = idx < 0 ? static_cast<long long>(n) + idx : idx;
  if (r < 0 || r >= static_cast<long long>(n)) return std::nullopt;
  return static_cast<std::size_t>(r);
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) {
  for (auto e : v) {
    if (e == x) return true;
  }
  return false;
}

}  // namespace

OperandRoleTable OperandRoleTable::parse(std::string_view text, IsaName isa) {
  OperandRoleTable t;
  t.isa_ = isa;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string name;
    if (!(words >> name)) continue;
    if (name == "version") {
      words >> t.version_;
      continue;
    }
    OperandRoles roles;
    std::string field;
    bool saw_writes = false;
    while (words >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("roles", "expected key=value on line " + std::to_string(line_no));
      }
      const std::string_view key(field.data(), eq);
      const std::string_view val(field.data() + eq + 1, field.size() - eq - 1);
      if (key == "writes") {
        roles.writes = parse_indices(val, line_no);
        saw_writes = true;
      } else if (key == "readwrite") {
        roles.read_writes = parse_indices(val, line_no);
      } else {
        throw ConfigError("roles", "unknown key '" + std::string(key) + "' on line " +
                                       std::to_string(line_no));
      }
    }
    if (!saw_writes) {
      throw ConfigError("roles", "missing writes= on line " + std::to_string(line_no));
    }
    if (name == "default") {
      roles.known = false;
      t.default_ = roles;
    } else if (name.size() > 1 && name.back() == '*') {
      name.pop_back();
      t.prefixes_.emplace_back(name, roles);
    } else {
      t.exact_[name] = roles;
    }
  }
  return t;
}

OperandRoleTable OperandRoleTable::load(const std::filesystem::path& path, IsaName isa) {
  return parse(read_file(path), isa);
}

const OperandRoleTable& OperandRoleTable::builtin(IsaName isa) {
  static std::once_flag once;
  static std::array<OperandRoleTable, 4> tables;
  std::call_once(once, [] {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto name = static_cast<IsaName>(i);
      tables[i] = load(data_dir() / "roles" / (std::string(to_string(name)) + ".roles"), name);
    }
  });
  return tables[static_cast<std::size_t>(isa)];
}

std::optional<OperandRoles> OperandRoleTable::find(std::string_view m) const {
  if (auto it = exact_.find(m); it != exact_.end()) return it->second;
  // longest prefix wins
  const OperandRoles* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& [p, r] : prefixes_) {
    if (m.size() > p.size() && m.substr(0, p.size()) == p && p.size() > best_len) {
      best = &r;
      best_len = p.size();
    }
  }
  if (best != nullptr) return *best;

  switch (isa_) {
    case IsaName::X86_64:
      if (m.size() > 1 && std::string_view("bwlq").find(m.back()) != std::string_view::npos) {
        if (auto it = exact_.find(m.substr(0, m.size() - 1)); it != exact_.end()) return it->second;
      }
      break;
    case IsaName::ARMV5:
    case IsaName::ARMV8: {
      if (isa_ == IsaName::ARMV8 && m.size() > 2 && m.substr(0, 2) == "b.") return find("b");
      if (m.size() > 2 && is_arm_condition(m.substr(m.size() - 2))) {
        if (auto r = find(m.substr(0, m.size() - 2))) {
          r->conditional = true;
          return r;
        }
      }
      if (m.size() > 1 && m.back() == 's') {
        if (auto r = find(m.substr(0, m.size() - 1))) return r;
      }
      break;
    }
    case IsaName::RISCV64:
      break;
  }
  return std::nullopt;
}

OperandRoles OperandRoleTable::lookup(std::string_view mnemonic) const {
  if (auto r = find(mnemonic)) return *r;
  return default_;
}

const RegisterUsage* RegisterProfile::find(std::string_view reg) const {
  const auto it = registers.find(std::string(reg));
  return it == registers.end() ? nullptr : &it->second;
}

RegisterProfile static_register_profile(const AssemblyUnit& unit, const OperandRoleTable& table) {
  const Isa& arch = isa(unit.isa);
  RegisterProfile prof;
  std::map<std::string, bool> pending;  // written, not yet read

  const auto read = [&](const std::string& r) {
    const auto c = arch.canonical_register(r);
    ++prof.registers[c].reads;
    pending[c] = false;
  };
  const auto write = [&](const std::string& r, std::size_t line) {
    const auto c = arch.canonical_register(r);
    auto& u = prof.registers[c];
    ++u.writes;
    if (!u.first_write_line) u.first_write_line = line;
    if (pending[c]) u.overwrite_without_read_lines.push_back(line);
    pending[c] = true;
  };

  for (std::size_t i = 0; i < unit.lines.size(); ++i) {
    const Line& line = unit.lines[i];
    if (line.kind == LineKind::Label) {
      pending.clear();
      continue;
    }
    if (line.kind != LineKind::Instruction || !line.instruction) continue;
    const Instruction& ins = *line.instruction;
    const std::size_t ln = i + 1;
    OperandRoles roles = table.lookup(ins.mnemonic);
    if (!roles.known) prof.assumed_mnemonics.insert(ins.mnemonic);

    const std::size_t n = ins.operands.size();
    std::vector<std::size_t> w, rw;
    for (int idx : roles.writes) {
      if (auto r = resolve(idx, n)) w.push_back(*r);
    }
    for (int idx : roles.read_writes) {
      if (auto r = resolve(idx, n)) rw.push_back(*r);
    }
    if (roles.conditional) rw.insert(rw.end(), w.begin(), w.end());

    // reads happen before writes within one instruction
    std::vector<std::string> writes_here;
    for (std::size_t k = 0; k < n; ++k) {
      const Operand& op = ins.operands[k];
      const bool is_w = contains(w, k) || contains(rw, k);
      const bool is_r = !is_w || contains(rw, k);
      if (op.is<RegisterOperand>()) {
        if (is_r) read(op.as<RegisterOperand>().name);
        if (is_w) writes_here.push_back(op.as<RegisterOperand>().name);
      } else if (op.is<RegisterListOperand>()) {
        for (const auto& r : op.as<RegisterListOperand>().registers) {
          if (is_r) read(r);
          if (is_w) writes_here.push_back(r);
        }
      } else if (op.is<MemoryOperand>()) {
        const auto& mem = op.as<MemoryOperand>();
        if (mem.base && arch.is_register(*mem.base)) read(*mem.base);
        if (mem.index && arch.is_register(*mem.index)) read(*mem.index);
      }
    }
    for (const auto& r : writes_here) write(r, ln);
    if (arch.is_branch(ins.mnemonic)) pending.clear();
  }
  return prof;
}

RegisterProfile static_register_profile(const AssemblyUnit& unit) {
  return static_register_profile(unit, OperandRoleTable::builtin(unit.isa));
}

}  // namespace asmxlate
