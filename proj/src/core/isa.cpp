#include "asmxlate/isa.hpp"

#include <algorithm>
#include <cctype>

#include "asmxlate/error.hpp"

namespace asmxlate {

namespace {

const char* const kArmConditions[] = {"eq", "ne", "cs", "hs", "cc", "lo", "mi", "pl", "vs",
                                      "vc", "hi", "ls", "ge", "lt", "gt", "le", "al"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Isa make_x86_64() {
  std::vector<std::string> regs;
  std::unordered_map<std::string, std::string> alias;
  const char* legacy[][5] = {
      {"rax", "eax", "ax", "al", "ah"}, {"rbx", "ebx", "bx", "bl", "bh"},
      {"rcx", "ecx", "cx", "cl", "ch"}, {"rdx", "edx", "dx", "dl", "dh"},
      {"rsi", "esi", "si", "sil", nullptr}, {"rdi", "edi", "di", "dil", nullptr},
      {"rbp", "ebp", "bp", "bpl", nullptr}, {"rsp", "esp", "sp", "spl", nullptr},
  };
  for (const auto& row : legacy) {
    for (const char* r : row) {
      if (r == nullptr) continue;
      regs.emplace_back(r);
      alias[r] = row[0];
    }
  }
  for (int i = 8; i <= 15; ++i) {
    const std::string base = "r" + std::to_string(i);
    for (const char* suffix : {"", "d", "w", "b"}) {
      regs.push_back(base + suffix);
      alias[base + suffix] = base;
    }
  }
  regs.insert(regs.end(), {"rip", "eip"});
  alias["eip"] = "rip";
  for (int i = 0; i < 16; ++i) regs.push_back("xmm" + std::to_string(i));
  for (const char* seg : {"cs", "ds", "es", "fs", "gs", "ss"}) regs.emplace_back(seg);

  std::set<std::string> branches = {"jmp", "je",  "jne", "jz",  "jnz",   "jl",    "jle",  "jg",
                                    "jge", "ja",  "jae", "jb",  "jbe",   "js",    "jns",  "jo",
                                    "jno", "jp",  "jnp", "jc",  "jnc",   "jcxz",  "jecxz", "call",
                                    "ret", "jmpq", "callq", "retq", "retl", "calll"};
  return Isa(IsaName::X86_64, SyntaxFamily::ATT, {"#", ";"}, std::move(regs), std::move(branches),
             std::move(alias));
}

Isa make_armv5() {
  std::vector<std::string> regs;
  for (int i = 0; i <= 15; ++i) regs.push_back("r" + std::to_string(i));
  regs.insert(regs.end(), {"fp", "sp", "lr", "pc", "ip", "sb", "sl"});
  std::unordered_map<std::string, std::string> alias = {
      {"r11", "fp"}, {"r12", "ip"}, {"r13", "sp"}, {"r14", "lr"},
      {"r15", "pc"}, {"sb", "r9"},  {"sl", "r10"}};
  std::set<std::string> branches = {"b", "bl", "bx", "blx"};
  for (const char* cond : kArmConditions) {
    for (const char* base : {"b", "bl", "bx", "blx"}) branches.insert(std::string(base) + cond);
  }
  return Isa(IsaName::ARMV5, SyntaxFamily::ARM_UAL, {"@", "//", ";"}, std::move(regs),
             std::move(branches), std::move(alias));
}

Isa make_armv8() {
  std::vector<std::string> regs;
  std::unordered_map<std::string, std::string> alias;
  for (int i = 0; i <= 30; ++i) {
    const std::string x = "x" + std::to_string(i);
    const std::string w = "w" + std::to_string(i);
    regs.push_back(x);
    regs.push_back(w);
    alias[w] = x;
  }
  alias["x29"] = "fp";
  alias["w29"] = "fp";
  alias["x30"] = "lr";
  alias["w30"] = "lr";
  regs.insert(regs.end(), {"sp", "wsp", "xzr", "wzr", "fp", "lr"});
  alias["wsp"] = "sp";
  alias["wzr"] = "xzr";
  for (int i = 0; i <= 31; ++i) {
    for (const char* kind : {"s", "d", "q", "v"}) regs.push_back(kind + std::to_string(i));
  }
  std::set<std::string> branches = {"b", "bl", "br", "blr", "ret", "cbz", "cbnz", "tbz", "tbnz"};
  for (const char* cond : kArmConditions) branches.insert(std::string("b.") + cond);
  // AArch64 GNU as uses '@' in `.type f,@function`, so only '//' starts a comment.
  return Isa(IsaName::ARMV8, SyntaxFamily::ARM_UAL, {"//", ";"}, std::move(regs),
             std::move(branches), std::move(alias));
}

Isa make_riscv64() {
  const char* abi[32] = {"zero", "ra", "sp", "gp", "tp",  "t0",  "t1", "t2", "s0", "s1", "a0",
                         "a1",   "a2", "a3", "a4", "a5",  "a6",  "a7", "s2", "s3", "s4", "s5",
                         "s6",   "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"};
  const char* fabi[32] = {"ft0", "ft1", "ft2",  "ft3",  "ft4", "ft5", "ft6",  "ft7",
                          "fs0", "fs1", "fa0",  "fa1",  "fa2", "fa3", "fa4",  "fa5",
                          "fa6", "fa7", "fs2",  "fs3",  "fs4", "fs5", "fs6",  "fs7",
                          "fs8", "fs9", "fs10", "fs11", "ft8", "ft9", "ft10", "ft11"};
  std::vector<std::string> regs;
  std::unordered_map<std::string, std::string> alias;
  for (int i = 0; i < 32; ++i) {
    const std::string x = "x" + std::to_string(i);
    const std::string f = "f" + std::to_string(i);
    regs.push_back(x);
    regs.emplace_back(abi[i]);
    regs.push_back(f);
    regs.emplace_back(fabi[i]);
    alias[x] = abi[i];
    alias[f] = fabi[i];
  }
  regs.emplace_back("fp");
  alias["fp"] = "s0";
  std::set<std::string> branches = {"j",    "jal",  "jalr", "jr",   "ret",  "call", "tail",
                                    "beq",  "bne",  "blt",  "bge",  "bltu", "bgeu", "beqz",
                                    "bnez", "blez", "bgez", "bltz", "bgtz", "bgt",  "ble",
                                    "bgtu", "bleu"};
  return Isa(IsaName::RISCV64, SyntaxFamily::RISCV_STD, {"#", ";"}, std::move(regs),
             std::move(branches), std::move(alias));
}

}  // namespace

std::string_view to_string(IsaName isa) {
  switch (isa) {
    case IsaName::X86_64: return "x86_64";
    case IsaName::ARMV5: return "armv5";
    case IsaName::ARMV8: return "armv8";
    case IsaName::RISCV64: return "riscv64";
  }
  return "unknown";
}

std::string_view to_string(SyntaxFamily family) {
  switch (family) {
    case SyntaxFamily::ATT: return "att";
    case SyntaxFamily::ARM_UAL: return "arm_ual";
    case SyntaxFamily::RISCV_STD: return "riscv_std";
  }
  return "unknown";
}

std::optional<IsaName> parse_isa_name(std::string_view text) {
  const std::string s = lower(text);
  if (s == "x86_64" || s == "x86-64" || s == "x86") return IsaName::X86_64;
  if (s == "armv5") return IsaName::ARMV5;
  if (s == "armv8" || s == "aarch64" || s == "arm64") return IsaName::ARMV8;
  if (s == "riscv64" || s == "risc-v64" || s == "rv64") return IsaName::RISCV64;
  return std::nullopt;
}

IsaName isa_from_string(std::string_view text) {
  if (auto isa = parse_isa_name(text)) return *isa;
  throw Error("unknown ISA '" + std::string(text) + "' (expected x86_64, armv5, armv8 or riscv64)");
}

Isa::Isa(IsaName name, SyntaxFamily family, std::vector<std::string> comment_leaders,
         std::vector<std::string> register_names, std::set<std::string> branch_mnemonics,
         std::unordered_map<std::string, std::string> register_aliases)
    : name_(name),
      family_(family),
      comment_leaders_(std::move(comment_leaders)),
      register_names_(std::move(register_names)),
      register_set_(register_names_.begin(), register_names_.end()),
      branch_mnemonics_(std::move(branch_mnemonics)),
      aliases_(std::move(register_aliases)) {
  if (register_set_.size() != register_names_.size() || register_names_.empty()) {
    throw std::logic_error("register table must be non-empty and duplicate-free");
  }
  if (comment_leaders_.empty()) throw std::logic_error("comment leaders must be non-empty");
}

bool Isa::is_register(std::string_view name) const {
  return register_set_.find(name) != register_set_.end();
}

std::string Isa::canonical_register(std::string_view name) const {
  auto it = aliases_.find(std::string(name));
  return it == aliases_.end() ? std::string(name) : it->second;
}

bool Isa::is_branch(std::string_view mnemonic) const {
  return branch_mnemonics_.count(std::string(mnemonic)) != 0;
}

const std::vector<Isa>& isa_registry() {
  static const std::vector<Isa> registry = {make_x86_64(), make_armv5(), make_armv8(),
                                            make_riscv64()};
  return registry;
}

const Isa& isa(IsaName name) { return isa_registry().at(static_cast<std::size_t>(name)); }

}  // namespace asmxlate
