#include <map>
#include <set>

#include "asmxlate/backend.hpp"

namespace asmxlate {

namespace {

// x86 argument registers edi/esi/edx/ecx live in r6/r5/r2/r1 inside
// translated bodies; r0-r3 carry them across calls.
const std::map<std::string, std::string, std::less<>> kRegMap = {
    {"rax", "r0"}, {"rcx", "r1"}, {"rdx", "r2"}, {"rbx", "r4"}, {"rsi", "r5"}, {"rdi", "r6"}};

const std::map<std::string, std::string, std::less<>> kBranches = {
    {"jmp", "b"},   {"je", "beq"},  {"jz", "beq"},  {"jne", "bne"}, {"jnz", "bne"},
    {"jl", "blt"},  {"jg", "bgt"},  {"jle", "ble"}, {"jge", "bge"}};

const std::set<std::string, std::less<>> kQuietDirectives = {
    ".text", ".globl", ".global", ".type", ".p2align", ".align", ".file", ".ident"};

constexpr std::string_view kSaved = "{r4, r5, r6, r7, fp, lr}";

bool arm_encodable(std::int64_t v) {
  if (v < INT32_MIN || v > UINT32_MAX) return false;
  const auto u = static_cast<std::uint32_t>(v);
  for (unsigned rot = 0; rot < 32; rot += 2) {
    const std::uint32_t r = rot == 0 ? u : (u << rot) | (u >> (32 - rot));
    if (r <= 0xFF) return true;
  }
  return false;
}

std::string imm(std::int64_t v) { return "#" + std::to_string(v); }

class Translator {
 public:
  explicit Translator(const AssemblyUnit& unit) : unit_(unit), x86_(isa(IsaName::X86_64)) {}

  std::string run() {
    collect_globals();
    out_ = "\t.text\n\t.syntax unified\n";
    std::size_t fn = 0;
    for (std::size_t i = 0; i < unit_.lines.size(); ++i) {
      line_ = i + 1;
      const Line& l = unit_.lines[i];
      while (fn < unit_.functions.size() && unit_.functions[fn].end <= i) ++fn;
      const bool inside = fn < unit_.functions.size() && unit_.functions[fn].begin <= i;
      switch (l.kind) {
        case LineKind::Blank:
        case LineKind::Comment:
          break;
        case LineKind::Directive:
          directive(l);
          break;
        case LineKind::Label:
          if (inside && i == unit_.functions[fn].begin) {
            function_entry(unit_.functions[fn]);
          } else {
            out_ += l.label + ":\n";
          }
          break;
        case LineKind::Instruction:
          if (!inside) unsupported(l.instruction->mnemonic);
          instruction(*l.instruction);
          break;
      }
    }
    return out_;
  }

 private:
  [[noreturn]] void unsupported(std::string what) const {
    throw UnsupportedInstruction(std::move(what), line_);
  }

  void emit(std::string_view mnemonic, std::string_view args = {}) {
    out_ += "\t";
    out_ += mnemonic;
    if (!args.empty()) {
      out_ += "\t";
      out_ += args;
    }
    out_ += "\n";
  }

  void collect_globals() {
    for (const auto& l : unit_.lines) {
      if (l.kind != LineKind::Directive) continue;
      if (l.directive != ".globl" && l.directive != ".global") continue;
      const auto sp = l.text_normalized.find(' ');
      if (sp != std::string::npos) globals_.insert(l.text_normalized.substr(sp + 1));
    }
  }

  void directive(const Line& l) {
    if (kQuietDirectives.count(l.directive)) return;
    if (l.directive == ".size") {
      const auto sp = l.text_normalized.find(' ');
      const auto comma = l.text_normalized.find(',');
      if (sp == std::string::npos || comma == std::string::npos) unsupported(l.directive);
      const std::string name = l.text_normalized.substr(sp + 1, comma - sp - 1);
      out_ += "\t.size\t" + name + ", .-" + name + "\n";
      return;
    }
    if (l.directive == ".section") {
      const std::string& t = l.text_normalized;
      if (t.find(".note.GNU-stack") != std::string::npos) return;
      if (t.compare(0, 14, ".section .text") == 0) return;
    }
    unsupported(l.directive);
  }

  /// Largest frame extent below rbp, including callee-save pushes.
  std::int64_t frame_size(const FunctionSpan& span) const {
    std::int64_t extent = 0, pushes = 0;
    for (std::size_t i = span.begin; i < span.end; ++i) {
      const auto& ins = unit_.lines[i].instruction;
      if (!ins) continue;
      if (ins->mnemonic == "pushq" && !ins->operands.empty() &&
          ins->operands[0].is<RegisterOperand>() &&
          x86_.canonical_register(ins->operands[0].as<RegisterOperand>().name) != "rbp") {
        pushes += 8;
      }
      for (const auto& op : ins->operands) {
        if (!op.is<MemoryOperand>()) continue;
        const auto& m = op.as<MemoryOperand>();
        if (m.base && x86_.canonical_register(*m.base) == "rbp" && m.offset && *m.offset < 0) {
          extent = std::max(extent, -*m.offset);
        }
      }
    }
    const std::int64_t n = std::max(extent, pushes);
    return (n + 7) / 8 * 8;
  }

  void function_entry(const FunctionSpan& span) {
    if (globals_.count(span.name)) out_ += "\t.globl\t" + span.name + "\n";
    out_ += "\t.p2align\t2\n\t.type\t" + span.name + ", %function\n" + span.name + ":\n";
    depth_ = 0;
    emit("push", kSaved);
    emit("mov", "fp, sp");
    if (const auto n = frame_size(span); n > 0) {
      if (arm_encodable(n)) {
        emit("sub", "sp, sp, " + imm(n));
      } else {
        emit("ldr", "ip, =" + std::to_string(n));
        emit("sub", "sp, sp, ip");
      }
    }
    emit("mov", "r6, r0");
    emit("mov", "r5, r1");
    emit("mov", "r1, r3");
  }

  std::string canon(const Operand& op) const {
    return x86_.canonical_register(op.as<RegisterOperand>().name);
  }

  bool is_reg(const Operand& op, std::string_view canonical) const {
    return op.is<RegisterOperand>() && canon(op) == canonical;
  }

  std::string reg(const Operand& op) const {
    if (!op.is<RegisterOperand>()) unsupported(op.text);
    const std::string& name = op.as<RegisterOperand>().name;
    // only full 32/64-bit views keep the integer semantics intact
    if (name.size() != 3 || (name[0] != 'e' && name[0] != 'r')) unsupported(op.text);
    const auto it = kRegMap.find(canon(op));
    if (it == kRegMap.end()) unsupported(op.text);
    return it->second;
  }

  std::string mem(const Operand& op) const {
    const auto& m = op.as<MemoryOperand>();
    if (!m.base || x86_.canonical_register(*m.base) != "rbp" || m.index || m.symbol || !m.offset ||
        *m.offset >= 0 || *m.offset < -4095) {
      unsupported(op.text);
    }
    return "[fp, " + imm(*m.offset) + "]";
  }

  void load_imm(const std::string& dst, std::int64_t v) {
    if (arm_encodable(v)) {
      emit("mov", dst + ", " + imm(v));
    } else if (arm_encodable(~v)) {
      emit("mvn", dst + ", " + imm(~v));
    } else {
      emit("ldr", dst + ", =" + std::to_string(static_cast<std::int32_t>(v)));
    }
  }

  /// Register or loaded scratch holding `src`.
  std::string value(const Operand& src, const std::string& scratch) {
    if (src.is<RegisterOperand>()) return reg(src);
    if (src.is<ImmediateOperand>()) {
      load_imm(scratch, src.as<ImmediateOperand>().value);
      return scratch;
    }
    if (src.is<MemoryOperand>()) {
      emit("ldr", scratch + ", " + mem(src));
      return scratch;
    }
    unsupported(src.text);
  }

  void expect(const Instruction& ins, std::size_t n) const {
    if (ins.operands.size() != n) unsupported(ins.mnemonic);
  }

  void mov(const Operand& src, const Operand& dst) {
    if (dst.is<RegisterOperand>()) {
      const std::string d = reg(dst);
      if (src.is<RegisterOperand>()) {
        emit("mov", d + ", " + reg(src));
      } else if (src.is<ImmediateOperand>()) {
        load_imm(d, src.as<ImmediateOperand>().value);
      } else if (src.is<MemoryOperand>()) {
        emit("ldr", d + ", " + mem(src));
      } else {
        unsupported(src.text);
      }
    } else if (dst.is<MemoryOperand>()) {
      const std::string m = mem(dst);
      emit("str", value(src, "ip") + ", " + m);
    } else {
      unsupported(dst.text);
    }
  }

  void arith(std::string op, const Operand& src, const Operand& dst) {
    const bool to_mem = dst.is<MemoryOperand>();
    std::string d;
    if (to_mem) {
      d = "lr";
      emit("ldr", "lr, " + mem(dst));
    } else {
      d = reg(dst);
    }
    std::string rhs;
    if (src.is<ImmediateOperand>()) {
      const std::int64_t v = src.as<ImmediateOperand>().value;
      if (arm_encodable(v)) {
        rhs = imm(v);
      } else if (arm_encodable(-v)) {
        op = op == "add" ? "sub" : "add";
        rhs = imm(-v);
      } else {
        load_imm("ip", v);
        rhs = "ip";
      }
    } else {
      rhs = value(src, "ip");
    }
    emit(op, d + ", " + d + ", " + rhs);
    if (to_mem) emit("str", "lr, " + mem(dst));
  }

  void imul(const Instruction& ins) {
    if (ins.operands.size() == 2) {
      const std::string d = reg(ins.operands[1]);
      const std::string s = value(ins.operands[0], "ip");
      // ARMv5 forbids Rd == Rm, so multiply into lr first
      emit("mul", "lr, " + d + ", " + s);
      emit("mov", d + ", lr");
    } else if (ins.operands.size() == 3 && ins.operands[0].is<ImmediateOperand>()) {
      const std::string d = reg(ins.operands[2]);
      load_imm("ip", ins.operands[0].as<ImmediateOperand>().value);
      if (ins.operands[1].is<MemoryOperand>()) {
        emit("ldr", "lr, " + mem(ins.operands[1]));
        emit("mul", d + ", lr, ip");
      } else {
        emit("mul", "lr, " + reg(ins.operands[1]) + ", ip");
        emit("mov", d + ", lr");
      }
    } else {
      unsupported(ins.mnemonic);
    }
  }

  void cmp(const Operand& src, const Operand& dst) {
    std::string lhs;
    if (dst.is<MemoryOperand>()) {
      emit("ldr", "lr, " + mem(dst));
      lhs = "lr";
    } else {
      lhs = reg(dst);
    }
    if (src.is<ImmediateOperand>()) {
      const std::int64_t v = src.as<ImmediateOperand>().value;
      if (arm_encodable(v)) {
        emit("cmp", lhs + ", " + imm(v));
      } else if (arm_encodable(-v)) {
        emit("cmn", lhs + ", " + imm(-v));
      } else {
        load_imm("ip", v);
        emit("cmp", lhs + ", ip");
      }
      return;
    }
    emit("cmp", lhs + ", " + value(src, "ip"));
  }

  void instruction(const Instruction& ins) {
    const std::string& m = ins.mnemonic;
    const auto& ops = ins.operands;
    if (m == "nop" || m == "endbr64" || m == "leave") return;
    if (m == "pushq" || m == "popq") {
      expect(ins, 1);
      if (is_reg(ops[0], "rbp")) return;
      const std::string r = reg(ops[0]);
      if (m == "pushq") {
        depth_ += 8;
        emit("str", r + ", [fp, " + imm(-depth_) + "]");
      } else {
        if (depth_ == 0) unsupported(m);
        emit("ldr", r + ", [fp, " + imm(-depth_) + "]");
        depth_ -= 8;
      }
      return;
    }
    if (m == "movl" || m == "movq") {
      expect(ins, 2);
      if (is_reg(ops[0], "rsp") && is_reg(ops[1], "rbp")) return;
      mov(ops[0], ops[1]);
      return;
    }
    if (m == "addl" || m == "addq" || m == "subl" || m == "subq") {
      expect(ins, 2);
      if (m.back() == 'q' && is_reg(ops[1], "rsp") && ops[0].is<ImmediateOperand>()) return;
      arith(m.substr(0, 3), ops[0], ops[1]);
      return;
    }
    if (m == "imull") {
      imul(ins);
      return;
    }
    if (m == "cmpl" || m == "cmpq") {
      expect(ins, 2);
      cmp(ops[0], ops[1]);
      return;
    }
    if (const auto b = kBranches.find(m); b != kBranches.end()) {
      expect(ins, 1);
      if (!ops[0].is<LabelRefOperand>()) unsupported(m);
      emit(b->second, ops[0].as<LabelRefOperand>().name);
      return;
    }
    if (m == "call") {
      expect(ins, 1);
      if (!ops[0].is<LabelRefOperand>()) unsupported(m);
      emit("mov", "r3, r1");
      emit("mov", "r1, r5");
      emit("mov", "r0, r6");
      emit("bl", ops[0].as<LabelRefOperand>().name);
      return;
    }
    if (m == "ret") {
      emit("mov", "sp, fp");
      emit("pop", kSaved);
      emit("mov", "pc, lr");
      return;
    }
    unsupported(m);
  }

  const AssemblyUnit& unit_;
  const Isa& x86_;
  std::string out_;
  std::set<std::string> globals_;
  std::size_t line_ = 0;
  std::int64_t depth_ = 0;
};

}  // namespace

std::string rule_translate(const AssemblyUnit& unit) {
  if (unit.isa != IsaName::X86_64) throw Error("rule_translate: input must be x86_64 assembly");
  return Translator(unit).run();
}

}  // namespace asmxlate
