#include <gtest/gtest.h>

#include "asmxlate/error.hpp"
#include "asmxlate/register_profile.hpp"

using namespace asmxlate;

namespace {

RegisterProfile arm(const std::string& text) {
  return static_register_profile(parse_assembly(text, isa(IsaName::ARMV5)));
}

std::vector<std::size_t> overwrites(const RegisterProfile& p, const std::string& reg) {
  const auto* u = p.find(reg);
  return u == nullptr ? std::vector<std::size_t>{} : u->overwrite_without_read_lines;
}

}  // namespace

TEST(RegisterProfile, BackToBackWrites) {
  const auto p = arm("mov r3, r0\nmov r3, r1\n");
  EXPECT_EQ(overwrites(p, "r3"), (std::vector<std::size_t>{2}));
  EXPECT_EQ(p.find("r3")->writes, 2u);
  EXPECT_EQ(p.find("r3")->first_write_line, 1u);
}

TEST(RegisterProfile, ReadIntervenes) {
  const auto p = arm("mov r3, r0\nadd r1, r3, r2\n");
  EXPECT_TRUE(overwrites(p, "r3").empty());
  EXPECT_EQ(p.find("r3")->reads, 1u);
}

// The predicted code loads straight into r0, destroying the
// value the ground truth preserved through `mov r0, r2`.
TEST(RegisterProfile, LoadClobberFlagged) {
  const auto truth = arm(
      "ldr r2, [fp, #-8]\n"
      "mov r0, r2\n"
      "ldr r1, [r3, r1, lsl #2]\n"
      "mul r0, r0, r1\n");
  EXPECT_TRUE(overwrites(truth, "r0").empty());
  const auto predicted = arm(
      "ldr r0, [fp, #-8]\n"
      "ldr r0, [r3, r1, lsl #2]\n"
      "mul r0, r0, r1\n");
  EXPECT_EQ(overwrites(predicted, "r0"), (std::vector<std::size_t>{2}));
}

TEST(RegisterProfile, ReadModifyWriteIsARead) {
  const auto p = arm("mov r0, #1\nadd r0, r0, #1\n");
  EXPECT_TRUE(overwrites(p, "r0").empty());
}

TEST(RegisterProfile, MemoryBaseCountsAsRead) {
  const auto p = arm("mov r0, #4\nldr r0, [r0]\n");
  EXPECT_TRUE(overwrites(p, "r0").empty());
}

TEST(RegisterProfile, LabelsAndBranchesResetPending) {
  EXPECT_TRUE(overwrites(arm("mov r0, #1\n.L1:\nmov r0, #2\n"), "r0").empty());
  EXPECT_TRUE(overwrites(arm("mov r0, #1\nbl f\nmov r0, #2\n"), "r0").empty());
}

TEST(RegisterProfile, ConditionalWriteAlsoReads) {
  // movgt may leave the old value in place, so the old value is live
  EXPECT_TRUE(overwrites(arm("mov r0, #1\nmovgt r0, #2\n"), "r0").empty());
  EXPECT_EQ(overwrites(arm("mov r0, #1\nmov r0, #2\n"), "r0").size(), 1u);
}

TEST(RegisterProfile, StoreDoesNotWrite) {
  const auto p = arm("mov r0, #1\nstr r0, [sp]\nmov r0, #2\n");
  EXPECT_TRUE(overwrites(p, "r0").empty());
  EXPECT_EQ(p.find("r0")->writes, 2u);
}

TEST(RegisterProfile, PopWritesList) {
  const auto p = arm("mov r4, #1\npop {r4, pc}\n");
  EXPECT_EQ(p.find("r4")->writes, 2u);
}

TEST(RegisterProfile, X86DestinationIsLast) {
  const auto u = parse_assembly("movl $1, %eax\nmovl $2, %eax\naddl %eax, %ebx\n", isa(IsaName::X86_64));
  const auto p = static_register_profile(u);
  // eax and rax share a canonical entry
  EXPECT_EQ(overwrites(p, "rax"), (std::vector<std::size_t>{2}));
  EXPECT_TRUE(overwrites(p, "rbx").empty());
  EXPECT_EQ(p.find("rbx")->reads, 1u);
}

TEST(RegisterProfile, UnknownMnemonicAssumesFirstOperand) {
  const auto p = arm("frobnicate r5, r6\nfrobnicate r5, r6\n");
  EXPECT_TRUE(p.assumed_mnemonics.count("frobnicate"));
  EXPECT_EQ(overwrites(p, "r5"), (std::vector<std::size_t>{2}));
}

TEST(RegisterProfile, RiscvAndArmv8Tables) {
  const auto r = static_register_profile(parse_assembly("li a0, 1\nli a0, 2\n", isa(IsaName::RISCV64)));
  EXPECT_EQ(overwrites(r, "a0"), (std::vector<std::size_t>{2}));
  const auto a = static_register_profile(parse_assembly("mov w0, #1\nmov x0, #2\n", isa(IsaName::ARMV8)));
  EXPECT_EQ(overwrites(a, "x0"), (std::vector<std::size_t>{2}));
  const auto s = static_register_profile(parse_assembly("mov w8, #1\nstr w8, [sp]\n", isa(IsaName::ARMV8)));
  EXPECT_TRUE(s.assumed_mnemonics.empty());
}

TEST(RoleTable, ParseAndLookup) {
  const auto t = OperandRoleTable::parse(
      "version 3\n"
      "default writes=0\n"
      "# comment\n"
      "cmp writes=\n"
      "ld* writes=0\n"
      "ldm* writes=1\n"
      "umull writes=0,1 readwrite=-1\n",
      IsaName::ARMV5);
  EXPECT_EQ(t.version(), "3");
  EXPECT_TRUE(t.lookup("cmp").writes.empty());
  EXPECT_EQ(t.lookup("ldmia").writes, (std::vector<int>{1}));  // longest prefix
  EXPECT_EQ(t.lookup("ldrb").writes, (std::vector<int>{0}));
  EXPECT_EQ(t.lookup("umull").read_writes, (std::vector<int>{-1}));
  EXPECT_FALSE(t.lookup("zzz").known);
  EXPECT_TRUE(t.lookup("cmpne").conditional);
}

TEST(RoleTable, RejectsMalformedLines) {
  EXPECT_THROW(OperandRoleTable::parse("mov reads=1\n", IsaName::ARMV5), ConfigError);
  EXPECT_THROW(OperandRoleTable::parse("mov writes=x\n", IsaName::ARMV5), ConfigError);
  EXPECT_THROW(OperandRoleTable::parse("mov\n", IsaName::ARMV5), ConfigError);
}

TEST(RoleTable, ShippedTablesLoad) {
  for (auto name : {IsaName::X86_64, IsaName::ARMV5, IsaName::ARMV8, IsaName::RISCV64}) {
    EXPECT_GT(OperandRoleTable::builtin(name).size(), 10u) << to_string(name);
  }
}
