#include <gtest/gtest.h>

#include "asmxlate/backend.hpp"
#include "asmxlate/dataset.hpp"
#include "asmxlate/error.hpp"
#include "asmxlate/files.hpp"
#include "support.hpp"

using namespace asmxlate;
namespace fs = std::filesystem;

#define REQUIRE_TOOLCHAIN() \
  if (!testsupport::toolchain_available()) GTEST_SKIP() << "cross toolchain or emulator not installed"

namespace {

TranspileRequest request(std::string text, int beams = 1) {
  TranspileRequest r;
  r.source_text = std::move(text);
  r.params.num_beams = beams;
  return r;
}

std::string rule(const std::string& x86) {
  return normalize_text(rule_translate(parse_assembly(x86, isa(IsaName::X86_64))), isa(IsaName::ARMV5));
}

class FixedBackend final : public Backend {
 public:
  explicit FixedBackend(std::size_t n) : n_(n) {}
  std::string id() const override { return "fixed"; }

 protected:
  std::vector<Candidate> transpile_impl(const TranspileRequest&) override {
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < n_; ++i) out.push_back({"c" + std::to_string(i), 1.0 / double(i + 1)});
    return out;
  }

 private:
  std::size_t n_;
};

std::string x86_of(const std::string& rule_fixture) {
  return compile_to_assembly(testsupport::source_dir() / "suites" / "rule" / rule_fixture / "func.c",
                             IsaName::X86_64, testsupport::test_config());
}

}  // namespace

TEST(Backend, IdentityEchoes) {
  IdentityBackend b;
  const auto r = b.transpile(request("movl $1, %eax\nret\n"));
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.candidates[0].text, "movl $1, %eax\nret\n");
  EXPECT_EQ(r.backend_id, "identity");
  EXPECT_GE(r.latency_ms, 0.0);
}

TEST(Backend, ReplayLooksUpPair) {
  ReplayBackend b(std::map<std::string, std::string>{{"p1", "mov r0, #1\n"}});
  auto req = request("x");
  req.pair_id = "p1";
  EXPECT_EQ(b.transpile(req).candidates.at(0).text, "mov r0, #1\n");
  req.pair_id = "nope";
  EXPECT_THROW(b.transpile(req), BackendError);
}

TEST(Backend, CandidatesCappedByBeams) {
  FixedBackend five(5);
  EXPECT_EQ(five.transpile(request("x", 3)).candidates.size(), 3u);
  EXPECT_EQ(five.transpile(request("x", 8)).candidates.size(), 5u);
  FixedBackend none(0);
  EXPECT_THROW(none.transpile(request("x")), BackendError);
}

TEST(Backend, RequestValidated) {
  IdentityBackend b;
  auto r = request("x");
  r.source_isa = IsaName::ARMV5;
  EXPECT_THROW(b.transpile(r), Error);
  r = request("x");
  r.target_isa = IsaName::X86_64;
  EXPECT_THROW(b.transpile(r), Error);
  r = request("x", 0);
  EXPECT_THROW(b.transpile(r), Error);
}

TEST(RuleBackend, RegisterMapOnAdd) {
  const auto out = rule("\t.globl\tf\n\t.type\tf, @function\nf:\n\taddl\t%ebx, %eax\n\tret\n");
  EXPECT_NE(out.find("add r0, r0, r4\n"), std::string::npos) << out;
  EXPECT_NE(out.find("mov pc, lr\n"), std::string::npos) << out;
}

TEST(RuleBackend, ImmediateForms) {
  const auto out = rule("f:\n\tmovl\t$5, %eax\n\tmovl\t$-1, %ecx\n\tmovl\t$305419896, %edx\n\tret\n");
  EXPECT_NE(out.find("mov r0, #5\n"), std::string::npos) << out;
  EXPECT_NE(out.find("mvn r1, #0\n"), std::string::npos) << out;
  EXPECT_NE(out.find("ldr r2, =305419896\n"), std::string::npos) << out;
}

TEST(RuleBackend, UnsupportedInstructionNamed) {
  try {
    rule("f:\n\tmovl\t$1, %eax\n\tcvtsi2sd\t%eax, %xmm0\n\tret\n");
    FAIL();
  } catch (const UnsupportedInstruction& e) {
    EXPECT_EQ(e.mnemonic(), "cvtsi2sd");
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(RuleBackend, UnsupportedDirective) {
  EXPECT_THROW(rule("\t.section\t.rodata\nf:\n\tret\n"), UnsupportedInstruction);
}

TEST(RuleBackend, OnlyArmv5) {
  RuleBackend b;
  auto r = request("f:\n\tret\n");
  r.target_isa = IsaName::RISCV64;
  EXPECT_THROW(b.transpile(r), BackendRefused);
}

TEST(RuleBackend, ConstRetFixture) {
  REQUIRE_TOOLCHAIN();
  const auto out = rule(x86_of("const_ret"));
  EXPECT_NE(out.find("mov r0, #5\n"), std::string::npos) << out;
  EXPECT_NE(out.find("mov pc, lr\n"), std::string::npos) << out;
}

TEST(RuleBackend, SuiteOutputParsesCleanly) {
  REQUIRE_TOOLCHAIN();
  for (const auto& e : fs::directory_iterator(testsupport::source_dir() / "suites" / "rule")) {
    const auto arm = rule_translate(parse_assembly(x86_of(e.path().filename().string()), isa(IsaName::X86_64)));
    const auto u = parse_assembly(arm, isa(IsaName::ARMV5));
    EXPECT_EQ(u.fallback_count, 0u) << e.path();
    EXPECT_FALSE(u.functions.empty()) << e.path();
  }
}

TEST(Backend, DeterministicWithoutSampling) {
  REQUIRE_TOOLCHAIN();
  const auto x86 = normalize_text(x86_of("fib_iter"), isa(IsaName::X86_64));
  IdentityBackend id;
  RuleBackend rb;
  for (Backend* b : std::initializer_list<Backend*>{&id, &rb}) {
    const auto a = b->transpile(request(x86));
    const auto c = b->transpile(request(x86));
    EXPECT_EQ(a.candidates, c.candidates) << b->id();
  }
}

TEST(Prompt, PreambleFilled) {
  const auto cfg = testsupport::test_config();
  const auto p = compose_prompt(cfg, IsaName::RISCV64, "movl $1, %eax\n");
  EXPECT_NE(p.find("riscv64"), std::string::npos);
  EXPECT_NE(p.find("-O0"), std::string::npos);
  EXPECT_EQ(p.find("{target}"), std::string::npos);
  EXPECT_TRUE(p.ends_with("\nmovl $1, %eax\n"));
}
