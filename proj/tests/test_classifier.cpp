#include <gtest/gtest.h>

#include "asmxlate/error.hpp"
#include "asmxlate/eval.hpp"
#include "asmxlate/files.hpp"
#include "support.hpp"

using namespace asmxlate;
namespace fs = std::filesystem;

#define REQUIRE_TOOLCHAIN() \
  if (!testsupport::toolchain_available()) GTEST_SKIP() << "cross toolchain or emulator not installed"

namespace {

AssemblyUnit arm(std::string_view text) { return parse_assembly(text, isa(IsaName::ARMV5)); }

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

std::vector<fs::path> fixture_dirs() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(testsupport::fixtures() / "classifier"))
    if (e.is_directory()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// straight-line candidate with r2 written twice and never read in between
constexpr std::string_view kClobber =
    "f:\n\tmov r2, r0\n\tmov r2, r1\n\tadd r0, r2, #1\n\tbx lr\n";
constexpr std::string_view kClean = "f:\n\tmov r2, r0\n\tadd r0, r2, #1\n\tbx lr\n";

}  // namespace

TEST(Rules, BuiltinParses) {
  const auto& r = ClassifierRules::builtin();
  EXPECT_EQ(r.version, "1");
  ASSERT_FALSE(r.rules.empty());
  EXPECT_EQ(r.rules.front().cls, ErrorClass::Addressing);
  EXPECT_EQ(r.rules.front().source, RuleSource::Signal);
}

TEST(Rules, BadFilesRejected) {
  EXPECT_THROW(ClassifierRules::parse("addressing signal SIGSEGV\n"), ConfigError);
  EXPECT_THROW(ClassifierRules::parse("version 1\nwhatever signal X\n"), Error);
  EXPECT_THROW(ClassifierRules::parse("version 1\nother bogus X\n"), ConfigError);
  EXPECT_THROW(ClassifierRules::parse("version 1\nother log (unclosed\n"), ConfigError);
  EXPECT_THROW(ClassifierRules::parse("version 1\nregister profile sometimes\n"), ConfigError);
}

TEST(Classify, SignalsAndLogs) {
  const auto u = arm(kClean);
  EXPECT_EQ(classify_error(TestOutcome::crash("SIGSEGV"), "", u), ErrorClass::Addressing);
  EXPECT_EQ(classify_error(TestOutcome::crash("SIGBUS"), "", u), ErrorClass::Addressing);
  EXPECT_EQ(classify_error(TestOutcome::test_failed(1), "uemu: Invalid memory access at 0x0", u),
            ErrorClass::Addressing);
  EXPECT_EQ(classify_error(TestOutcome::crash("SIGFPE"), "", u), ErrorClass::Other);
  EXPECT_EQ(classify_error(TestOutcome::of(OutcomeKind::Timeout), "", u), ErrorClass::Other);
  EXPECT_EQ(classify_error(TestOutcome::of(OutcomeKind::AssembleError),
                           "a.s:3: error: registers must be different", u),
            ErrorClass::RegisterAllocation);
  EXPECT_EQ(classify_error(TestOutcome::test_failed(2), "", u), ErrorClass::Other);
}

TEST(Classify, ProfileOverwrite) {
  EXPECT_EQ(classify_error(TestOutcome::test_failed(1), "", arm(kClobber)), ErrorClass::RegisterAllocation);
  // the explicit non-register rules come first
  EXPECT_EQ(classify_error(TestOutcome::crash("SIGFPE"), "", arm(kClobber)), ErrorClass::Other);
  EXPECT_EQ(classify_error(TestOutcome::of(OutcomeKind::Timeout), "", arm(kClobber)), ErrorClass::Other);
  // addressing still beats a register flag
  EXPECT_EQ(classify_error(TestOutcome::crash("SIGSEGV"), "", arm(kClobber)), ErrorClass::Addressing);
}

TEST(Classify, SpecialRegistersExcluded) {
  const auto u = arm("f:\n\tmov ip, sp\n\tmov ip, r0\n\tstr ip, [sp]\n\tbx lr\n");
  EXPECT_EQ(classify_error(TestOutcome::test_failed(1), "", u), ErrorClass::Other);
}

TEST(Classify, LoadOverPendingMove) {
  // ground truth moved r2 into r0 before the load; the candidate loads into
  // r0 directly, overwriting the pending value
  const auto u = arm("f:\n\tmov r0, r2\n\tldr r0, [r3, r1, lsl #2]\n\tmul r0, r0, r1\n\tbx lr\n");
  EXPECT_EQ(classify_error(TestOutcome::test_failed(1), "", u), ErrorClass::RegisterAllocation);
}

TEST(Classify, CustomCascadeOrder) {
  const auto rules = ClassifierRules::parse("version t\nother log zap\naddressing log zap\n");
  EXPECT_EQ(classify_error(TestOutcome::test_failed(1), "ZAP", arm(kClean), rules), ErrorClass::Other);
  const auto empty = ClassifierRules::parse("version t\n");
  EXPECT_EQ(classify_error(TestOutcome::crash("SIGSEGV"), "", arm(kClean), empty), ErrorClass::Other);
}

TEST(Classify, TotalAndDeterministic) {
  const std::vector<TestOutcome> outcomes{
      TestOutcome::test_failed(3),          TestOutcome::crash("SIGSEGV"), TestOutcome::crash("SIGABRT"),
      TestOutcome::of(OutcomeKind::Timeout), TestOutcome::of(OutcomeKind::LinkError),
      TestOutcome::of(OutcomeKind::AssembleError)};
  const std::vector<std::string> logs{"", "segmentation fault", "\xff\xfe garbage", "register conflict"};
  for (const auto& text : {kClean, kClobber, std::string_view("\x01\x02 not asm ]]]\n")})
    for (const auto& o : outcomes)
      for (const auto& l : logs) {
        const auto a = classify_error(o, l, arm(text));
        EXPECT_EQ(a, classify_error(o, l, arm(text)));
      }
}

TEST(ClassifierFixtures, AtLeastFourPerClass) {
  std::map<std::string, int> per;
  for (const auto& d : fixture_dirs()) ++per[trim(read_file(d / "expected"))];
  EXPECT_GE(per["RegisterAllocation"], 4);
  EXPECT_GE(per["Addressing"], 4);
  EXPECT_GE(per["Other"], 4);
}

TEST(ClassifierFixtures, Labelled) {
  REQUIRE_TOOLCHAIN();
  const auto cfg = testsupport::test_config(5.0);
  for (const auto& d : fixture_dirs()) {
    TranspilePair p;
    p.pair_id = d.filename().string();
    p.test_source_path = d / "test.c";
    const auto text = read_file(d / "candidate.s");
    std::string logs;
    const auto outcome = run_functional(text, p, cfg, &logs);
    ASSERT_FALSE(outcome.passed()) << p.pair_id;
    const auto got = classify_error(outcome, logs, arm(text));
    EXPECT_EQ(to_string(got), trim(read_file(d / "expected"))) << p.pair_id << " " << outcome.describe();
  }
}
