#include <gtest/gtest.h>

#include <json.hpp>

#include "asmxlate/dataset.hpp"
#include "asmxlate/error.hpp"
#include "asmxlate/files.hpp"
#include "asmxlate/segmenter.hpp"
#include "support.hpp"

using namespace asmxlate;
namespace fs = std::filesystem;

namespace {

const TokenizerSpec& bytes() {
  static const auto s = TokenizerSpec::make({});
  return s;
}

// A label block costing exactly `cost` byte tokens (each line adds one for
// the newline): ".Ln:" is 5, each "x" line 2, an optional "xx" line 3.
std::string block(int n, std::size_t cost) {
  const std::string label = ".L" + std::to_string(n) + ":\n";
  std::size_t left = cost - (label.size());
  std::string out = label;
  if (left % 2) {
    out += "xx\n";
    left -= 3;
  }
  for (; left; left -= 2) out += "x\n";
  return out;
}

AssemblyUnit unit(const std::string& text, IsaName i = IsaName::ARMV5) {
  return parse_assembly(text, isa(i), "u");
}

std::vector<fs::path> assembly_fixtures() {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(testsupport::fixtures()))
    if (e.path().extension() == ".s") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

IsaName isa_of(const fs::path& p) {
  return p.parent_path().filename() == "x86_64" ? IsaName::X86_64 : IsaName::ARMV5;
}

Segment seg(std::string fn, std::size_t idx) {
  Segment s;
  s.function_name = std::move(fn);
  s.index = idx;
  return s;
}

}  // namespace

TEST(Segment, BlockHelperCosts) {
  const auto u = unit(block(1, 400));
  std::size_t total = 0;
  for (const auto& l : u.lines) total += line_cost(l, bytes());
  EXPECT_EQ(total, 400u);
}

TEST(Segment, GreedyPacking) {
  const auto u = unit(block(1, 400) + block(2, 400) + block(3, 400));
  const auto segs = segment_unit(u, bytes(), 1024);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].token_count, 800u);
  EXPECT_EQ(segs[1].token_count, 400u);
  EXPECT_EQ(segs[0].leading_label, ".L1");
  EXPECT_EQ(segs[0].trailing_label, ".L3");
  EXPECT_EQ(segs[1].leading_label, ".L3");
  EXPECT_EQ(segs[1].trailing_label, "<end>");
  EXPECT_FALSE(segs[0].budget_violation);
  EXPECT_FALSE(segs[1].budget_violation);
  // no detected function: the whole unit is one pseudo-function
  EXPECT_EQ(segs[0].function_name, "u");
  EXPECT_EQ(segs[1].index, 1u);
}

TEST(Segment, ExactFitStaysTogether) {
  const auto segs = segment_unit(unit(block(1, 512) + block(2, 512)), bytes(), 1024);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].token_count, 1024u);
}

TEST(Segment, OversizedBlockSplitAndFlagged) {
  const auto segs = segment_unit(unit(block(1, 1500)), bytes(), 1024);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_TRUE(segs[0].budget_violation);
  EXPECT_TRUE(segs[1].budget_violation);
  EXPECT_LE(segs[0].token_count, 1024u);
  EXPECT_EQ(segs[0].token_count + segs[1].token_count, 1500u);
  EXPECT_TRUE(segs[1].leading_label.empty());
}

TEST(Segment, OversizedBlockDoesNotSpoilNeighbours) {
  const auto segs = segment_unit(unit(block(1, 100) + block(2, 1500) + block(3, 100)), bytes(), 1024);
  ASSERT_EQ(segs.size(), 4u);
  EXPECT_FALSE(segs[0].budget_violation);
  EXPECT_TRUE(segs[1].budget_violation);
  EXPECT_TRUE(segs[2].budget_violation);
  EXPECT_FALSE(segs[3].budget_violation);
}

TEST(Segment, PerFunction) {
  const std::string text = "\t.type\tf, %function\n\t.type\tg, %function\nf:\n\tbx lr\n\t.size\tf, .-f\ng:\n\tbx lr\n";
  const auto segs = segment_unit(unit(text), bytes(), 1024);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].function_name, "f");
  EXPECT_EQ(segs[1].function_name, "g");
  EXPECT_EQ(segs[0].index, 0u);
  EXPECT_EQ(segs[1].index, 0u);
}

TEST(Segment, ZeroBudgetRejected) { EXPECT_THROW(segment_unit(unit("f:\n"), bytes(), 0), Error); }

TEST(Segment, ReconstructsEveryFixture) {
  const auto files = assembly_fixtures();
  ASSERT_GE(files.size(), 40u);
  for (const auto& path : files) {
    const auto u = parse_assembly(read_file(path), isa(isa_of(path)), path.stem().string());
    for (std::size_t budget : {16u, 64u, 1024u}) {
      const auto segs = segment_unit(u, default_tokenizer(), budget);
      // per function, concatenated segments give back the function's lines
      std::vector<FunctionSpan> spans = u.functions;
      if (spans.empty()) spans.push_back({u.source_id, 0, u.lines.size()});
      std::size_t k = 0;
      for (const auto& span : spans) {
        std::vector<Line> joined;
        std::size_t idx = 0;
        for (; k < segs.size() && segs[k].function_name == span.name; ++k, ++idx) {
          EXPECT_EQ(segs[k].index, idx);
          EXPECT_EQ(segs[k].first_line, span.begin + joined.size());
          EXPECT_TRUE(segs[k].budget_violation || segs[k].token_count <= budget) << path;
          std::size_t cost = 0;
          for (const auto& l : segs[k].lines) cost += line_cost(l, default_tokenizer());
          EXPECT_EQ(cost, segs[k].token_count);
          joined.insert(joined.end(), segs[k].lines.begin(), segs[k].lines.end());
        }
        const std::vector<Line> want(u.lines.begin() + static_cast<std::ptrdiff_t>(span.begin),
                                     u.lines.begin() + static_cast<std::ptrdiff_t>(span.end));
        EXPECT_EQ(joined, want) << path << " " << span.name << " budget " << budget;
      }
      EXPECT_EQ(k, segs.size()) << path;
    }
  }
}

TEST(Segment, Deterministic) {
  for (const auto& path : assembly_fixtures()) {
    const auto u = parse_assembly(read_file(path), isa(isa_of(path)));
    EXPECT_EQ(segments_to_ndjson(segment_unit(u, default_tokenizer(), 32), 32),
              segments_to_ndjson(segment_unit(u, default_tokenizer(), 32), 32));
  }
}

TEST(Segment, NdjsonRecords) {
  const auto segs = segment_unit(unit(block(1, 400) + block(2, 400) + block(3, 400)), bytes(), 1024);
  const auto text = segments_to_ndjson(segs, 1024);
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["schema"], "asmxlate.segment/1");
    EXPECT_EQ(j["budget"], 1024);
    ++n;
  }
  EXPECT_EQ(n, 2);
}

TEST(Align, PairsAndTail) {
  const auto a = align_pairs({seg("f", 0), seg("f", 1), seg("f", 2)}, {seg("f", 0), seg("f", 1)});
  ASSERT_EQ(a.pairs.size(), 2u);
  EXPECT_EQ(a.pairs[1].index, 1u);
  EXPECT_EQ(a.pairs[1].function_name, "f");
  ASSERT_EQ(a.unmatched.size(), 1u);
  EXPECT_TRUE(a.unmatched[0].in_source);
  EXPECT_EQ(a.unmatched[0].indices, std::vector<std::size_t>{2});
}

TEST(Align, ByFunctionName) {
  const auto a = align_pairs({seg("f", 0), seg("g", 0)}, {seg("g", 0), seg("h", 0), seg("h", 1)});
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(a.pairs[0].function_name, "g");
  ASSERT_EQ(a.unmatched.size(), 2u);
  EXPECT_EQ(a.unmatched[0].function_name, "f");
  EXPECT_TRUE(a.unmatched[0].in_source);
  EXPECT_EQ(a.unmatched[1].function_name, "h");
  EXPECT_FALSE(a.unmatched[1].in_source);
  EXPECT_EQ(a.unmatched[1].indices.size(), 2u);
}
