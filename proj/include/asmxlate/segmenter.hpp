#pragma once

#include <string>
#include <vector>

#include "asmxlate/assembly.hpp"
#include "asmxlate/tokenizer.hpp"

namespace asmxlate {

inline constexpr std::size_t kDefaultSegmentBudget = 1024;

struct Segment {
  std::string function_name;
  std::size_t index = 0;
  std::vector<Line> lines;
  std::size_t first_line = 0;  // 0-based position in the unit
  std::size_t token_count = 0;
  std::string leading_label;   // empty when the segment does not start at a label
  std::string trailing_label;  // label opening the next segment, or "<end>"
  /// A single block exceeded the budget and was split between lines.
  bool budget_violation = false;
};

/// Tokens of the normalized text plus one for the line break.
std::size_t line_cost(const Line& line, const TokenizerSpec& spec);

/// Greedy packing of label-delimited blocks into segments of at most
/// `budget` tokens, per function. Units without detected functions are
/// treated as one function named after the unit's source id.
std::vector<Segment> segment_unit(const AssemblyUnit& unit, const TokenizerSpec& spec,
                                  std::size_t budget = kDefaultSegmentBudget);

struct AlignedSegmentPair {
  Segment source;
  Segment target;
  std::string function_name;
  std::size_t index = 0;
};

struct UnmatchedTail {
  std::string function_name;
  bool in_source = true;  // which side has the extra segments
  std::vector<std::size_t> indices;
};

struct SegmentAlignment {
  std::vector<AlignedSegmentPair> pairs;
  std::vector<UnmatchedTail> unmatched;
};

/// Pairs segments by (function_name, index); extra segments on either side
/// are reported, not dropped silently.
SegmentAlignment align_pairs(const std::vector<Segment>& source, const std::vector<Segment>& target);

/// NDJSON listing, one record per segment.
std::string segments_to_ndjson(const std::vector<Segment>& segments, std::size_t budget);

}  // namespace asmxlate
