#include "asmxlate/segmenter.hpp"

#include "asmxlate/error.hpp"

#include <json.hpp>
#include <map>

namespace asmxlate {

namespace {

struct Block {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t cost = 0;
};

class Packer {
 public:
  Packer(const AssemblyUnit& unit, std::string name, std::size_t budget, std::vector<Segment>& out)
      : unit_(unit), name_(std::move(name)), budget_(budget), out_(out) {}

  void add_block(const Block& b, const std::vector<std::size_t>& costs) {
    if (b.cost > budget_) {
      flush();
      // oversized block: split between lines
      for (std::size_t i = b.begin; i < b.end; ++i) {
        if (open_ && cost_ + costs[i] > budget_) flush();
        append(i, costs[i]);
        violation_ = true;
      }
      flush();
      return;
    }
    if (open_ && cost_ + b.cost > budget_) flush();
    for (std::size_t i = b.begin; i < b.end; ++i) append(i, costs[i]);
  }

  void flush() {
    if (!open_) return;
    Segment s;
    s.function_name = name_;
    s.index = next_index_++;
    s.first_line = begin_;
    s.lines.assign(unit_.lines.begin() + static_cast<std::ptrdiff_t>(begin_),
                   unit_.lines.begin() + static_cast<std::ptrdiff_t>(end_));
    s.token_count = cost_;
    s.budget_violation = violation_;
    if (unit_.lines[begin_].kind == LineKind::Label) s.leading_label = unit_.lines[begin_].label;
    out_.push_back(std::move(s));
    open_ = false;
    violation_ = false;
    cost_ = 0;
  }

 private:
  void append(std::size_t line, std::size_t cost) {
    if (!open_) {
      open_ = true;
      begin_ = line;
    }
    end_ = line + 1;
    cost_ += cost;
  }

  const AssemblyUnit& unit_;
  std::string name_;
  std::size_t budget_;
  std::vector<Segment>& out_;
  bool open_ = false;
  bool violation_ = false;
  std::size_t begin_ = 0, end_ = 0, cost_ = 0, next_index_ = 0;
};

}  // namespace

std::size_t line_cost(const Line& line, const TokenizerSpec& spec) {
  return count_tokens(line.text_normalized, spec) + 1;
}

std::vector<Segment> segment_unit(const AssemblyUnit& unit, const TokenizerSpec& spec, std::size_t budget) {
  if (budget == 0) throw Error("segment_unit: budget must be positive");
  std::vector<FunctionSpan> spans = unit.functions;
  if (spans.empty() && !unit.lines.empty()) spans.push_back({unit.source_id, 0, unit.lines.size()});

  std::vector<std::size_t> costs(unit.lines.size());
  for (std::size_t i = 0; i < unit.lines.size(); ++i) costs[i] = line_cost(unit.lines[i], spec);

  std::vector<Segment> out;
  for (const auto& span : spans) {
    const std::size_t first_of_fn = out.size();
    Packer packer(unit, span.name, budget, out);
    Block block{span.begin, span.begin, 0};
    for (std::size_t i = span.begin; i < span.end; ++i) {
      if (unit.lines[i].kind == LineKind::Label && i != block.begin) {
        packer.add_block(block, costs);
        block = {i, i, 0};
      }
      block.end = i + 1;
      block.cost += costs[i];
    }
    if (block.end > block.begin) packer.add_block(block, costs);
    packer.flush();
    for (std::size_t k = first_of_fn; k < out.size(); ++k) {
      out[k].trailing_label = k + 1 < out.size() && !out[k + 1].leading_label.empty()
                                  ? out[k + 1].leading_label
                                  : (k + 1 < out.size() ? "" : "<end>");
    }
  }
  return out;
}

SegmentAlignment align_pairs(const std::vector<Segment>& source, const std::vector<Segment>& target) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Segment*>> src, tgt;
  for (const auto& s : source) {
    if (!src.count(s.function_name) && !tgt.count(s.function_name)) order.push_back(s.function_name);
    src[s.function_name].push_back(&s);
  }
  for (const auto& s : target) {
    if (!src.count(s.function_name) && !tgt.count(s.function_name)) order.push_back(s.function_name);
    tgt[s.function_name].push_back(&s);
  }
  SegmentAlignment out;
  for (const auto& name : order) {
    const auto& a = src[name];
    const auto& b = tgt[name];
    const std::size_t common = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < common; ++i) out.pairs.push_back({*a[i], *b[i], name, i});
    if (a.size() != b.size()) {
      UnmatchedTail tail{name, a.size() > b.size(), {}};
      for (std::size_t i = common; i < std::max(a.size(), b.size()); ++i) tail.indices.push_back(i);
      out.unmatched.push_back(std::move(tail));
    }
  }
  return out;
}

std::string segments_to_ndjson(const std::vector<Segment>& segments, std::size_t budget) {
  std::string out;
  for (const auto& s : segments) {
    nlohmann::ordered_json j;
    j["schema"] = "asmxlate.segment/1";
    j["function"] = s.function_name;
    j["index"] = s.index;
    j["first_line"] = s.first_line + 1;
    j["line_count"] = s.lines.size();
    j["token_count"] = s.token_count;
    j["budget"] = budget;
    j["leading_label"] = s.leading_label;
    j["trailing_label"] = s.trailing_label;
    j["budget_violation"] = s.budget_violation;
    std::string text;
    for (const auto& l : s.lines) text += l.raw + "\n";
    j["text"] = text;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace asmxlate
