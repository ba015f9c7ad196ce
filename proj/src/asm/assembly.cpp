#include "asmxlate/assembly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "asmxlate/error.hpp"

namespace asmxlate {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

bool is_symbol_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$';
}

bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$' ||
         c == '@';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Collapses whitespace runs outside string literals to one space and trims.
std::string collapse(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_string = false;
  bool pending_space = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < s.size()) {
        out += s[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
    if (c == '"') in_string = true;
  }
  return out;
}

/// Offset where a comment starts, honoring string literals; npos if none.
std::size_t comment_start(std::string_view line, const std::vector<std::string>& leaders) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      continue;
    }
    for (const auto& leader : leaders) {
      if (line.substr(i, leader.size()) == leader) return i;
    }
  }
  return std::string_view::npos;
}

/// Splits on `sep` at bracket depth zero and outside string literals.
std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  bool in_string = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    switch (c) {
      case '"': in_string = true; break;
      case '(': case '[': case '{': ++depth; break;
      case ')': case ']': case '}': --depth; break;
      default:
        if (c == sep && depth == 0) {
          parts.push_back(trim(s.substr(start, i - start)));
          start = i + 1;
        }
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    base = 2;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  std::uint64_t magnitude = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), magnitude, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  const auto value = static_cast<std::int64_t>(magnitude);
  return negative ? static_cast<std::int64_t>(0ULL - magnitude) : value;
}

bool is_symbol(std::string_view s) {
  if (s.empty() || !is_symbol_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), is_symbol_char);
}

bool is_float_literal(std::string_view s) {
  if (s.empty()) return false;
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != '-' && c != '+' && c != 'e' && c != 'E') {
      return false;
    }
  }
  return digit;
}

std::string strip_reloc_suffix(std::string_view sym) {
  const auto at = sym.find('@');
  return std::string(at == std::string_view::npos ? sym : sym.substr(0, at));
}

/// Symbols appearing in an expression such as `.Lfunc_end0-add2` or
/// `%hi(.L.str)`; registers and relocation operator names excluded.
void collect_symbols(std::string_view expr, const Isa& isa, std::set<std::string>& out) {
  std::size_t i = 0;
  while (i < expr.size()) {
    const char c = expr[i];
    if (c == '%') {
      // relocation operator: %hi, %lo, %pcrel_lo ...
      ++i;
      while (i < expr.size() && is_symbol_char(expr[i])) ++i;
    } else if (c == ':') {
      // AArch64 :lo12: style operator
      const auto close = expr.find(':', i + 1);
      i = close == std::string_view::npos ? i + 1 : close + 1;
    } else if (is_symbol_start(c)) {
      std::size_t j = i;
      while (j < expr.size() && is_symbol_char(expr[j])) ++j;
      const std::string_view sym = expr.substr(i, j - i);
      if (sym != "." && !isa.is_register(sym)) out.insert(strip_reloc_suffix(sym));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < expr.size() && std::isalnum(static_cast<unsigned char>(expr[i]))) ++i;
    } else {
      ++i;
    }
  }
}

bool is_arm_shift(std::string_view word) {
  static const std::set<std::string, std::less<>> shifts = {
      "lsl", "lsr", "asr", "ror", "rrx", "msl", "uxtb", "uxth", "uxtw", "uxtx",
      "sxtb", "sxth", "sxtw", "sxtx"};
  return shifts.count(lower(word)) != 0;
}

bool is_arm_condition(std::string_view word) {
  static const std::set<std::string, std::less<>> conds = {
      "eq", "ne", "cs", "hs", "cc", "lo", "mi", "pl", "vs",
      "vc", "hi", "ls", "ge", "lt", "gt", "le", "al", "nv"};
  return conds.count(word) != 0;
}

class OperandParser {
 public:
  OperandParser(const Isa& isa, std::set<std::string>& refs, std::size_t& fallbacks)
      : isa_(isa), refs_(refs), fallbacks_(fallbacks) {}

  Operand parse(std::string_view text) {
    Operand op;
    op.text = std::string(text);
    switch (isa_.syntax_family()) {
      case SyntaxFamily::ATT: op.value = att(text); break;
      case SyntaxFamily::ARM_UAL: op.value = arm(text); break;
      case SyntaxFamily::RISCV_STD: op.value = riscv(text); break;
    }
    return op;
  }

 private:
  OperandValue fallback() {
    ++fallbacks_;
    return OtherOperand{};
  }

  OperandValue other_with_refs(std::string_view expr) {
    collect_symbols(expr, isa_, refs_);
    return OtherOperand{};
  }

  OperandValue label(std::string_view sym) {
    std::string name = strip_reloc_suffix(sym);
    refs_.insert(name);
    return LabelRefOperand{std::move(name)};
  }

  /// Integer, symbol or symbol expression outside any addressing syntax.
  std::optional<OperandValue> plain(std::string_view t) {
    if (auto v = parse_int(t)) return ImmediateOperand{*v};
    if (isa_.is_register(t)) return RegisterOperand{std::string(t)};
    if (is_symbol(t)) return label(t);
    if (is_symbol_start(t.front()) || t.front() == '(' || t.front() == '-') {
      return other_with_refs(t);
    }
    return std::nullopt;
  }

  std::optional<std::string> att_register(std::string_view t) {
    t = trim(t);
    if (t.size() < 2 || t.front() != '%') return std::nullopt;
    t.remove_prefix(1);
    if (!isa_.is_register(t)) return std::nullopt;
    return std::string(t);
  }

  OperandValue att(std::string_view t) {
    if (t.empty()) return fallback();
    if (t.front() == '%') {
      if (t.find(':') != std::string_view::npos) return other_with_refs(t);
      if (auto reg = att_register(t)) return RegisterOperand{*reg};
      return fallback();
    }
    if (t.front() == '$') {
      std::string_view body = t.substr(1);
      if (auto v = parse_int(body)) return ImmediateOperand{*v};
      if (is_symbol(body)) return label(body);
      if (!body.empty()) return other_with_refs(body);
      return fallback();
    }
    if (t.front() == '*') return other_with_refs(t.substr(1));
    if (t.back() == ')') {
      const auto open = t.rfind('(');
      if (open == std::string_view::npos) return fallback();
      MemoryOperand mem;
      const std::string_view disp = trim(t.substr(0, open));
      const auto parts = split_top_level(t.substr(open + 1, t.size() - open - 2), ',');
      if (parts.size() > 3) return fallback();
      if (!parts[0].empty()) {
        auto base = att_register(parts[0]);
        if (!base) return fallback();
        mem.base = *base;
      }
      if (parts.size() >= 2 && !parts[1].empty()) {
        auto index = att_register(parts[1]);
        if (!index) return fallback();
        mem.index = *index;
      }
      if (parts.size() == 3 && !parts[2].empty()) mem.scale_or_shift = std::string(parts[2]);
      if (!disp.empty()) {
        if (auto v = parse_int(disp)) {
          mem.offset = *v;
        } else {
          mem.symbol = std::string(disp);
          collect_symbols(disp, isa_, refs_);
        }
      }
      return mem;
    }
    if (auto v = plain(t)) return *v;
    return fallback();
  }

  std::optional<std::string> arm_register(std::string_view t) {
    t = trim(t);
    if (!isa_.is_register(t)) return std::nullopt;
    return std::string(t);
  }

  OperandValue arm(std::string_view t) {
    if (t.empty()) return fallback();
    if (t.back() == '!' && arm_register(t.substr(0, t.size() - 1))) {
      return RegisterOperand{std::string(trim(t.substr(0, t.size() - 1)))};
    }
    if (auto reg = arm_register(t)) return RegisterOperand{*reg};
    if (t.front() == '#') {
      std::string_view body = trim(t.substr(1));
      if (auto v = parse_int(body)) return ImmediateOperand{*v};
      if (is_float_literal(body)) return OtherOperand{};
      if (!body.empty()) return other_with_refs(body);
      return fallback();
    }
    if (t.front() == '[') {
      std::string_view body = t;
      if (body.back() == '!') body = trim(body.substr(0, body.size() - 1));
      if (body.back() != ']') return fallback();
      const auto parts = split_top_level(body.substr(1, body.size() - 2), ',');
      MemoryOperand mem;
      auto base = arm_register(parts[0]);
      if (!base) return fallback();
      mem.base = *base;
      for (std::size_t i = 1; i < parts.size(); ++i) {
        std::string_view p = parts[i];
        if (p.empty()) return fallback();
        if (p.front() == '#') {
          std::string_view body_imm = trim(p.substr(1));
          if (auto v = parse_int(body_imm)) {
            mem.offset = *v;
          } else {
            mem.symbol = std::string(body_imm);
            collect_symbols(body_imm, isa_, refs_);
          }
        } else if (p.front() == ':') {
          mem.symbol = std::string(p);
          collect_symbols(p, isa_, refs_);
        } else if (auto idx = arm_register(p.front() == '-' || p.front() == '+' ? p.substr(1) : p)) {
          mem.index = *idx;
        } else if (is_arm_shift(p.substr(0, p.find(' ')))) {
          mem.scale_or_shift = std::string(p);
        } else {
          return fallback();
        }
      }
      return mem;
    }
    if (t.front() == '{') {
      if (t.back() != '}') return fallback();
      RegisterListOperand list;
      for (auto entry : split_top_level(t.substr(1, t.size() - 2), ',')) {
        const auto dash = entry.find('-');
        if (dash != std::string_view::npos) {
          auto lo = arm_register(entry.substr(0, dash));
          auto hi = arm_register(entry.substr(dash + 1));
          if (!lo || !hi) return fallback();
          list.registers.push_back(*lo);
          list.registers.push_back(*hi);
        } else if (auto reg = arm_register(entry)) {
          list.registers.push_back(*reg);
        } else {
          return fallback();
        }
      }
      return list;
    }
    if (t.front() == '=' || t.front() == ':') return other_with_refs(t.substr(1));
    const std::string_view first_word = t.substr(0, t.find(' '));
    if (is_arm_shift(first_word)) return OtherOperand{};
    if (isa_.name() == IsaName::ARMV8 && is_arm_condition(t)) return OtherOperand{};
    if (auto v = plain(t)) return *v;
    return fallback();
  }

  OperandValue riscv(std::string_view t) {
    if (t.empty()) return fallback();
    if (isa_.is_register(t)) return RegisterOperand{std::string(t)};
    if (t.back() == ')') {
      // off(reg) or %lo(sym)(reg); a bare %hi(sym) also ends in ')'.
      const auto open = t.rfind('(');
      const std::string_view inner = trim(t.substr(open + 1, t.size() - open - 2));
      const std::string_view disp = trim(t.substr(0, open));
      if (isa_.is_register(inner)) {
        MemoryOperand mem;
        mem.base = std::string(inner);
        if (!disp.empty()) {
          if (auto v = parse_int(disp)) {
            mem.offset = *v;
          } else {
            mem.symbol = std::string(disp);
            collect_symbols(disp, isa_, refs_);
          }
        }
        return mem;
      }
      if (t.front() == '%') return other_with_refs(t);
      return fallback();
    }
    if (t.front() == '%') return other_with_refs(t);
    if (auto v = plain(t)) return *v;
    return fallback();
  }

  const Isa& isa_;
  std::set<std::string>& refs_;
  std::size_t& fallbacks_;
};

bool is_x86_prefix(std::string_view m) {
  static const std::set<std::string, std::less<>> prefixes = {
      "rep", "repe", "repz", "repne", "repnz", "lock", "data16", "notrack", "bnd"};
  return prefixes.count(m) != 0;
}

Instruction parse_instruction(std::string_view code, const Isa& isa, std::size_t& fallbacks) {
  Instruction ins;
  auto split_word = [](std::string_view s) {
    const auto sp = s.find(' ');
    return sp == std::string_view::npos
               ? std::pair{s, std::string_view{}}
               : std::pair{s.substr(0, sp), trim(s.substr(sp + 1))};
  };
  auto [mnemonic, rest] = split_word(code);
  ins.mnemonic = lower(mnemonic);
  if (isa.syntax_family() == SyntaxFamily::ATT && is_x86_prefix(ins.mnemonic) && !rest.empty()) {
    auto [next, tail] = split_word(rest);
    ins.mnemonic += " " + lower(next);
    rest = tail;
  }
  if (rest.empty()) return ins;
  OperandParser parser(isa, ins.label_refs, fallbacks);
  for (auto part : split_top_level(rest, ',')) ins.operands.push_back(parser.parse(part));
  return ins;
}

/// Label definition at the start of `code`: returns the name and the text
/// after the colon.
std::optional<std::pair<std::string, std::string_view>> match_label(std::string_view code) {
  std::size_t i = 0;
  if (code.empty()) return std::nullopt;
  if (is_symbol_start(code[0])) {
    while (i < code.size() && is_symbol_char(code[i])) ++i;
  } else if (std::isdigit(static_cast<unsigned char>(code[0]))) {
    while (i < code.size() && std::isdigit(static_cast<unsigned char>(code[i]))) ++i;
  } else if (code[0] == '"') {
    i = code.find('"', 1);
    if (i == std::string_view::npos) return std::nullopt;
    ++i;
  } else {
    return std::nullopt;
  }
  if (i >= code.size() || code[i] != ':') return std::nullopt;
  return std::pair{std::string(code.substr(0, i)), trim(code.substr(i + 1))};
}

std::vector<std::string_view> directive_args(std::string_view text) {
  const auto sp = text.find(' ');
  if (sp == std::string_view::npos) return {};
  return split_top_level(text.substr(sp + 1), ',');
}

void find_functions(AssemblyUnit& unit) {
  std::set<std::string> typed, global;
  for (const auto& line : unit.lines) {
    if (line.kind != LineKind::Directive) continue;
    if (line.directive == ".type") {
      const auto args = directive_args(line.text_normalized);
      if (args.size() >= 2) {
        const std::string kind = lower(args[1]);
        if (kind == "@function" || kind == "%function" || kind == "\"function\"" ||
            kind == "stt_func") {
          typed.insert(std::string(args[0]));
        }
      }
    } else if (line.directive == ".globl" || line.directive == ".global") {
      for (auto arg : directive_args(line.text_normalized)) global.insert(std::string(arg));
    }
  }
  auto is_function = [&](const std::string& label) {
    if (!typed.empty()) return typed.count(label) != 0;
    if (!global.empty()) return global.count(label) != 0;
    return !label.empty() && label[0] != '.' && !std::isdigit(static_cast<unsigned char>(label[0]));
  };

  std::vector<std::pair<std::string, std::size_t>> starts;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < unit.lines.size(); ++i) {
    const auto& line = unit.lines[i];
    if (line.kind == LineKind::Label && is_function(line.label) && seen.insert(line.label).second) {
      starts.emplace_back(line.label, i);
    }
  }
  for (std::size_t f = 0; f < starts.size(); ++f) {
    const auto& [name, begin] = starts[f];
    std::size_t end = f + 1 < starts.size() ? starts[f + 1].second : unit.lines.size();
    for (std::size_t i = begin + 1; i < end; ++i) {
      const auto& line = unit.lines[i];
      if (line.kind == LineKind::Directive && line.directive == ".size") {
        const auto args = directive_args(line.text_normalized);
        if (!args.empty() && args[0] == name) {
          end = i + 1;
          break;
        }
      }
    }
    unit.functions.push_back({name, begin, end});
  }
}

}  // namespace

std::string Instruction::render() const {
  std::string out = mnemonic;
  for (std::size_t i = 0; i < operands.size(); ++i) {
    out += i == 0 ? " " : ", ";
    out += operands[i].text;
  }
  return out;
}

std::string_view to_string(LineKind kind) {
  switch (kind) {
    case LineKind::Instruction: return "instruction";
    case LineKind::Label: return "label";
    case LineKind::Directive: return "directive";
    case LineKind::Comment: return "comment";
    case LineKind::Blank: return "blank";
  }
  return "unknown";
}

std::string_view to_string(NormalizationPolicy policy) {
  return policy == NormalizationPolicy::Raw ? "raw" : "canonical";
}

NormalizationPolicy policy_from_string(std::string_view text) {
  if (text == "canonical") return NormalizationPolicy::Canonical;
  if (text == "raw") return NormalizationPolicy::Raw;
  throw Error("unknown normalization policy '" + std::string(text) + "'");
}

std::string sanitize_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n;) {
    const unsigned char c = s[i];
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = 2;
    } else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
    } else if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
    }
    bool valid = len != 0 && i + len <= n;
    for (std::size_t k = 1; valid && k < len; ++k) valid = (s[i + k] & 0xC0) == 0x80;
    if (valid && len == 3) {
      valid = !(c == 0xE0 && s[i + 1] < 0xA0) && !(c == 0xED && s[i + 1] >= 0xA0);
    } else if (valid && len == 4) {
      valid = !(c == 0xF0 && s[i + 1] < 0x90) && !(c == 0xF4 && s[i + 1] >= 0x90);
    }
    if (valid) {
      out.append(text.substr(i, len));
      i += len;
    } else {
      out += "\xEF\xBF\xBD";
      ++i;
    }
  }
  return out;
}

AssemblyUnit parse_assembly(std::string_view input, const Isa& isa, std::string source_id) {
  AssemblyUnit unit;
  unit.isa = isa.name();
  unit.source_id = std::move(source_id);
  unit.raw_text = sanitize_utf8(input);
  std::string_view text = unit.raw_text;

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    Line line;
    line.raw = std::string(raw);
    const auto cstart = comment_start(raw, isa.comment_leaders());
    const std::string code =
        collapse(cstart == std::string_view::npos ? raw : raw.substr(0, cstart));
    if (code.empty()) {
      if (cstart != std::string_view::npos) {
        line.kind = LineKind::Comment;
        line.text_normalized = collapse(raw.substr(cstart));
      } else {
        line.kind = LineKind::Blank;
      }
    } else if (auto label = match_label(code)) {
      line.kind = LineKind::Label;
      line.label = label->first;
      line.text_normalized = code;
      if (!label->second.empty()) ++unit.fallback_count;  // statement after a label
    } else if (code.front() == '.') {
      line.kind = LineKind::Directive;
      line.directive = lower(code.substr(0, code.find(' ')));
      line.text_normalized = code;
    } else {
      line.kind = LineKind::Instruction;
      line.instruction = parse_instruction(code, isa, unit.fallback_count);
      line.text_normalized = code;
    }
    unit.lines.push_back(std::move(line));
  }
  find_functions(unit);
  return unit;
}

std::string normalize(const AssemblyUnit& unit, NormalizationPolicy policy) {
  std::string out;
  if (policy == NormalizationPolicy::Raw) {
    for (const auto& line : unit.lines) {
      out += line.raw;
      out += '\n';
    }
    return out;
  }
  for (const auto& line : unit.lines) {
    if (line.kind == LineKind::Blank || line.kind == LineKind::Comment) continue;
    if (line.kind == LineKind::Directive && (line.directive == ".file" || line.directive == ".ident")) {
      continue;
    }
    out += line.text_normalized;
    out += '\n';
  }
  return out;
}

std::string normalize_text(std::string_view text, const Isa& isa, NormalizationPolicy policy) {
  return normalize(parse_assembly(text, isa), policy);
}

}  // namespace asmxlate
