#include <algorithm>
#include <mutex>
#include <regex>
#include <sstream>

#include "asmxlate/eval.hpp"
#include "asmxlate/files.hpp"
#include "asmxlate/register_profile.hpp"

namespace asmxlate {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RuleSource source_from_string(const std::string& s) {
  if (s == "signal") return RuleSource::Signal;
  if (s == "log") return RuleSource::Log;
  if (s == "outcome") return RuleSource::Outcome;
  if (s == "profile") return RuleSource::Profile;
  throw ConfigError("classifier", "unknown rule source '" + s + "'");
}

bool profile_flags(const AssemblyUnit& unit, const ClassifierRule& rule) {
  const RegisterProfile prof = static_register_profile(unit);
  for (const auto& [reg, usage] : prof.registers) {
    if (usage.overwrite_without_read_lines.empty()) continue;
    if (std::find(rule.exclude.begin(), rule.exclude.end(), reg) != rule.exclude.end()) continue;
    return true;
  }
  return false;
}

}  // namespace

ClassifierRules ClassifierRules::parse(std::string_view text) {
  ClassifierRules out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream words(line);
    std::string first, second;
    words >> first;
    if (first == "version") {
      words >> out.version;
      continue;
    }
    if (!(words >> second)) throw ConfigError("classifier", "line " + std::to_string(no) + ": missing source");
    ClassifierRule rule;
    rule.cls = error_class_from_string(first);
    rule.source = source_from_string(second);
    std::string rest;
    std::getline(words, rest);
    rest = trim(rest);
    if (rule.source == RuleSource::Profile) {
      std::istringstream parts(rest);
      std::string p;
      parts >> rule.pattern;
      while (parts >> p) {
        if (p.rfind("exclude=", 0) != 0) throw ConfigError("classifier", "line " + std::to_string(no) + ": bad option " + p);
        std::istringstream regs(p.substr(8));
        std::string r;
        while (std::getline(regs, r, ',')) {
          if (!r.empty()) rule.exclude.push_back(r);
        }
      }
      if (rule.pattern != "overwrite") {
        throw ConfigError("classifier", "line " + std::to_string(no) + ": unknown profile check");
      }
    } else {
      rule.pattern = rest;
      if (rule.pattern.empty()) throw ConfigError("classifier", "line " + std::to_string(no) + ": empty pattern");
      if (rule.source == RuleSource::Log) {
        try {
          std::regex check(rule.pattern, std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
          throw ConfigError("classifier", "line " + std::to_string(no) + ": " + e.what());
        }
      }
      if (rule.source == RuleSource::Outcome) outcome_kind_from_string(rule.pattern);
    }
    out.rules.push_back(std::move(rule));
  }
  if (out.version.empty()) throw ConfigError("classifier", "missing version line");
  return out;
}

ClassifierRules ClassifierRules::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const ClassifierRules& ClassifierRules::builtin() {
  static const ClassifierRules rules = load(data_dir() / "classifier" / "rules-v1.txt");
  return rules;
}

ErrorClass classify_error(const TestOutcome& outcome, std::string_view logs, const AssemblyUnit& candidate,
                          const ClassifierRules& rules) {
  const std::string log_text(logs);
  for (const auto& rule : rules.rules) {
    bool hit = false;
    switch (rule.source) {
      case RuleSource::Signal:
        hit = outcome.kind == OutcomeKind::RuntimeCrash && outcome.signal == rule.pattern;
        break;
      case RuleSource::Outcome:
        hit = to_string(outcome.kind) == rule.pattern;
        break;
      case RuleSource::Log:
        hit = std::regex_search(log_text, std::regex(rule.pattern, std::regex::ECMAScript | std::regex::icase));
        break;
      case RuleSource::Profile:
        hit = profile_flags(candidate, rule);
        break;
    }
    if (hit) return rule.cls;
  }
  return ErrorClass::Other;
}

ErrorClass classify_error(const TestOutcome& outcome, std::string_view logs, const AssemblyUnit& candidate) {
  return classify_error(outcome, logs, candidate, ClassifierRules::builtin());
}

}  // namespace asmxlate
