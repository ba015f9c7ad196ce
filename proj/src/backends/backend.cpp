#include "asmxlate/backend.hpp"

namespace asmxlate {

ContextOverflow::ContextOverflow(std::size_t tokens, std::size_t window)
    : BackendError("source has " + std::to_string(tokens) + " tokens, context window is " +
                   std::to_string(window)),
      tokens_(tokens),
      window_(window) {}

UnsupportedInstruction::UnsupportedInstruction(std::string mnemonic, std::size_t line)
    : BackendError("unsupported instruction '" + mnemonic + "' at line " + std::to_string(line)),
      mnemonic_(std::move(mnemonic)),
      line_(line) {}

void TranspileRequest::validate() const {
  params.validate();
  if (source_isa != IsaName::X86_64) throw Error("transpile: source ISA must be x86_64");
  if (target_isa == IsaName::X86_64) throw Error("transpile: target ISA must be a RISC ISA");
}

TranspileResponse Backend::transpile(const TranspileRequest& req) {
  req.validate();
  const auto start = std::chrono::steady_clock::now();
  TranspileResponse resp;
  resp.candidates = transpile_impl(req);
  resp.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  resp.backend_id = id();
  if (resp.candidates.empty()) throw BackendRefused(id() + ": no candidates returned");
  if (resp.candidates.size() > static_cast<std::size_t>(req.params.num_beams)) {
    resp.candidates.resize(static_cast<std::size_t>(req.params.num_beams));
  }
  return resp;
}

std::vector<Candidate> IdentityBackend::transpile_impl(const TranspileRequest& req) {
  return {Candidate{req.source_text, std::nullopt}};
}

std::vector<Candidate> ReplayBackend::transpile_impl(const TranspileRequest& req) {
  const auto it = by_pair_id_.find(req.pair_id);
  if (it == by_pair_id_.end()) throw BackendRefused("replay: no ground truth for '" + req.pair_id + "'");
  return {Candidate{it->second, std::nullopt}};
}

std::vector<Candidate> RuleBackend::transpile_impl(const TranspileRequest& req) {
  if (req.target_isa != IsaName::ARMV5) {
    throw BackendRefused("rule: only armv5 output is supported, got " +
                         std::string(to_string(req.target_isa)));
  }
  const AssemblyUnit unit = parse_assembly(req.source_text, isa(IsaName::X86_64), req.pair_id);
  return {Candidate{rule_translate(unit), std::nullopt}};
}

}  // namespace asmxlate
