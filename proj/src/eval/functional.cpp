#include <regex>

#include "asmxlate/eval.hpp"
#include "asmxlate/files.hpp"
#include "asmxlate/process.hpp"

namespace asmxlate {

namespace fs = std::filesystem;

namespace {

class Step {
 public:
  Step(const ToolchainConfig& cfg, const fs::path& work, std::string* logs)
      : cfg_(cfg), work_(work.string()), logs_(logs) {}

  CommandResult run(const std::string& tmpl, std::vector<std::string> inputs, const std::string& output,
                    double timeout) {
    TemplateVars vars;
    vars.inputs = std::move(inputs);
    vars.output = output;
    vars.opt = cfg_.optimization_level;
    vars.config_dir = cfg_.base_dir;
    const auto argv = expand_command(tmpl, vars);
    RunOptions opts;
    opts.timeout_seconds = timeout;
    opts.cwd = work_;
    CommandResult r = run_command(argv, opts);
    if (logs_ != nullptr) {
      std::string entry = "$ " + join_command(argv) + "\n" + r.out + r.err;
      if (r.timed_out) entry += "[timed out]\n";
      else if (r.signal) entry += "[killed by " + signal_name(*r.signal) + "]\n";
      else if (r.exit_code != 0) entry += "[exit " + std::to_string(r.exit_code) + "]\n";
      *logs_ += scrub(entry);
    }
    return r;
  }

  std::string scrub(std::string text) const {
    for (auto pos = text.find(work_); pos != std::string::npos; pos = text.find(work_, pos)) {
      text.replace(pos, work_.size(), "<work>");
    }
    return text;
  }

 private:
  const ToolchainConfig& cfg_;
  std::string work_;
  std::string* logs_;
};

std::string describe_failure(const CommandResult& r) {
  if (r.timed_out) return "timed out";
  if (r.signal) return "killed by " + signal_name(*r.signal);
  std::string s = "exit " + std::to_string(r.exit_code);
  if (!r.err.empty()) s += ": " + r.err.substr(0, 2000);
  return s;
}

}  // namespace

TestOutcome run_functional(std::string_view candidate_text, const TranspilePair& pair,
                           const ToolchainConfig& cfg, std::string* logs) {
  if (!pair.test_source_path) throw InfrastructureError(pair.pair_id + ": pair has no test program");
  const IsaToolchain& tc = cfg.require_run(pair.target_isa);
  cfg.require_compile(pair.target_isa);

  TempDir work("asmxlate-run");
  const fs::path dir = work.path();
  Step step(cfg, dir, logs);

  // harness side: test driver and runtime support; failures here are ours
  std::vector<std::string> objects;
  std::vector<fs::path> harness_sources{*pair.test_source_path};
  for (const auto& s : tc.support_sources) harness_sources.emplace_back(expand_path(s, cfg.base_dir));
  for (std::size_t i = 0; i < harness_sources.size(); ++i) {
    const fs::path& src = harness_sources[i];
    const std::string stem = "h" + std::to_string(i) + "_" + src.stem().string();
    const std::string asm_path = (dir / (stem + ".s")).string();
    const std::string obj_path = (dir / (stem + ".o")).string();
    auto r = step.run(tc.compile, {fs::absolute(src).string()}, asm_path, cfg.timeout_compile);
    if (!r.ok()) {
      throw InfrastructureError(pair.pair_id + ": cannot compile harness source " + src.string() + " (" +
                                describe_failure(r) + ")");
    }
    r = step.run(tc.assemble, {asm_path}, obj_path, cfg.timeout_compile);
    if (!r.ok()) {
      throw InfrastructureError(pair.pair_id + ": cannot assemble harness source " + src.string() + " (" +
                                describe_failure(r) + ")");
    }
    objects.push_back(obj_path);
  }

  const std::string cand_s = (dir / "candidate.s").string();
  const std::string cand_o = (dir / "candidate.o").string();
  const std::string binary = (dir / "candidate.elf").string();
  std::string text(candidate_text);
  if (!text.empty() && text.back() != '\n') text += '\n';
  write_file_atomic(cand_s, text);

  if (!step.run(tc.assemble, {cand_s}, cand_o, cfg.timeout_compile).ok()) {
    return TestOutcome::of(OutcomeKind::AssembleError);
  }
  objects.insert(objects.begin(), cand_o);
  if (!step.run(tc.link, objects, binary, cfg.timeout_compile).ok()) {
    return TestOutcome::of(OutcomeKind::LinkError);
  }

  const CommandResult r = step.run(tc.emulate, {binary}, "", cfg.timeout_run);
  if (r.timed_out) return TestOutcome::of(OutcomeKind::Timeout);
  if (r.signal) return TestOutcome::crash(signal_name(*r.signal));
  // qemu-user reports guest faults in text and exits with 128+signal
  static const std::regex uncaught(R"(uncaught target signal (\d+))");
  std::smatch m;
  if (std::regex_search(r.err, m, uncaught)) return TestOutcome::crash(signal_name(std::stoi(m[1].str())));
  if (r.exit_code != 0) return TestOutcome::test_failed(r.exit_code);
  return TestOutcome::pass();
}

}  // namespace asmxlate
