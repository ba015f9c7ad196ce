#include "asmxlate/bench.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "asmxlate/process.hpp"

namespace asmxlate {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

double geomean(const std::vector<double>& xs) {
  if (xs.empty()) throw Error("geomean: empty list");
  double acc = 0.0;
  for (double x : xs) {
    if (!(x > 0.0)) throw Error("geomean: non-positive element");
    acc += std::log(x);
  }
  return std::exp(acc / static_cast<double>(xs.size()));
}

BenchSummary summarize_samples(std::string mode, std::vector<BenchSample> samples, std::size_t requested) {
  BenchSummary s;
  s.mode = std::move(mode);
  s.requested = requested;
  std::vector<double> times, rss, energy;
  for (const auto& x : samples) {
    if (!x.valid()) {
      ++s.n_failed;
      continue;
    }
    ++s.n_valid;
    times.push_back(x.wall_time);
    if (x.max_rss > 0) rss.push_back(static_cast<double>(x.max_rss));
    if (x.energy_joules && *x.energy_joules > 0) energy.push_back(*x.energy_joules);
  }
  if (s.n_valid == 0) throw AllRunsFailed("all " + std::to_string(samples.size()) + " runs failed");
  s.geomean_time = geomean(times);
  if (!rss.empty()) s.geomean_rss = geomean(rss);
  if (energy.size() == s.n_valid) s.geomean_energy = geomean(energy);
  s.samples = std::move(samples);
  return s;
}

BenchSummary bench_run(const fs::path& binary, const BenchOptions& options) {
  if (options.runs == 0) throw Error("bench: runs must be >= 1");
  if (!fs::is_regular_file(binary)) throw Error("bench: binary missing: " + binary.string());
  std::vector<std::string> argv{fs::absolute(binary).string()};
  argv.insert(argv.end(), options.args.begin(), options.args.end());
  RunOptions ro;
  ro.timeout_seconds = options.timeout_seconds;

  for (std::size_t i = 0; i < options.warmup; ++i) run_command(argv, ro);

  std::vector<std::string> measured = argv;
  if (!options.energy_command.empty()) {
    TemplateVars vars;
    vars.inputs = argv;
    measured = expand_command(options.energy_command, vars);
  }
  static const std::regex energy_re(R"(energy_joules\s*=\s*([0-9.eE+-]+))");
  std::vector<BenchSample> samples;
  samples.reserve(options.runs);
  for (std::size_t i = 0; i < options.runs; ++i) {
    const CommandResult r = run_command(measured, ro);
    BenchSample s;
    s.wall_time = r.wall_seconds;
    s.max_rss = r.max_rss_bytes;
    s.exit_code = r.timed_out ? -1 : r.signal ? 128 + *r.signal : r.exit_code;
    if (!options.energy_command.empty()) {
      std::smatch m;
      const std::string text = r.out + r.err;
      if (std::regex_search(text, m, energy_re)) s.energy_joules = std::stod(m[1].str());
    }
    samples.push_back(s);
  }
  return summarize_samples(options.mode, std::move(samples), options.runs);
}

std::vector<ModeRatio> compare_modes(const std::vector<BenchSummary>& summaries, const std::string& baseline_mode) {
  const BenchSummary* base = nullptr;
  for (const auto& s : summaries) {
    if (s.mode == baseline_mode) base = &s;
  }
  if (base == nullptr) throw Error("compare_modes: baseline mode '" + baseline_mode + "' missing");
  std::vector<ModeRatio> out;
  for (const auto& s : summaries) {
    ModeRatio r;
    r.mode = s.mode;
    r.speedup = base->geomean_time / s.geomean_time;
    r.memory_ratio = s.geomean_rss > 0 ? base->geomean_rss / s.geomean_rss : 0.0;
    if (base->geomean_energy && s.geomean_energy) r.energy_ratio = *base->geomean_energy / *s.geomean_energy;
    out.push_back(r);
  }
  return out;
}

std::string bench_to_ndjson(const BenchSummary& s) {
  std::string out;
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const auto& x = s.samples[i];
    ordered_json j;
    j["schema"] = kBenchSchema;
    j["kind"] = "sample";
    j["mode"] = s.mode;
    j["run"] = i;
    j["wall_time"] = x.wall_time;
    j["max_rss"] = x.max_rss;
    j["exit_code"] = x.exit_code;
    j["energy_joules"] = x.energy_joules ? ordered_json(*x.energy_joules) : ordered_json(nullptr);
    out += j.dump() + "\n";
  }
  ordered_json j;
  j["schema"] = kBenchSchema;
  j["kind"] = "summary";
  j["mode"] = s.mode;
  j["requested"] = s.requested;
  j["n_valid"] = s.n_valid;
  j["n_failed"] = s.n_failed;
  j["geomean_time"] = s.geomean_time;
  j["geomean_rss"] = s.geomean_rss;
  j["geomean_energy"] = s.geomean_energy ? ordered_json(*s.geomean_energy) : ordered_json(nullptr);
  out += j.dump() + "\n";
  return out;
}

BenchSummary bench_from_ndjson(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  BenchSummary s;
  bool have_summary = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (j.value("schema", "") != kBenchSchema) throw Error("bench record: unsupported schema");
      if (j.at("kind") == "sample") {
        BenchSample x;
        x.wall_time = j.at("wall_time").get<double>();
        x.max_rss = j.at("max_rss").get<std::size_t>();
        x.exit_code = j.at("exit_code").get<int>();
        if (!j.at("energy_joules").is_null()) x.energy_joules = j["energy_joules"].get<double>();
        s.samples.push_back(x);
      } else {
        s.mode = j.at("mode").get<std::string>();
        s.requested = j.at("requested").get<std::size_t>();
        s.n_valid = j.at("n_valid").get<std::size_t>();
        s.n_failed = j.at("n_failed").get<std::size_t>();
        s.geomean_time = j.at("geomean_time").get<double>();
        s.geomean_rss = j.at("geomean_rss").get<double>();
        if (!j.at("geomean_energy").is_null()) s.geomean_energy = j["geomean_energy"].get<double>();
        have_summary = true;
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("bench record: ") + e.what());
  }
  if (!have_summary) throw Error("bench file has no summary record");
  return s;
}

std::string render_ratios(const std::vector<ModeRatio>& ratios, const std::string& baseline_mode) {
  std::string out = "mode | speedup | memory | energy   (baseline " + baseline_mode + " = 1.00x)\n";
  char buf[128];
  for (const auto& r : ratios) {
    std::snprintf(buf, sizeof buf, "%s | %.2fx | %.2fx | ", r.mode.c_str(), r.speedup, r.memory_ratio);
    out += buf;
    if (r.energy_ratio) {
      std::snprintf(buf, sizeof buf, "%.2fx", *r.energy_ratio);
      out += buf;
    } else {
      out += "-";
    }
    out += "\n";
  }
  return out;
}

}  // namespace asmxlate
