#include <httplib.h>

#include <json.hpp>
#include <thread>

#include "asmxlate/backend.hpp"

namespace asmxlate {

using nlohmann::json;

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

// Releases a semaphore slot on scope exit.
struct SlotGuard {
  std::counting_semaphore<>& sem;
  explicit SlotGuard(std::counting_semaphore<>& s) : sem(s) { sem.acquire(); }
  ~SlotGuard() { sem.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;
};

}  // namespace

std::string compose_prompt(const ToolchainConfig& cfg, IsaName target, std::string_view x86_text) {
  std::string preamble = cfg.prompt_preamble;
  replace_all(preamble, "{target}", to_string(target));
  replace_all(preamble, "{opt}", cfg.optimization_level);
  return preamble + "\n" + std::string(x86_text);
}

RemoteBackend::RemoteBackend(RemoteOptions options, ToolchainConfig cfg, TokenizerSpec spec)
    : options_(std::move(options)), cfg_(std::move(cfg)), spec_(std::move(spec)) {
  if (options_.max_in_flight == 0) throw Error("remote: max_in_flight must be >= 1");
  slots_ = std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(options_.max_in_flight));
}

RemoteBackend::~RemoteBackend() = default;

std::vector<Candidate> RemoteBackend::transpile_impl(const TranspileRequest& req) {
  const std::size_t tokens = count_tokens(req.source_text, spec_);
  if (tokens > static_cast<std::size_t>(req.params.context_window)) {
    throw ContextOverflow(tokens, static_cast<std::size_t>(req.params.context_window));
  }
  json body = {{"prompt", compose_prompt(cfg_, req.target_isa, req.source_text)},
               {"max_tokens", req.params.max_new_tokens},
               {"temperature", req.params.sampling_enabled ? 1.0 : 0.0},
               {"n", req.params.num_beams}};
  if (!options_.model.empty()) body["model"] = options_.model;
  const std::string payload = body.dump();

  SlotGuard slot(*slots_);
  httplib::Client client(options_.url);
  const auto secs = static_cast<time_t>(options_.timeout_seconds);
  const auto usecs = static_cast<time_t>((options_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  std::string last_error;
  bool server_error = false;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.retry_backoff * attempt);
    auto res = client.Post(options_.path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      server_error = false;
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
      server_error = true;
      continue;
    }
    if (res->status != 200) {
      throw BackendRefused("remote: HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    std::vector<Candidate> out;
    try {
      const json j = json::parse(res->body);
      for (const auto& choice : j.at("choices")) {
        Candidate c{choice.at("text").get<std::string>(), std::nullopt};
        if (choice.contains("score") && choice["score"].is_number()) c.score = choice["score"].get<double>();
        out.push_back(std::move(c));
      }
    } catch (const json::exception& e) {
      throw BackendRefused(std::string("remote: malformed response: ") + e.what());
    }
    if (out.empty()) throw BackendRefused("remote: response has no choices");
    return out;
  }
  if (server_error) throw BackendRefused("remote: " + last_error);
  throw BackendUnavailable("remote: " + last_error + " (" + options_.url + ")");
}

}  // namespace asmxlate
