#include "asmxlate/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>

#include "asmxlate/error.hpp"

extern char** environ;

namespace asmxlate {

namespace {

using Clock = std::chrono::steady_clock;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { reset(); }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

void make_pipe(Fd& read_end, Fd& write_end) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw InfrastructureError(std::string("pipe2 failed: ") + std::strerror(errno));
  }
  read_end.reset(fds[0]);
  write_end.reset(fds[1]);
}

std::string expand_env(std::string_view word) {
  std::string out;
  for (std::size_t i = 0; i < word.size();) {
    if (word[i] == '$' && i + 1 < word.size() && word[i + 1] == '{') {
      const auto close = word.find('}', i + 2);
      if (close == std::string_view::npos) {
        out.append(word.substr(i));
        break;
      }
      std::string_view body = word.substr(i + 2, close - i - 2);
      std::string_view name = body;
      std::optional<std::string_view> fallback;
      if (auto sep = body.find(":-"); sep != std::string_view::npos) {
        name = body.substr(0, sep);
        fallback = body.substr(sep + 2);
      }
      const char* value = std::getenv(std::string(name).c_str());
      if (value != nullptr && *value != '\0') {
        out += value;
      } else if (fallback) {
        out.append(*fallback);
      }
      i = close + 1;
    } else {
      out += word[i++];
    }
  }
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::vector<std::string> split_words(std::string_view tmpl) {
  std::vector<std::string> words;
  std::string current;
  bool in_word = false;
  char quote = 0;
  for (char c : tmpl) {
    if (quote != 0) {
      if (c == quote) {
        quote = 0;
      } else {
        current += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_word) words.push_back(std::move(current));
      current.clear();
      in_word = false;
    } else {
      current += c;
      in_word = true;
    }
  }
  if (in_word) words.push_back(std::move(current));
  return words;
}

}  // namespace

std::string join_command(const std::vector<std::string>& argv) {
  std::string out;
  for (const auto& arg : argv) {
    if (!out.empty()) out += ' ';
    const bool needs_quotes = arg.empty() || arg.find_first_of(" \t'\"") != std::string::npos;
    if (needs_quotes) {
      out += '\'' + arg + '\'';
    } else {
      out += arg;
    }
  }
  return out;
}

std::string expand_path(std::string_view tmpl, const std::filesystem::path& config_dir) {
  std::string s = expand_env(tmpl);
  replace_all(s, "{config_dir}", config_dir.empty() ? "." : config_dir.string());
  return s;
}

std::vector<std::string> expand_command(std::string_view tmpl, const TemplateVars& vars) {
  std::vector<std::string> argv;
  std::string joined_inputs;
  for (const auto& in : vars.inputs) {
    if (!joined_inputs.empty()) joined_inputs += ' ';
    joined_inputs += in;
  }
  const std::string config_dir = vars.config_dir.empty() ? "." : vars.config_dir.string();
  for (const auto& raw : split_words(tmpl)) {
    if (raw == "{input}") {
      argv.insert(argv.end(), vars.inputs.begin(), vars.inputs.end());
      continue;
    }
    const bool has_placeholder = raw.find('{') != std::string::npos;
    std::string word = expand_env(raw);
    replace_all(word, "{input}", joined_inputs);
    replace_all(word, "{output}", vars.output);
    replace_all(word, "{opt}", vars.opt);
    replace_all(word, "{config_dir}", config_dir);
    if (word.empty() && has_placeholder) continue;
    argv.push_back(std::move(word));
  }
  return argv;
}

std::string signal_name(int sig) {
  switch (sig) {
    case SIGSEGV: return "SIGSEGV";
    case SIGBUS: return "SIGBUS";
    case SIGFPE: return "SIGFPE";
    case SIGILL: return "SIGILL";
    case SIGABRT: return "SIGABRT";
    case SIGKILL: return "SIGKILL";
    case SIGTERM: return "SIGTERM";
    case SIGTRAP: return "SIGTRAP";
    case SIGPIPE: return "SIGPIPE";
    case SIGSYS: return "SIGSYS";
    case SIGXCPU: return "SIGXCPU";
    default: return "SIG" + std::to_string(sig);
  }
}

CommandResult run_command(const std::vector<std::string>& argv, const RunOptions& options) {
  if (argv.empty()) throw InfrastructureError("empty command");

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  Fd out_r, out_w, err_r, err_w;
  make_pipe(out_r, out_w);
  make_pipe(err_r, err_w);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_adddup2(&actions, out_w.get(), 1);
  posix_spawn_file_actions_adddup2(&actions, err_w.get(), 2);
  if (!options.cwd.empty()) {
    posix_spawn_file_actions_addchdir_np(&actions, options.cwd.c_str());
  }

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t empty_mask, default_sigs;
  sigemptyset(&empty_mask);
  sigemptyset(&default_sigs);
  for (int sig : {SIGPIPE, SIGINT, SIGTERM, SIGSEGV, SIGFPE, SIGBUS, SIGCHLD}) {
    sigaddset(&default_sigs, sig);
  }
  posix_spawnattr_setsigmask(&attr, &empty_mask);
  posix_spawnattr_setsigdefault(&attr, &default_sigs);
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGMASK |
                                      POSIX_SPAWN_SETSIGDEF);

  pid_t pid = -1;
  const auto start = Clock::now();
  const int rc = ::posix_spawnp(&pid, cargv[0], &actions, &attr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  out_w.reset();
  err_w.reset();
  if (rc != 0) throw ToolNotFound(join_command(argv) + " (" + std::strerror(rc) + ")");

  CommandResult result;
  const bool has_deadline = options.timeout_seconds > 0.0;
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(has_deadline ? options.timeout_seconds : 0.0));

  pollfd fds[2] = {{out_r.get(), POLLIN, 0}, {err_r.get(), POLLIN, 0}};
  std::string* sinks[2] = {&result.out, &result.err};
  bool open[2] = {true, true};
  bool reaped = false;
  bool killed = false;
  int status = 0;
  rusage usage{};
  Clock::time_point reaped_at{};
  char buf[8192];

  while (open[0] || open[1] || !reaped) {
    if (open[0] || open[1]) {
      fds[0].fd = open[0] ? out_r.get() : -1;
      fds[1].fd = open[1] ? err_r.get() : -1;
      const int ready = ::poll(fds, 2, 20);
      if (ready < 0 && errno != EINTR) break;
      for (int i = 0; i < 2; ++i) {
        if (!open[i] || (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) continue;
        const ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
        if (n <= 0) {
          open[i] = false;
        } else if (sinks[i]->size() < options.max_capture_bytes) {
          sinks[i]->append(buf, static_cast<std::size_t>(n));
        }
      }
    } else if (!reaped) {
      ::usleep(2000);
    }
    if (!reaped) {
      const pid_t r = ::wait4(pid, &status, WNOHANG, &usage);
      if (r == pid) {
        reaped = true;
        reaped_at = Clock::now();
        result.wall_seconds = std::chrono::duration<double>(reaped_at - start).count();
      }
    }
    const auto now = Clock::now();
    if (!reaped && !killed && has_deadline && now >= deadline) {
      ::kill(-pid, SIGKILL);
      killed = true;
      result.timed_out = true;
    }
    if (reaped && (open[0] || open[1]) && now - reaped_at > std::chrono::milliseconds(500)) {
      // Orphaned grandchildren still hold the pipes.
      ::kill(-pid, SIGKILL);
      break;
    }
  }
  if (!reaped) {
    ::wait4(pid, &status, 0, &usage);
    result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  }

  result.max_rss_bytes = static_cast<std::size_t>(usage.ru_maxrss) * 1024;
  if (!result.timed_out) {
    if (WIFSIGNALED(status)) {
      result.signal = WTERMSIG(status);
    } else if (WIFEXITED(status)) {
      result.exit_code = WEXITSTATUS(status);
    }
  }
  return result;
}

}  // namespace asmxlate
