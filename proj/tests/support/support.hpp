#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "asmxlate/config.hpp"
#include "asmxlate/isa.hpp"
#include "asmxlate/tokenizer.hpp"

namespace testsupport {

std::filesystem::path fixtures();
std::filesystem::path source_dir();
std::filesystem::path cli_path();

/// The shipped config with a short run timeout so the endless-loop fixtures
/// don't dominate test time.
asmxlate::ToolchainConfig test_config(double run_timeout = 3.0);

/// gcc, clang and the emulator's python modules all start.
bool toolchain_available();

// Independent oracles. None of these share code with the library.

/// Textbook recursive edit distance over suffixes, memoised.
std::size_t levenshtein_oracle(const std::string& a, const std::string& b);

/// Brute force: at each position try every entry, keep the longest that
/// sits on identifier boundaries, else emit one fallback unit.
std::vector<std::string> tokenize_oracle(const std::string& text, const std::vector<std::string>& entries,
                                         asmxlate::Fallback fallback);

std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace testsupport
