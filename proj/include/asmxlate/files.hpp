#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace asmxlate {

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it into place, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Owns a freshly created directory and removes it recursively on
/// destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view prefix = "asmxlate");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  TempDir(TempDir&& other) noexcept;
  TempDir& operator=(TempDir&& other) noexcept;

  const std::filesystem::path& path() const noexcept { return path_; }
  /// Keep the directory after destruction (debugging aid).
  void keep() noexcept { keep_ = true; }

 private:
  std::filesystem::path path_;
  bool keep_ = false;
};

/// 64-bit FNV-1a; used for fingerprints, not security.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t value);

/// Directory holding roles/, classifier/ and vocab data. ASMXLATE_DATA_DIR
/// overrides the in-tree default.
std::filesystem::path data_dir();

/// UTC timestamp, ISO-8601 with seconds.
std::string utc_timestamp();

}  // namespace asmxlate
