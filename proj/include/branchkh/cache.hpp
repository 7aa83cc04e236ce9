#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "branchkh/kh.hpp"

namespace branchkh {

// Bumped whenever engine output could change; older entries become misses.
inline constexpr const char* kEngineVersion = "branchkh-kh/1";

struct CacheEntry {
  std::string digest;
  Flavor flavor = Flavor::Reduced;
  KhRanks ranks;
  std::string engine_version = kEngineVersion;
  double wall_time = 0;
};

std::string entry_to_json(const CacheEntry& e);
CacheEntry entry_from_json(const std::string& text);  // throws on malformed input

// One JSON file per entry, named <digest>-<flavor>.json. Writes go to a
// temporary file in the same directory and are renamed into place. An
// unusable directory disables the cache and records a warning.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  // $BRANCHKH_CACHE_DIR, else $XDG_CACHE_HOME/branchkh, else ~/.cache/branchkh.
  static std::filesystem::path default_dir();

  bool enabled() const { return enabled_; }
  const std::string& warning() const { return warning_; }
  const std::filesystem::path& dir() const { return dir_; }

  std::optional<CacheEntry> get(const std::string& digest, Flavor flavor) const;
  bool put(const CacheEntry& e);

 private:
  std::filesystem::path file_for(const std::string& digest, Flavor flavor) const;

  std::filesystem::path dir_;
  bool enabled_ = false;
  std::string warning_;
};

}  // namespace branchkh
