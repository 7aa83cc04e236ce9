#include "branchkh/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <system_error>

namespace branchkh {

namespace fs = std::filesystem;

std::string entry_to_json(const CacheEntry& e) {
  auto j = nlohmann::ordered_json::parse(ranks_to_json(e.ranks, e.digest, flavor_name(e.flavor)));
  j["engine_version"] = e.engine_version;
  j["wall_time"] = e.wall_time;
  return j.dump(2) + "\n";
}

CacheEntry entry_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  CacheEntry e;
  e.ranks = ranks_from_json(text);
  e.digest = j.at("diagram").get<std::string>();
  e.flavor = parse_flavor(j.at("flavor").get<std::string>());
  e.engine_version = j.at("engine_version").get<std::string>();
  e.wall_time = j.value("wall_time", 0.0);
  return e;
}

ResultCache::ResultCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    warning_ = "cache directory " + dir_.string() + " is unusable; continuing without cache";
    return;
  }
  // Probe writability once so that failures surface as a warning up front.
  fs::path probe = dir_ / (".probe-" + std::to_string(std::random_device{}()));
  {
    std::ofstream f(probe);
    if (!f) {
      warning_ = "cache directory " + dir_.string() + " is not writable; continuing without cache";
      return;
    }
  }
  fs::remove(probe, ec);
  enabled_ = true;
}

fs::path ResultCache::default_dir() {
  if (const char* d = std::getenv("BRANCHKH_CACHE_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "branchkh";
  if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "branchkh";
  return fs::temp_directory_path() / "branchkh-cache";
}

fs::path ResultCache::file_for(const std::string& digest, Flavor flavor) const {
  return dir_ / (digest + "-" + flavor_name(flavor) + ".json");
}

std::optional<CacheEntry> ResultCache::get(const std::string& digest, Flavor flavor) const {
  if (!enabled_) return std::nullopt;
  std::ifstream f(file_for(digest, flavor));
  if (!f) return std::nullopt;
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    CacheEntry e = entry_from_json(ss.str());
    if (e.engine_version != kEngineVersion || e.digest != digest || e.flavor != flavor) {
      return std::nullopt;
    }
    return e;
  } catch (const std::exception&) {
    return std::nullopt;  // corrupt entries are treated as misses
  }
}

bool ResultCache::put(const CacheEntry& e) {
  if (!enabled_) return false;
  fs::path target = file_for(e.digest, e.flavor);
  std::mt19937_64 rng(std::random_device{}());
  fs::path tmp = dir_ / (target.filename().string() + ".tmp-" + std::to_string(rng()));
  {
    std::ofstream f(tmp);
    if (!f) return false;
    f << entry_to_json(e);
    if (!f.flush()) {
      std::error_code ec;
      fs::remove(tmp, ec);
      return false;
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    return false;
  }
  return true;
}

}  // namespace branchkh
