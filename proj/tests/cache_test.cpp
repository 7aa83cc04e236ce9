#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "branchkh/cache.hpp"
#include "branchkh/generators.hpp"
#include "corpus.hpp"

using namespace branchkh;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("branchkh-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

CacheEntry sample(Flavor f = Flavor::Reduced) {
  Diagram d = torus_knot(2, 5);
  CacheEntry e;
  e.digest = diagram_digest(d);
  e.flavor = f;
  e.ranks = scan_ranks(d, f);
  e.wall_time = 0.25;
  return e;
}

}  // namespace

TEST_SUITE("cache") {
  TEST_CASE("entry json round trip") {
    CacheEntry e = sample();
    CacheEntry back = entry_from_json(entry_to_json(e));
    CHECK(back.digest == e.digest);
    CHECK(back.flavor == e.flavor);
    CHECK(back.ranks == e.ranks);
    CHECK(back.engine_version == kEngineVersion);
    CHECK(back.wall_time == doctest::Approx(0.25));
    CHECK_THROWS(entry_from_json("not json"));
  }

  TEST_CASE("put then get, keyed by digest and flavor") {
    TempDir t;
    ResultCache c(t.path);
    REQUIRE(c.enabled());
    CacheEntry e = sample();
    CHECK(!c.get(e.digest, e.flavor));
    CHECK(c.put(e));
    auto hit = c.get(e.digest, Flavor::Reduced);
    REQUIRE(hit);
    CHECK(hit->ranks == e.ranks);
    CHECK(!c.get(e.digest, Flavor::Unreduced));
    CHECK(!c.get("0000", Flavor::Reduced));
  }

  TEST_CASE("stale engine version and corrupt files are misses") {
    TempDir t;
    ResultCache c(t.path);
    CacheEntry e = sample();
    e.engine_version = "older";
    CHECK(c.put(e));
    CHECK(!c.get(e.digest, e.flavor));
    std::ofstream(t.path / (e.digest + "-reduced.json")) << "{ truncated";
    CHECK(!c.get(e.digest, e.flavor));
  }

  TEST_CASE("unusable directory disables the cache with a warning") {
    TempDir t;
    std::ofstream(t.path / "file") << "x";
    ResultCache c(t.path / "file" / "sub");
    CHECK(!c.enabled());
    CHECK(!c.warning().empty());
    CHECK(!c.put(sample()));
    CHECK(!c.get("x", Flavor::Reduced));
  }

  TEST_CASE("concurrent writers leave one readable entry") {
    TempDir t;
    ResultCache c(t.path);
    CacheEntry e = sample(Flavor::Unreduced);
    std::vector<std::thread> pool;
    for (int i = 0; i < 8; ++i)
      pool.emplace_back([&] {
        for (int k = 0; k < 20; ++k) c.put(e);
      });
    for (auto& th : pool) th.join();
    auto hit = c.get(e.digest, e.flavor);
    REQUIRE(hit);
    CHECK(hit->ranks == e.ranks);
    int files = 0;
    for (const auto& f : fs::directory_iterator(t.path)) {
      (void)f;
      ++files;
    }
    CHECK(files == 1);
  }

  TEST_CASE("cached and fresh results agree across the corpus") {
    TempDir t;
    ResultCache c(t.path);
    auto items = corpus::random_diagrams(40, 14, 61);
    items.push_back({"tau(0)", tau(Slope(0, 1))});
    for (const auto& [name, d] : items) {
      CacheEntry e;
      e.digest = diagram_digest(d);
      e.ranks = scan_ranks(d, Flavor::Reduced);
      REQUIRE(c.put(e));
    }
    for (const auto& [name, d] : items) {
      CAPTURE(name);
      auto hit = c.get(diagram_digest(d), Flavor::Reduced);
      REQUIRE(hit);
      CHECK(hit->ranks == scan_ranks(d, Flavor::Reduced));
      CHECK(entry_from_json(entry_to_json(*hit)).ranks == hit->ranks);
    }
  }

  TEST_CASE("default directory honours the environment") {
    setenv("BRANCHKH_CACHE_DIR", "/tmp/somewhere", 1);
    CHECK(ResultCache::default_dir() == fs::path("/tmp/somewhere"));
    unsetenv("BRANCHKH_CACHE_DIR");
    setenv("XDG_CACHE_HOME", "/tmp/xdg", 1);
    CHECK(ResultCache::default_dir() == fs::path("/tmp/xdg/branchkh"));
    unsetenv("XDG_CACHE_HOME");
  }
}
