#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "branchkh/cli.hpp"
#include "branchkh/diagram.hpp"
#include "branchkh/generators.hpp"

using namespace branchkh;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  args.insert(args.begin(), "--no-cache");
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string last_line(const std::string& s) {
  std::string t = s;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  return t.substr(t.rfind('\n') + 1);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gen torus prints a parseable PD code") {
    Run r = cli({"gen", "torus", "5", "9"});
    REQUIRE(r.code == 0);
    Diagram d = parse_pd(r.out);
    CHECK(d.crossing_count() == 36);
    CHECK(diagram_digest(d) == diagram_digest(torus_knot(5, 9)));
  }

  TEST_CASE("gen tau and seifert-branch") {
    Run t = cli({"gen", "tau", "-1/2"});
    REQUIRE(t.code == 0);
    CHECK(parse_pd(t.out).crossing_count() == 18);
    Run s = cli({"gen", "seifert-branch", "5", "1", "-"});
    REQUIRE(s.code == 0);
    CHECK(parse_pd(s.out).crossing_count() == 44);
  }

  TEST_CASE("kh reads standard input") {
    std::string pd = render(torus_knot(2, 3));
    Run r = cli({"kh", "-"}, pd);
    REQUIRE(r.code == 0);
    CHECK(last_line(r.out) == "total: 3");
    Run u = cli({"kh", "--unreduced", "--json", pd});
    REQUIRE(u.code == 0);
    CHECK(nlohmann::json::parse(u.out).at("total") == 6);
  }

  TEST_CASE("kh uses the cache directory") {
    fs::path dir = fs::temp_directory_path() / ("branchkh-cli-" + std::to_string(std::random_device{}()));
    std::istringstream in;
    std::ostringstream out, err;
    std::string pd = render(torus_knot(3, 4));
    CHECK(run_cli({"--cache-dir", dir.string(), "kh", pd}, in, out, err) == 0);
    int files = 0;
    for (const auto& f : fs::directory_iterator(dir)) files += f.path().extension() == ".json";
    CHECK(files == 1);
    std::ostringstream out2;
    CHECK(run_cli({"--cache-dir", dir.string(), "kh", pd}, in, out2, err) == 0);
    CHECK(out2.str() == out.str());
    fs::remove_all(dir);
  }

  TEST_CASE("det and jones") {
    std::string pd = render(torus_knot(2, 5));
    Run d = cli({"det", pd});
    REQUIRE(d.code == 0);
    CHECK(last_line(d.out) == "5");
    Run j = cli({"jones", pd});
    REQUIRE(j.code == 0);
    CHECK(nlohmann::json::parse(j.out).is_array());
  }

  TEST_CASE("surgery table") {
    Run r = cli({"surgery-table", "--q", "5", "--n-max", "2", "--csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("T(5,9)") != std::string::npos);
    CHECK(r.out.find("T(5,21)") != std::string::npos);
  }

  TEST_CASE("verify-paper tier 1") {
    Run r = cli({"verify-paper", "--tier", "1"});
    CHECK(r.code == 0);
    size_t passes = 0;
    for (size_t p = r.out.find("PASS"); p != std::string::npos; p = r.out.find("PASS", p + 1)) ++passes;
    CHECK(passes == 5);
    CHECK(last_line(r.out) == "5 passed, 0 failed, 0 skipped");
  }

  TEST_CASE("strict verify fails on skipped claims") {
    Run r = cli({"--max-generators", "5", "verify-paper", "--tier", "1", "--strict"});
    CHECK(r.code == 1);
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(cli({"bogus"}).code == 2);
    CHECK(cli({"bogus"}).err.find("unknown subcommand 'bogus'") != std::string::npos);
    CHECK(cli({}).code == 2);
    CHECK(cli({"verify-paper", "--tier", "7"}).code == 2);
    CHECK(cli({"gen", "torus", "5"}).code == 2);
    CHECK(cli({"kh", "--reduced", "--unreduced", "X(1,1,2,2)"}).code == 2);
  }

  TEST_CASE("malformed PD input is an invalid argument") {
    Run r = cli({"kh", "X(1,2,3)"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
    CHECK(cli({"gen", "torus", "4", "6"}).code != 0);
  }
}
