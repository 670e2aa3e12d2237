#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "doctest.h"
#include "taut/io.hpp"

using namespace taut;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(TAUTCLI_PATH) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> p(popen(cmd.c_str(), "r"), pclose);
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p.get())) > 0) out.append(buf.data(), n);
  int status = pclose(p.release());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("stars lists the five configurations") {
  auto r = run("stars --g 2 --mu 3,-1 --contributing --format json");
  CHECK(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["command"] == "stars");
  CHECK(j["result"]["count"] == 5);
  auto t = run("stars --g 2 --mu 3,-1 --contributing");
  CHECK(t.out.find("5 contributing") != std::string::npos);
}

TEST_CASE("verify and pixton") {
  auto v = run("verify --g 1 --mu 2,-1,-1 --format json");
  CHECK(v.code == 0);
  CHECK(Json::parse(v.out)["result"]["verdict"] == "EQUAL-UNDER-PAIRING");
  auto p = run("pixton --g 1 --mu 1,-1 --degree 2 --format json");
  CHECK(p.code == 0);
  auto j = Json::parse(p.out);
  CHECK(j["result"]["zero_under_pairing"] == true);
  CHECK(j["result"]["raw"].size() == j["result"]["fit_r"].size() + 3);
  CHECK(run("pixton --g 1 --mu=-1,1 --degree 1").code == 0);
}

TEST_CASE("exit codes") {
  CHECK(run("stars --g 2 --mu 3,x").code == 2);
  CHECK(run("pixton --g 1 --mu 1,-1").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("stars --g 2 --mu 3,-2").code == 3);
  CHECK(run("twists --g 1 --mu 1,1 --k 1").code == 3);
  CHECK(run("twists --g 2 --mu 3,1 --k 2").code == 0);
  CHECK(run("pixton --g 1 --mu 4,-1,-1,-1,-1 --degree 1 --max-samples 5").code == 4);
  CHECK(run("--help").code == 0);
}

TEST_CASE("structured output is deterministic across cache states") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("taut_cli_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  auto a = run("closure --g 1 --mu 3,-1,-2 --format json --cache-dir " + dir.string());
  auto b = run("closure --g 1 --mu 3,-1,-2 --format json --cache-dir " + dir.string());
  auto c = run("closure --g 1 --mu 3,-1,-2 --format json");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(!fs::is_empty(dir));
  fs::remove_all(dir);
}

TEST_CASE("graphs and twists") {
  auto g = run("graphs --g 1 --mu 0,0 --format json");
  CHECK(Json::parse(g.out)["result"]["count"] == 5);
  auto t = run("twists --g 2 --mu 3,-1 --format json");
  CHECK(t.code == 0);
  CHECK(Json::parse(t.out)["result"]["count"].get<int>() > 0);
}
