#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "taut/hclass.hpp"
#include "taut/io.hpp"

using namespace taut;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("taut_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("graph round trip") {
  for (const auto& G : enumerate_stable_graphs(1, 3)) CHECK(graph_from_json(graph_to_json(G)) == G);
  Json bad = graph_to_json(StableGraph::trivial(1, 1));
  bad["genera"] = Json::array({0});
  CHECK_THROWS_AS(graph_from_json(bad), std::invalid_argument);
  CHECK_THROWS_AS(graph_from_json(Json::object()), std::invalid_argument);
}

TEST_CASE("class round trip is exact and byte-stable") {
  for (auto x : {pixton_class(1, {2, -1, -1}, 2), closure_class(2, {2}), TautClass(1, 2),
                 TautClass::kappa(0, 5, 2) * Rational(-3, 7)}) {
    Json j = class_to_json(x);
    TautClass y = class_from_json(j);
    CHECK(y == x);
    CHECK(dump(class_to_json(y)) == dump(j));
    CHECK(class_from_json(Json::parse(dump(j))) == x);
  }
  Json j = class_to_json(TautClass::psi(0, 4, 1));
  CHECK(j["terms"][0]["coeff"] == "1/1");
  CHECK(j["terms"][0]["psi"]["0"] == 1);
  j["format_version"] = kFormatVersion + 1;
  CHECK_THROWS_AS(class_from_json(j), std::invalid_argument);
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("class cache") {
  auto dir = fresh_dir("cache");
  ClassCache cache(dir);
  CHECK_FALSE(cache.load("k").has_value());
  auto x = closure_class(1, {2, -1, -1});
  cache.store("k", x);
  auto y = cache.load("k");
  REQUIRE(y.has_value());
  CHECK(*y == x);
  CHECK(cache.path_for("k") != cache.path_for("k2"));
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() == ".json");

  // another version or key in the file means a miss, never a wrong class
  {
    std::ifstream in(cache.path_for("k"));
    Json j = Json::parse(in);
    j["format_version"] = kFormatVersion + 1;
    std::ofstream(cache.path_for("k")) << dump(j);
  }
  CHECK_FALSE(cache.load("k").has_value());
  std::ofstream(cache.path_for("k")) << "{ not json";
  CHECK_FALSE(cache.load("k").has_value());
  fs::copy_file(cache.path_for("k"), cache.path_for("other"), fs::copy_options::overwrite_existing);
  cache.store("k", x);
  fs::copy_file(cache.path_for("k"), cache.path_for("other"), fs::copy_options::overwrite_existing);
  CHECK_FALSE(cache.load("other").has_value());
  fs::remove_all(dir);
}
