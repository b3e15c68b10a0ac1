#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "scenery/parallel.hpp"
#include "scenery/report.hpp"
#include "scenery/rng.hpp"

using namespace scenery;

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(config_hash(json{{"b", 1}, {"a", 2}}) == config_hash(json{{"a", 2}, {"b", 1}}));
}

TEST_CASE("exit code taxonomy") {
  CHECK(exit_code_for(ErrorCode::config_error) == 2);
  CHECK(exit_code_for(ErrorCode::invalid_params) == 2);
  CHECK(exit_code_for(ErrorCode::precision_loss) == 3);
  CHECK(exit_code_for(ErrorCode::zero_mass) == 4);
  CHECK(exit_code_for(ErrorCode::depth_exceeded) == 5);
  const json e = error_json(Error(ErrorCode::zero_mass, "empty"));
  CHECK(e["error"] == "ZeroMass");
  CHECK(e["exit_code"] == 4);
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "scenery_support_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  std::ifstream is(path);
  std::string text;
  std::getline(is, text);
  CHECK(text == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("reports are deterministic and tagged") {
  Report a("salli", json{{"alpha", 0.25}, {"seed", 1}});
  a.closed_form("dimension", 0.63);
  a.empirical("box", 0.631, 0.001);
  Report b("salli", json{{"seed", 1}, {"alpha", 0.25}});
  b.closed_form("dimension", 0.63);
  b.empirical("box", 0.631, 0.001);
  CHECK(a.dump() == b.dump());
  const json j = a.to_json();
  CHECK(j["summary"]["box"]["tag"] == "empirical");
  CHECK(j["summary"]["box"].contains("error"));
  CHECK(j["summary"]["dimension"]["tag"] == "closed_form");
  CHECK(j["provenance"]["tool_version"] == kToolVersion);
}

TEST_CASE("parallel_for covers every index and reports the lowest failure") {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 37 || i == 80) throw Error(ErrorCode::zero_mass, std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "37");
  }
}

TEST_CASE("thread cap from the environment") {
  setenv("SCENERY_LAB_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("SCENERY_LAB_THREADS", "1", 1);
  CHECK(thread_count() == 1);
  unsetenv("SCENERY_LAB_THREADS");
  CHECK(thread_count() >= 1);
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(1, 0), b(1, 0), c(1, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.bits();
    CHECK(x == b.bits());
    seen.insert(x);
    seen.insert(c.bits());
  }
  CHECK(seen.size() == 200);
  double sum = 0.0;
  Rng n(9, 0);
  for (int i = 0; i < 100000; ++i) sum += n.normal();
  CHECK(std::fabs(sum / 100000) < 0.02);
}
