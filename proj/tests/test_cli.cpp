#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = feigencert::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratchDir() {
  auto dir = std::filesystem::temp_directory_path() / "feigencert-cli-tests";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("alpha") {
    const Result r = call({"alpha", "-n", "8"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("-2.50290788\n", 0) == 0);
    CHECK(r.out.find("error bound") != std::string::npos);
    const Result one = call({"alpha", "--digits", "1"});
    CHECK(one.out.rfind("-2.5\n", 0) == 0);
  }

  TEST_CASE("json output") {
    const Result r = call({"alpha", "-n", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema_version"] == feigencert::cli::kJsonSchemaVersion);
    CHECK(j["command"] == "alpha");
    CHECK(j["value"] == "-2.50291");
    const Result t = call({"--json", "taylor", "-k", "2", "-n", "6"});
    REQUIRE(t.code == 0);
    const auto tj = nlohmann::json::parse(t.out);
    REQUIRE(tj["coefficients"].size() == 2);
    for (const auto& c : tj["coefficients"]) {
      CHECK(c.contains("i"));
      CHECK(c.contains("value"));
      CHECK(c.contains("error_bound"));
    }
    CHECK(tj["coefficients"][0]["value"] == "-1.527633");
    CHECK(nlohmann::json::parse(call({"constants", "--json"}).out)["decay"]["C"] == "62/13");
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(call({}).code == feigencert::cli::kUsage);
    CHECK(call({"alpha"}).code == feigencert::cli::kUsage);
    CHECK(call({"alpha", "-n", "0"}).code == feigencert::cli::kUsage);
    CHECK(call({"alpha", "-n", "8", "--format", "xml"}).code == feigencert::cli::kUsage);
    CHECK(call({"alpha", "-n", "8", "--format", "json", "--json"}).code == feigencert::cli::kUsage);
    CHECK(call({"taylor", "-n", "3"}).code == feigencert::cli::kUsage);
    CHECK(call({"taylor", "-n", "3", "-k", "0"}).code == feigencert::cli::kUsage);
    CHECK(call({"run"}).code == feigencert::cli::kUsage);
    CHECK(call({"run", "-n", "3", "--steps", "2"}).code == feigencert::cli::kUsage);
    CHECK(call({"verify", "--suite", "everything"}).code == feigencert::cli::kUsage);
    CHECK(call({"frobnicate"}).code == feigencert::cli::kUsage);
    CHECK(call({"--help"}).code == 0);
  }

  TEST_CASE("run and resume through checkpoints") {
    const auto dir = scratchDir();
    const std::string a = (dir / "a.ckpt").string(), b = (dir / "b.ckpt").string();
    CHECK(call({"run", "--steps", "6", "--checkpoint", a}).code == 0);
    CHECK(call({"resume", "--steps", "6", "--checkpoint", a}).code == 0);
    CHECK(call({"run", "--steps", "12", "--checkpoint", b}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("feigencert-checkpoint 1 m=12 ", 0) == 0);

    std::string text = slurp(a);
    text[text.find('\n') + 5] ^= 1;
    std::ofstream(a, std::ios::binary | std::ios::trunc) << text;
    const Result corrupt = call({"resume", "--steps", "1", "--checkpoint", a});
    CHECK(corrupt.code == feigencert::cli::kCorruptCheckpoint);
    CHECK(corrupt.err.find("checksum") != std::string::npos);
    CHECK(call({"alpha", "-n", "4", "--checkpoint", a}).code == feigencert::cli::kCorruptCheckpoint);
  }

  TEST_CASE("default checkpoint directory from the environment") {
    const auto dir = scratchDir();
    ::setenv(feigencert::cli::kCheckpointDirVariable, dir.c_str(), 1);
    const Result r = call({"run", "-n", "3", "--json"});
    ::unsetenv(feigencert::cli::kCheckpointDirVariable);
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(dir / "feigencert.ckpt"));
    CHECK(nlohmann::json::parse(r.out)["m"] == 32);
  }

  TEST_CASE("alpha resumes from a checkpoint") {
    const auto dir = scratchDir();
    const std::string p = (dir / "alpha.ckpt").string();
    CHECK(call({"run", "--steps", "30", "--checkpoint", p}).code == 0);
    const Result r = call({"alpha", "-n", "8", "--checkpoint", p, "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["m"] == 30);
    CHECK(j["value"] == "-2.50290788");
  }

  TEST_CASE("verify exit status follows the checks") {
    const Result ok = call({"verify", "--suite", "membership", "-m", "8"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("PASS") != std::string::npos);
    const Result lemma = call({"verify", "--suite", "lemma", "--format", "json"});
    CHECK(lemma.code == feigencert::cli::kVerificationFailed);
    const auto j = nlohmann::json::parse(lemma.out);
    CHECK(j["passed"] == false);
    bool named = false;
    for (const auto& c : j["checks"]) named = named || (c["status"] == "fail" && c["name"].get<std::string>().find("4e-6") != std::string::npos);
    CHECK(named);
    const Result probe1 = call({"verify", "--suite", "contraction", "--seed", "42", "--samples", "5", "--json"});
    const Result probe2 = call({"verify", "--suite", "contraction", "--seed", "42", "--samples", "5", "--json"});
    CHECK(probe1.code == 0);
    CHECK(probe1.out == probe2.out);
  }
}
