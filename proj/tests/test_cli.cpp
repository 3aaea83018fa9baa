#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "tlopt/lights.hpp"
#include "tlopt/network_xml.hpp"
#include "tlopt/programme_json.hpp"
#include "tlopt/samples.hpp"
#include "tlopt_cli/cli.hpp"

namespace fs = std::filesystem;
using namespace tlopt;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("tlopt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    write("crossing.xml", net::serialize_network(samples::crossing_junction()));
    write("crossing.json", lights::programme_to_json(lights::even_split_programme(samples::crossing_junction(), {})));
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(root_ / name, std::ios::binary) << text;
    return path(name);
  }
  std::string path(const std::string& name) const { return (root_ / name).string(); }

  fs::path root_;
};

}  // namespace

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(cli::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, ValidateOk) {
  const auto r = run({"validate", path("crossing.xml"), path("crossing.json")});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out, "ok\n");
}

TEST_F(CliTest, ValidateReportsNetworkViolations) {
  auto xml = net::serialize_network(samples::crossing_junction());
  const auto pos = xml.find("length=\"200\"");
  ASSERT_NE(pos, std::string::npos);
  xml.replace(pos, 12, "length=\"-5\"");
  const auto r = run({"validate", write("bad.xml", xml)});
  EXPECT_EQ(r.code, cli::kViolations);
  EXPECT_NE(r.out.find("network "), std::string::npos);
}

TEST_F(CliTest, ValidateReportsProgrammeViolations) {
  const lights::LightsProgramme overlapping{{}, {{1, 0, 100}, {2, 50, 100}}};
  const auto r = run({"validate", path("crossing.xml"), write("bad.json", lights::programme_to_json(overlapping))});
  EXPECT_EQ(r.code, cli::kViolations);
  EXPECT_NE(r.out.find("programme "), std::string::npos);
}

TEST_F(CliTest, ParseErrorsExitTwo) {
  EXPECT_EQ(run({"validate", write("junk.xml", "<network><bogus/></network>")}).code, cli::kParseError);
  EXPECT_EQ(run({"validate", write("trunc.xml", "<network>")}).code, cli::kParseError);
  EXPECT_EQ(run({"validate", path("crossing.xml"), write("junk.json", "{")}).code, cli::kParseError);
  EXPECT_EQ(run({"validate", path("missing.xml")}).code, cli::kParseError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kParseError);
  EXPECT_EQ(run({"simulate", path("crossing.xml"), path("crossing.json")}).code, cli::kParseError);
  EXPECT_EQ(run({"optimize", path("crossing.xml"), "--out-dir", path("o"), "--weights", "0.7,0.7"}).code,
            cli::kParseError);
  EXPECT_EQ(run({"sample", "nowhere"}).code, cli::kParseError);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, cli::kOk); }

TEST_F(CliTest, SimulateWritesOutputs) {
  const auto r = run({"simulate", path("crossing.xml"), path("crossing.json"), "--ticks", "500", "--seed", "3",
                      "--out", path("sim"), "--traces"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  for (const char* f : {"stats.csv", "vehicles.csv", "trace.jsonl", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(root_ / "sim" / f)) << f;
  }
  EXPECT_EQ(r.out.rfind("metric,value\nticks,500\n", 0), 0u);
  EXPECT_NE(r.out.find("\nfitness,"), std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(root_ / "sim" / "manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "simulate");
  EXPECT_EQ(manifest["seeds"]["simulation"], 3);
  EXPECT_EQ(manifest["outputs"].size(), 3u);
  EXPECT_EQ(manifest["inputs"][0]["sha256"], cli::sha256_hex(slurp(path("crossing.xml"))));
}

TEST_F(CliTest, SimulateZeroTicks) {
  const auto r = run({"simulate", path("crossing.xml"), path("crossing.json"), "--ticks", "0", "--out", path("z")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(r.out.rfind("metric,value\nticks,0\nspawned,0\ncompleted,0\n", 0), 0u);
  EXPECT_FALSE(fs::exists(root_ / "z" / "trace.jsonl"));
}

TEST_F(CliTest, SimulateRejectsInvalidProgramme) {
  const lights::LightsProgramme overlapping{{}, {{1, 0, 100}, {2, 50, 100}}};
  const auto r = run({"simulate", path("crossing.xml"), write("bad.json", lights::programme_to_json(overlapping)),
                      "--out", path("s")});
  EXPECT_EQ(r.code, cli::kViolations);
}

TEST_F(CliTest, OptimizeIsReproducibleAcrossRunsAndJobs) {
  const std::vector<std::string> base{"optimize", path("crossing.xml"), "--generations", "3", "--pop-size", "6",
                                      "--ticks", "300", "--seed", "5"};
  auto with = [&](const std::string& dir, const std::string& jobs) {
    auto args = base;
    args.insert(args.end(), {"--out-dir", path(dir), "--jobs", jobs});
    return run(args);
  };
  const auto a = with("a", "1");
  const auto b = with("b", "1");
  const auto c = with("c", "4");
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  ASSERT_EQ(b.code, cli::kOk);
  ASSERT_EQ(c.code, cli::kOk);
  EXPECT_EQ(a.out, c.out);
  const auto fa = dir_contents(root_ / "a");
  EXPECT_EQ(fa.size(), 5u);
  EXPECT_EQ(fa, dir_contents(root_ / "b"));
  EXPECT_EQ(fa, dir_contents(root_ / "c"));
  const auto best = lights::programme_from_json(fa.at("best_programme.json"));
  EXPECT_TRUE(lights::validate_programme(best, samples::crossing_junction()).empty());
  EXPECT_NE(fa.at("summary.csv").find("baseline_fitness,0."), std::string::npos);
}

TEST_F(CliTest, OptimizeInfeasibleExitsThree) {
  write("three.xml", net::serialize_network(samples::three_way_conflict()));
  const auto r = run({"optimize", path("three.xml"), "--out-dir", path("o"), "--cycle", "16", "--t-min", "7",
                      "--yellow", "1", "--red-yellow", "1"});
  EXPECT_EQ(r.code, cli::kInfeasible);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
}

TEST_F(CliTest, SamplePrintsParsableDocuments) {
  for (const char* name : {"crossing", "grid", "three-way"}) {
    const auto xml = run({"sample", name});
    ASSERT_EQ(xml.code, cli::kOk);
    const auto net = net::parse_network(xml.out);
    const auto json = run({"sample", name, "--programme"});
    ASSERT_EQ(json.code, cli::kOk);
    EXPECT_TRUE(lights::validate_programme(lights::programme_from_json(json.out), net).empty());
  }
}
