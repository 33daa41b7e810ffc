#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

// Runs sketchlab with stderr folded into stdout.
Result sketchlab(const std::string& args) {
  const std::string cmd = std::string(SKETCHLAB_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// "name value" lines into a map.
std::map<std::string, std::string> fields(const std::string& out) {
  std::map<std::string, std::string> m;
  std::istringstream in(out);
  std::string k, v;
  while (in >> k >> v) m[k] = v;
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sketchlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(Cli, GenerateHasFixedDigest) {
  const auto r = sketchlab("generate --zipf 1.0 --flows 100000 --packets 8000000 --seed 7 -o " +
                           path("z.sktr"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto f = fields(r.out);
  EXPECT_EQ(f.at("packets"), "8000000");
  EXPECT_EQ(f.at("digest"), "c4eb82e889f8d205");  // recorded on first run
  EXPECT_EQ(fs::file_size(path("z.sktr")), 8u + 8000000u * 8u);
}

TEST_F(Cli, GenerateIsDeterministicAndSeedSensitive) {
  const auto a = sketchlab("generate --packets 5000 --seed 3 -o " + path("a.sktr"));
  const auto b = sketchlab("generate --packets 5000 --seed 3 -o " + path("b.sktr"));
  const auto c = sketchlab("generate --packets 5000 --seed 4 -o " + path("c.sktr"));
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(slurp(path("a.sktr")), slurp(path("b.sktr")));
  EXPECT_NE(fields(a.out).at("digest"), fields(c.out).at("digest"));
}

TEST_F(Cli, TextAndBinaryTracesCarryTheSameKeys) {
  const auto a = sketchlab("generate --packets 300 --seed 2 -o " + path("a.sktr"));
  const auto b = sketchlab("generate --packets 300 --seed 2 --text -o " + path("a.txt"));
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_EQ(fields(a.out).at("digest"), fields(b.out).at("digest"));
  std::ifstream in(path("a.txt"));
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++lines;
  EXPECT_EQ(lines, 300);
}

TEST_F(Cli, UniformGeneration) {
  const auto r = sketchlab("generate --zipf 0 --flows 10 --packets 10000 -o " + path("u.txt") + " --text");
  ASSERT_EQ(r.code, 0) << r.out;
  std::map<std::string, int> seen;
  std::ifstream in(path("u.txt"));
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++seen[line];
  ASSERT_EQ(seen.size(), 10u);
  for (auto& [k, n] : seen) EXPECT_NEAR(n, 1000, 150) << k;
}

TEST_F(Cli, MissingOutputIsUsageError) {
  const auto r = sketchlab("generate --zipf 1.0");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("error: usage"), std::string::npos) << r.out;
  EXPECT_EQ(sketchlab("").code, 2);
  EXPECT_EQ(sketchlab("frobnicate").code, 2);
}

TEST_F(Cli, AttackPlanForLargeSketch) {
  const auto r = sketchlab("attack --width 155000 --fraction 0.5");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto f = fields(r.out);
  const double flows = std::stod(f.at("flows"));
  EXPECT_GT(flows, 1.07e5);
  EXPECT_LT(flows, 1.09e5);
  EXPECT_EQ(f.at("packets_per_flow"), "256");
  EXPECT_EQ(std::stoull(f.at("packets")), std::stoull(f.at("flows")) * 256);
}

TEST_F(Cli, AttackWithZeroFractionIsEmpty) {
  const auto r = sketchlab("attack --width 4096 --fraction 0 -o " + path("e.sktr"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(fields(r.out).at("packets"), "0");
  EXPECT_EQ(fs::file_size(path("e.sktr")), 8u);
}

TEST_F(Cli, FullCoverAttackNeedsHarmonicFlows) {
  const auto r = sketchlab("attack --width 1024 --fraction 1");
  ASSERT_EQ(r.code, 0) << r.out;
  double h = 0;
  for (int k = 1; k <= 1024; ++k) h += 1.0 / k;
  EXPECT_NEAR(std::stod(fields(r.out).at("expected_flows")), 1024 * h, 1e-6);
  EXPECT_EQ(std::stod(fields(r.out).at("flows")), std::ceil(1024 * h));
}

TEST_F(Cli, AttackTraceHasDistinctFlows) {
  const auto r = sketchlab("attack --width 64 --fraction 0.5 --packets-per-flow 4 --interleave round-robin --text -o " +
                           path("a.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto flows = std::stoul(fields(r.out).at("flows"));
  std::map<std::string, int> seen;
  std::ifstream in(path("a.txt"));
  std::string line;
  std::vector<std::string> order;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') {
      ++seen[line];
      order.push_back(line);
    }
  EXPECT_EQ(seen.size(), flows);
  for (auto& [k, n] : seen) EXPECT_EQ(n, 4);
  ASSERT_GE(order.size(), 2u * flows);
  EXPECT_EQ(order[0], order[flows]);  // round-robin revisits the first flow after one lap
}

TEST_F(Cli, TheoryCoupon) {
  auto r = sketchlab("theory coupon --w 155000 --fraction 0.5");
  ASSERT_EQ(r.code, 0) << r.out;
  const double e = std::stod(fields(r.out).at("expected_flows"));
  EXPECT_GT(e, 1.07e5);
  EXPECT_LT(e, 1.09e5);
  r = sketchlab("theory coupon --w 1 --fraction 1");
  EXPECT_EQ(std::stod(fields(r.out).at("expected_flows")), 1.0);
}

TEST_F(Cli, TheoryHyper) {
  const auto r = sketchlab("theory hyper --s1 2 --s2 2 --n 2");
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "i,pmf");
  std::map<int, double> pmf;
  while (std::getline(in, line) && line.find(',') != std::string::npos)
    pmf[std::stoi(line.substr(0, line.find(',')))] = std::stod(line.substr(line.find(',') + 1));
  ASSERT_EQ(pmf.size(), 3u);
  EXPECT_NEAR(pmf[0], 1.0 / 6, 1e-12);
  EXPECT_NEAR(pmf[1], 2.0 / 3, 1e-12);
  EXPECT_NEAR(pmf[2], 1.0 / 6, 1e-12);
  EXPECT_NEAR(std::stod(fields(r.out.substr(r.out.find("mean"))).at("mean")), 1.0, 1e-12);
}

TEST_F(Cli, TheoryHarmonic) {
  const auto r = sketchlab("theory harmonic --n 4");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(std::stod(fields(r.out).at("harmonic")), 25.0 / 12, 1e-12);
}

TEST_F(Cli, ErrorClassesAndExitCodes) {
  auto r = sketchlab("theory coupon --w 0 --fraction 0.5");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("error: config:"), std::string::npos) << r.out;

  r = sketchlab("run --trace " + path("missing.sktr") + " -o " + path("x.csv"));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("error: io:"), std::string::npos) << r.out;

  std::ofstream(path("bad.sktr")) << "NOPE";
  r = sketchlab("snapshot-info " + path("bad.sktr"));
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.out.find("error: format:"), std::string::npos) << r.out;

  r = sketchlab("run --zipf 1 --packets 10");
  EXPECT_EQ(r.code, 2);

  std::ofstream(path("c.json")) << R"({"bogus": 1})";
  r = sketchlab("run -c " + path("c.json") + " -o " + path("x.csv"));
  EXPECT_EQ(r.code, 3);
}

TEST_F(Cli, RunIsDeterministicAndTagsRows) {
  const std::string args = "run --width 256 --packets 20000 --flows 2000 --attack-fraction 0.3 "
                           "--interleave round-robin --snapshot-interval 5000 --seed 5 ";
  const auto a = sketchlab(args + "-o " + path("a.csv"));
  const auto b = sketchlab(args + "-o " + path("b.csv") + " --json-output " + path("b.json"));
  ASSERT_EQ(a.code, 0) << a.out;
  ASSERT_EQ(b.code, 0) << b.out;
  const auto csv = slurp(path("a.csv"));
  EXPECT_EQ(csv, slurp(path("b.csv")));
  EXPECT_TRUE(fs::exists(path("b.json")));
  const auto hash = fields(a.out).at("config_hash");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_NE(line.find("scheme"), std::string::npos);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(hash), std::string::npos) << line;
  }
  EXPECT_EQ(std::to_string(rows), fields(a.out).at("rows"));
}

TEST_F(Cli, SnapshotInfo) {
  const auto r = sketchlab("run --width 128 --packets 3000 --snapshot-interval 1000 --applications counters "
                           "--schemes sc-lsb -o " + path("r.csv") + " --snapshot-dir " + path("snaps"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto info = sketchlab("snapshot-info " + path("snaps/sc-lsb-3000.skt"));
  ASSERT_EQ(info.code, 0) << info.out;
  const auto f = fields(info.out);
  EXPECT_EQ(f.at("scheme"), "sc-lsb");
  EXPECT_EQ(f.at("width"), "128");
  EXPECT_EQ(f.at("rows"), "3");
  EXPECT_EQ(f.at("memory_bytes"), std::to_string(3 * 128 * 9 / 8));
}

TEST_F(Cli, BenchPrintsOneLinePerScheme) {
  const auto r = sketchlab("bench --packets 20000 --width 256 --runs 2");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("sc-lsb,20000,2,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("instant,20000,2,"), std::string::npos);
  EXPECT_NE(r.out.find("count-min,20000,2,"), std::string::npos);
}

}  // namespace
