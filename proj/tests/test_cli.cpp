#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result sqss(const std::string& args) {
  const std::string cmd = std::string(SQSS_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sqss_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, HelpListsFlags) {
  const auto r = sqss("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--n", "--L", "--seed", "--attack", "--trials", "--output", "--format",
                           "--jobs", "--config", "--inject-fault", "--colluders"})
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
}

TEST(Cli, RunSucceeds) {
  const auto r = sqss("run --n 2 --L 4 --seed 7");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("status: ok"), std::string::npos);
}

TEST(Cli, ExplicitSecretIsReconstructed) {
  const auto r = sqss("run --n 3 --L 3 --seed 1 --secret 0x7,0,5");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("reconstructed: 7,0,5"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(sqss("run --n 0").code, 2);
  EXPECT_EQ(sqss("run --bogus").code, 2);
  EXPECT_EQ(sqss("run --attack teleport").code, 2);
  EXPECT_EQ(sqss("run --n 2 --secret 9,9,9,9").code, 2);
  EXPECT_EQ(sqss("").code, 2);
}

TEST(Cli, AbortExitsThree) {
  bool saw_abort = false;
  for (int seed = 0; seed < 20 && !saw_abort; ++seed) {
    const auto r = sqss("run --attack measure-resend --seed " + std::to_string(seed));
    ASSERT_TRUE(r.code == 0 || r.code == 3) << r.code;
    saw_abort = r.code == 3;
  }
  EXPECT_TRUE(saw_abort);
}

TEST(Cli, UnwritableOutputExitsFour) {
  EXPECT_EQ(sqss("run --output /nonexistent-dir/out.csv").code, 4);
  EXPECT_EQ(sqss("efficiency --output /nonexistent-dir/eff.csv").code, 4);
  EXPECT_EQ(sqss("--config /nonexistent-dir/cfg.ini run").code, 4);
}

TEST(Cli, VerifyAndInjectedFault) {
  const auto ok = sqss("verify");
  EXPECT_EQ(ok.code, 0);
  const auto bad = sqss("verify --inject-fault");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("(i,j)=(1,1)"), std::string::npos) << bad.out;
}

TEST(Cli, EfficiencyTable) {
  const auto out = scratch("eff.csv");
  const auto r = sqss("efficiency --n 1..5 --output " + out.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("this_work 2 1/7"), std::string::npos);
  const auto csv = slurp(out);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "protocol,n,eta_num,eta_den");
}

TEST(Cli, SweepWithNoAttacksWritesHeaderOnly) {
  const auto out = scratch("empty.csv");
  const auto r = sqss("sweep --attacks '' --output " + out.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(slurp(out), "attack,n,L,trials,per_decoy_rate,abort_rate,ci_low,ci_high\n");
}

TEST(Cli, SweepJson) {
  const auto out = scratch("sweep.json");
  const auto r = sqss("sweep --attacks measure-resend,double-cnot --n 1..2 --L 2 --trials 50 --format json --output " +
                      out.string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(slurp(out));
  ASSERT_EQ(j.size(), 4U);
  EXPECT_EQ(j[0]["attack"], "measure-resend");
  EXPECT_EQ(j[0]["trials"], 50);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const auto cfg = scratch("run.ini");
  std::ofstream(cfg) << "n = 3\nL = 2\nseed = 11\nattack = none\n";
  const auto from_file = sqss("--config " + cfg.string() + " run");
  EXPECT_EQ(from_file.code, 0);
  EXPECT_NE(from_file.out.find("n: 3  L: 2  seed: 11"), std::string::npos) << from_file.out;
  const auto overridden = sqss("--config " + cfg.string() + " run --L 5");
  EXPECT_NE(overridden.out.find("n: 3  L: 5  seed: 11"), std::string::npos) << overridden.out;
}

TEST(Cli, TranscriptIsJsonLines) {
  const auto path = scratch("t.jsonl");
  ASSERT_EQ(sqss("run --n 2 --L 2 --seed 3 --transcript " + path.string()).code, 0);
  std::ifstream in(path);
  std::string line;
  std::size_t count = 0;
  std::uint64_t last = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"index", "sender", "receiver", "kind", "payload"})
      ASSERT_TRUE(j.contains(key)) << key << " in " << line;
    if (count > 0) {
      EXPECT_GT(j["index"].get<std::uint64_t>(), last);
    }
    last = j["index"].get<std::uint64_t>();
    ++count;
  }
  EXPECT_GT(count, 0U);
}

TEST(Cli, SameSeedSameBytes) {
  const auto a = scratch("det_a.csv"), b = scratch("det_b.csv");
  const std::string args = "sweep --attacks intercept-resend,em --n 2 --L 2 --trials 100 --seed 5 --output ";
  ASSERT_EQ(sqss(args + a.string()).code, 0);
  ASSERT_EQ(sqss(args + b.string() + " --jobs 3").code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}
