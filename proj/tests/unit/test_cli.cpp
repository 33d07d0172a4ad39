#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"

using namespace grwa;
namespace fs = std::filesystem;

namespace {

struct run_result {
  int status = -1;
  std::string output;
};

run_result run_cli(const std::string& args) {
  const std::string cmd = std::string(GRWA_CLI_PATH) + " " + args + " 2>&1";
  run_result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.output.append(buf, n);
  const int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("grwa_cli_test_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& text) {
    const auto p = dir_ / "scenario.toml";
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

constexpr const char* kScenario = R"(
delta = 0.5
lambda = 0.2
alpha_re = 2.0
measures = ["sigma_z", "entropy", "mandel"]
times = { start = 0.0, stop = 20.0, step = 5.0 }
[grid]
resolution = 24
theta_resolution = 64
)";

}  // namespace

TEST(CliConfig, ParseTimes) {
  EXPECT_EQ(cli::parse_times("0,1.5,3"), (std::vector<double>{0.0, 1.5, 3.0}));
  EXPECT_EQ(cli::parse_times("0:1:0.5"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_THROW(cli::parse_times("0:1"), error);
  EXPECT_THROW(cli::parse_times("1,x"), error);
}

TEST_F(CliTest, ParsesScenarioFile) {
  const auto c = cli::load_config(write_config(kScenario).string());
  EXPECT_DOUBLE_EQ(c.delta, 0.5);
  EXPECT_DOUBLE_EQ(c.lambda, 0.2);
  EXPECT_EQ(c.times, (std::vector<double>{0.0, 5.0, 10.0, 15.0, 20.0}));
  EXPECT_EQ(c.grid_resolution, 24);
  EXPECT_EQ(c.measures.size(), 3u);
  EXPECT_EQ(c.sign, bell_sign::minus);
}

TEST_F(CliTest, UnknownKeyIsConfigError) {
  try {
    cli::load_config(write_config("lambda = 0.1\nlamda = 0.2\n").string());
    FAIL() << "expected config error";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::config);
  }
  EXPECT_THROW(cli::load_config(write_config("[grid]\nresolutoin = 3\n").string()), error);
  EXPECT_THROW(cli::load_config(write_config("lambda = \n").string()), error);
}

TEST_F(CliTest, DigestIgnoresOutputAndThreads) {
  auto a = cli::load_config(write_config(kScenario).string());
  auto b = a;
  b.output_dir = "elsewhere";
  b.threads = 7;
  EXPECT_EQ(a.digest(), b.digest());
  b.lambda = 0.21;
  EXPECT_NE(a.digest(), b.digest());
}

TEST_F(CliTest, BadConfigReportsJsonOnStderr) {
  const auto cfg = write_config("lambda = -1.0\n");
  const auto r = run_cli("evolve --config " + cfg.string() + " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("{\"error\":{\"code\":"), std::string::npos) << r.output;
}

TEST_F(CliTest, OutputIndependentOfThreadCount) {
  const auto cfg = write_config(kScenario);
  for (const char* cmd : {"evolve", "scan", "wigner"}) {
    const auto a = run_cli(std::string(cmd) + " --config " + cfg.string() + " --threads 1 --out " + (dir_ / "t1").string());
    const auto b = run_cli(std::string(cmd) + " --config " + cfg.string() + " --threads 3 --out " + (dir_ / "t3").string());
    ASSERT_EQ(a.status, 0) << a.output;
    ASSERT_EQ(b.status, 0) << b.output;
  }
  int compared = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "t1")) {
    const auto other = dir_ / "t3" / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
    ++compared;
  }
  EXPECT_GE(compared, 3);
  const auto evolve = slurp(dir_ / "t1" / "evolve.csv");
  EXPECT_EQ(evolve.rfind("# {", 0), 0u);
  EXPECT_NE(evolve.find("time,rho_11,re_rho_12,im_rho_12,rho_22,sigma_z,entropy"), std::string::npos);
}

TEST_F(CliTest, CommandLineOverridesConfig) {
  const auto cfg = write_config(kScenario);
  const auto r = run_cli("evolve --config " + cfg.string() + " --times 0,1 --lambda 0.3 --out " + (dir_ / "o").string());
  ASSERT_EQ(r.status, 0) << r.output;
  const auto text = slurp(dir_ / "o" / "evolve.csv");
  std::size_t rows = 0;
  for (char ch : text) rows += ch == '\n';
  EXPECT_EQ(rows, 4u);  // header, column names, two samples
}
