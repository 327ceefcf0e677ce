#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "nrbridge/bridge.hpp"
#include "nrbridge/config.hpp"
#include "nrbridge/errors.hpp"
#include "nrbridge/sweep.hpp"

using namespace nrbridge;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSmallSweep = R"(
# small grid
[model]
eps_g = 0.0
temperature = 0.1

[sweep]
gamma_min = 0.01
gamma_max = 100
gamma_count = 9
e_nh = 1, 2
delta_mu = 0, 1

[solver]
tolerance = 1e-10
)";

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("nrbridge_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name, const std::string& content) const {
    std::ofstream(path_ / name) << content;
    return path_ / name;
  }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

int run(const std::string& args) {
  const std::string cmd = std::string(NRBRIDGE_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

}  // namespace

TEST(ConfigParser, EntriesAndComments) {
  const auto e = parse_config_entries("[a]\nx = 1 ; trailing\n# skip\n[b]\ny=two words\n");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].section, "a");
  EXPECT_EQ(e[0].value, "1");
  EXPECT_EQ(e[1].value, "two words");
  EXPECT_EQ(e[1].line, 5);
}

TEST(ConfigParser, Errors) {
  EXPECT_THROW(parse_config_entries("x = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_entries("[a]\nx = 1\nx = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_entries("[a\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_entries("[a]\nx\n"), ConfigError);
  EXPECT_THROW(parse_sweep_config("[model]\nfoo = 1\n"), ConfigError);
  EXPECT_THROW(parse_sweep_config("[extra]\nfoo = 1\n"), ConfigError);
  EXPECT_THROW(parse_sweep_config("[sweep]\ngamma_min = 0\n"), ConfigError);
  EXPECT_THROW(parse_sweep_config("[sweep]\ne_nh = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_sweep_config("[sweep]\ngamma_count = abc\n"), ConfigError);
  EXPECT_THROW(read_text_file("/nonexistent/nrbridge.ini"), ConfigError);
}

TEST(ConfigParser, SweepRoundTripIsIdempotent) {
  const SweepConfig a = parse_sweep_config(kSmallSweep);
  EXPECT_EQ(a.gamma.count, 9);
  EXPECT_EQ(a.e_nh, (std::vector<double>{1.0, 2.0}));
  const std::string once = serialize_sweep_config(a);
  const std::string twice = serialize_sweep_config(parse_sweep_config(once));
  EXPECT_EQ(once, twice);
  SweepConfig odd;
  odd.model.eps_g = 0.1;
  odd.model.temperature = 1.0 / 3.0;
  const SweepConfig back = parse_sweep_config(serialize_sweep_config(odd));
  EXPECT_EQ(back.model.eps_g, 0.1);
  EXPECT_EQ(back.model.temperature, 1.0 / 3.0);
}

TEST(ConfigParser, BridgeRoundTrip) {
  const BridgeInstance a = parse_bridge_config(
      "[bridge]\nregime = adiabatic\nt_eg = 0.5\nt_e5 = 1\ncavity_loss = 10\nfock_cutoff = 6\n");
  EXPECT_EQ(a.regime, BridgeRegime::kAdiabatic);
  EXPECT_EQ(a.fock_cutoff, 6);
  const BridgeInstance b = parse_bridge_config(serialize_bridge_config(a));
  EXPECT_EQ(serialize_bridge_config(a), serialize_bridge_config(b));
  EXPECT_THROW(parse_bridge_config("[bridge]\nregime = other\n"), ConfigError);
  EXPECT_THROW(parse_bridge_config("[bridge]\nregime = adiabatic\ncavity_loss = 1\n"), ConfigError);
}

TEST(GammaGrid, LogSpacedWithExactEnds) {
  const GammaGrid g{1e-3, 1e3, 7};
  const auto v = g.values();
  ASSERT_EQ(v.size(), 7u);
  EXPECT_EQ(v.front(), 1e-3);
  EXPECT_EQ(v.back(), 1e3);
  EXPECT_NEAR(v[3], 1.0, 1e-14);
}

TEST(Sweep, OrderingAndCsv) {
  const SweepConfig cfg = parse_sweep_config(kSmallSweep);
  const SweepResult r = run_sweep(cfg);
  ASSERT_EQ(r.records.size(), 9u * 2u * 2u);
  EXPECT_EQ(r.records[0].e_nh, 1.0);
  EXPECT_EQ(r.records[1].delta_mu, 1.0);
  EXPECT_EQ(r.records[2].e_nh, 2.0);
  EXPECT_EQ(r.records[4].gamma, cfg.gamma.values()[1]);
  EXPECT_EQ(r.curve(2.0, 1.0).size(), 9u);
  std::ostringstream os;
  write_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 36);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const SweepConfig cfg = parse_sweep_config(kSmallSweep);
  std::ostringstream a, b;
  write_csv(a, run_sweep(cfg, 1));
  write_csv(b, run_sweep(cfg, 3));
  EXPECT_EQ(a.str(), b.str());
}

TEST(ZenoPeak, SyntheticCurve) {
  const auto f = [](double g) { return g / ((1.0 + g) * (1.0 + g)); };
  std::vector<double> gs = GammaGrid{1e-3, 1e3, 13}.values(), vs;
  for (double g : gs) vs.push_back(f(g));
  const ZenoPeak p = find_zeno_peak(gs, vs, f);
  EXPECT_NEAR(p.gamma, 1.0, 1e-6);
  EXPECT_NEAR(p.loss_current, 0.25, 1e-12);
}

TEST(ZenoPeak, MonotoneCurveHasNoPeak) {
  const auto f = [](double g) { return g / (1.0 + g); };
  std::vector<double> gs = GammaGrid{1e-3, 1e3, 13}.values(), vs;
  for (double g : gs) vs.push_back(f(g));
  EXPECT_THROW(find_zeno_peak(gs, vs, f), NoPeakError);
  const std::vector<double> few(gs.begin(), gs.begin() + 5), fv(vs.begin(), vs.begin() + 5);
  EXPECT_THROW(find_zeno_peak(few, fv, f), NoPeakError);
}

TEST(ZenoPeak, CaptionCurve) {
  SweepConfig cfg;
  cfg.gamma = {1e-2, 1e2, 17};
  cfg.e_nh = {2.0};
  cfg.delta_mu = {0.0};
  const ZenoPeak p = find_zeno_peak(run_sweep(cfg), cfg, 2.0, 0.0);
  EXPECT_GT(p.gamma, 1e-2);
  EXPECT_LT(p.gamma, 1e2);
  EXPECT_GE(p.loss_current, loss_current(sweep_point_model(cfg.model, p.gamma * 1.01, 2.0, 0.0)));
  EXPECT_GE(p.loss_current, loss_current(sweep_point_model(cfg.model, p.gamma / 1.01, 2.0, 0.0)));
}

TEST(Binary, SweepIsByteIdentical) {
  TempDir dir;
  const fs::path cfg = dir.file("s.ini", kSmallSweep);
  ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + (dir / "a.csv").string()), 0);
  ASSERT_EQ(run("sweep --threads 2 --config " + cfg.string() + " --out " + (dir / "b.csv").string()), 0);
  const std::string a = slurp(dir / "a.csv");
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  EXPECT_EQ(a.substr(0, kCsvHeader.size()), kCsvHeader);
}

TEST(Binary, PeakWritesJson) {
  TempDir dir;
  const fs::path cfg = dir.file("s.ini", kSmallSweep);
  ASSERT_EQ(run("peak --e-nh 2 --delta-mu 0 --config " + cfg.string() + " --out " + (dir / "p.json").string()), 0);
  const auto j = nlohmann::json::parse(slurp(dir / "p.json"));
  ASSERT_TRUE(j.contains("peaks"));
  EXPECT_EQ(j["peaks"].size(), 1u);
}

TEST(Binary, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run("sweep --config " + dir.file("bad.ini", "[model]\nbogus = 1\n").string()), 2);
  EXPECT_EQ(run("sweep --config " + (dir / "missing.ini").string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("validate nosuchsuite --out " + (dir / "v.json").string()), 2);
  EXPECT_EQ(run("validate bridge --fock-cutoff 1 --out " + (dir / "v.json").string()), 3);
  const auto j = nlohmann::json::parse(slurp(dir / "v.json"));
  EXPECT_FALSE(j["passed"].get<bool>());
}

TEST(Binary, BridgeCommand) {
  TempDir dir;
  const fs::path cfg = dir.file("b.ini", "[bridge]\nregime = exact-quadratic\nt_eg = 0.5\ncavity_loss = 1\n");
  ASSERT_EQ(run("bridge --config " + cfg.string() + " --out " + (dir / "b.json").string()), 0);
  const auto j = nlohmann::json::parse(slurp(dir / "b.json"));
  EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(Binary, ValidateLindbladPasses) {
  TempDir dir;
  ASSERT_EQ(run("validate lindblad --out " + (dir / "v.json").string()), 0);
  const auto j = nlohmann::json::parse(slurp(dir / "v.json"));
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_GE(j["checks"].size(), 10u);
}

TEST(Binary, ValidateAllPasses) {
  TempDir dir;
  ASSERT_EQ(run("validate all --out " + (dir / "v.json").string()), 0);
  const auto j = nlohmann::json::parse(slurp(dir / "v.json"));
  EXPECT_GE(j["checks"].size(), 20u);
}
