#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "relcoin/cli.hpp"

using namespace relcoin;
namespace fs = std::filesystem;

namespace {

const std::string kSource = RELCOIN_SOURCE_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "relcoin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("relcoin_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json load(const fs::path& p) {
  std::ifstream f(p);
  return nlohmann::json::parse(f);
}

std::string bytes(const fs::path& p) { return cli::read_file(p.string()); }

std::string wrapper(const std::string& name) { return kSource + "/wrappers/" + name + ".json"; }

}  // namespace

TEST(CliCointoss, HonestReportWithinBound) {
  const auto dir = scratch("ct");
  const auto r = invoke({"cointoss", "--trials", "20000", "--seed", "42", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = load(dir / "cointoss_report.json");
  EXPECT_LE(j["report"]["empirical_bias"].get<double>(), j["report"]["bias_bound_epsilon"].get<double>());
  EXPECT_EQ(j["report"]["trials"], 20000);
  const auto csv = bytes(dir / "cointoss_trials.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "trial,seed,a,b,outcome,verdict");
}

TEST(CliCointoss, LateSenderAllLate) {
  const auto dir = scratch("late");
  const auto r = invoke({"cointoss", "--trials", "500", "--adversary", "late-sender", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = load(dir / "cointoss_report.json")["report"];
  EXPECT_EQ(j["aborted"], 500);
  EXPECT_EQ(j["aborts_by_reason"]["LateArrival"], 500);
}

TEST(CliCointoss, ConfigErrors) {
  const auto dir = scratch("bad");
  EXPECT_EQ(invoke({"cointoss", "--trials", "0", "--out", dir.string()}).code, 2);
  EXPECT_EQ(invoke({"cointoss", "--adversary", "teleporter", "--out", dir.string()}).code, 2);
  EXPECT_EQ(invoke({"cointoss", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"seed": 1, "colour": "red"})";
  const auto r = invoke({"cointoss", "--config", cfg.string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  std::ofstream(cfg) << R"({"scenario": {"site2": [3]}})";
  EXPECT_EQ(invoke({"cointoss", "--config", cfg.string(), "--out", dir.string()}).code, 2);
}

TEST(CliCointoss, FlagsOverrideConfig) {
  const auto dir = scratch("override");
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"trials": 7, "seed": 3, "adversary": "late-sender"})";
  ASSERT_EQ(invoke({"cointoss", "--config", cfg.string(), "--adversary", "honest", "--out", dir.string()}).code, 0);
  const auto j = load(dir / "cointoss_report.json");
  EXPECT_EQ(j["report"]["trials"], 7);
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["report"]["aborted"], 0);
}

TEST(CliCointoss, RuntimeErrorExitCode) {
  const auto dir = scratch("rt");
  std::ofstream(dir / "blocker") << "x";
  const auto r = invoke({"cointoss", "--trials", "3", "--out", (dir / "blocker" / "sub").string()});
  EXPECT_EQ(r.code, 3);
}

TEST(CliAttack, Examples) {
  const auto dir = scratch("attack");
  ASSERT_EQ(invoke({"attack", "--example", "bell-phase", "--out", dir.string()}).code, 0);
  auto j = load(dir / "attack_report.json")["report"];
  EXPECT_NEAR(j["bob_distinguishability"].get<double>(), 0, 1e-12);
  EXPECT_NEAR(j["alice_cheat_success"].get<double>(), 1, 1e-12);
  ASSERT_EQ(invoke({"attack", "--example", "orthogonal", "--out", dir.string()}).code, 0);
  j = load(dir / "attack_report.json")["report"];
  EXPECT_NEAR(j["bob_distinguishability"].get<double>(), 1, 1e-12);
  EXPECT_NEAR(j["alice_cheat_success"].get<double>(), 0, 1e-12);
  ASSERT_EQ(invoke({"attack", "--example", "random", "--verify-oracle", "--seed", "5", "--out", dir.string()}).code, 0);
  j = load(dir / "attack_report.json")["report"];
  EXPECT_LE(j["oracle_gap"].get<double>(), 1e-6);
  ASSERT_EQ(invoke({"attack", "--wrapper", wrapper("toy_toss"), "--verify-oracle", "--out", dir.string()}).code, 0);
  j = load(dir / "attack_report.json")["report"];
  EXPECT_TRUE(j["tradeoff_ok"].get<bool>());
}

TEST(CliAttack, StatesFile) {
  const auto dir = scratch("states");
  const auto f = dir / "s.json";
  std::ofstream(f) << R"({"psi0": {"dims": [2, 2], "amplitudes": [[1,0],[0,0],[0,0],[0,0]]},
                         "psi1": {"dims": [2, 2], "amplitudes": [[0,0],[1,0],[0,0],[0,0]]}, "split": 1})";
  ASSERT_EQ(invoke({"attack", "--states", f.string(), "--out", dir.string()}).code, 0);
  const auto j = load(dir / "attack_report.json")["report"];
  EXPECT_NEAR(j["bob_distinguishability"].get<double>(), 1, 1e-12);
  std::ofstream(f) << R"({"psi0": {"dims": [2], "amplitudes": [1, 0]}, "split": 1})";
  EXPECT_EQ(invoke({"attack", "--states", f.string(), "--out", dir.string()}).code, 2);
  std::ofstream(f) << "{ not json";
  EXPECT_EQ(invoke({"attack", "--states", f.string(), "--out", dir.string()}).code, 2);
  EXPECT_EQ(invoke({"attack", "--out", dir.string()}).code, 2);
}

TEST(CliBcDemo, ThreeWrappers) {
  const auto dir = scratch("bc");
  ASSERT_EQ(invoke({"bc-demo", "--wrapper", wrapper("clear_send"), "--out", dir.string()}).code, 0);
  auto j = load(dir / "bc_demo.json")["demonstration"]["attack"];
  EXPECT_NEAR(j["bob_distinguishability"].get<double>(), 1, 1e-12);
  ASSERT_EQ(invoke({"bc-demo", "--wrapper", wrapper("silent"), "--out", dir.string()}).code, 0);
  j = load(dir / "bc_demo.json")["demonstration"]["attack"];
  EXPECT_NEAR(j["alice_cheat_success"].get<double>(), 1, 1e-12);
  ASSERT_EQ(invoke({"bc-demo", "--wrapper", wrapper("toy_toss"), "--out", dir.string()}).code, 0);
  const auto demo = load(dir / "bc_demo.json")["demonstration"];
  EXPECT_TRUE(demo["attack"]["tradeoff_ok"].get<bool>());
  EXPECT_EQ(demo["tosses"].size(), 1u);
  EXPECT_TRUE(demo["tosses"][0].contains("consolidated"));
  const auto bad = dir / "w.json";
  std::ofstream(bad) << R"({"steps":[{"kind":"warp"}]})";
  EXPECT_EQ(invoke({"bc-demo", "--wrapper", bad.string(), "--out", dir.string()}).code, 2);
  EXPECT_EQ(invoke({"bc-demo", "--out", dir.string()}).code, 2);
}

TEST(CliAuth, Examples) {
  const auto dir = scratch("auth");
  ASSERT_EQ(invoke({"auth", "--digits", "10", "--reveal", "3", "--logins", "2", "--trials", "100000", "--out",
                    dir.string()})
                .code,
            0);
  auto j = load(dir / "auth_report.json")["report"];
  EXPECT_NEAR(j["expected_distinct_revealed"].get<double>(), 5.1, 0.1);
  ASSERT_EQ(invoke({"auth", "--logins", "0", "--trials", "100", "--out", dir.string()}).code, 0);
  j = load(dir / "auth_report.json")["report"];
  EXPECT_EQ(j["expected_distinct_revealed"].get<double>(), 0.0);
  EXPECT_EQ(j["impersonation_success_prob"].get<double>(), 0.0);
  EXPECT_EQ(invoke({"auth", "--digits", "10", "--reveal", "10", "--out", dir.string()}).code, 2);
}

TEST(CliDeterminism, SameSeedSameBytes) {
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> commands = {
      {{"cointoss", "--trials", "3000", "--seed", "9"}, {"cointoss_report.json", "cointoss_trials.csv"}},
      {{"attack", "--example", "random", "--verify-oracle", "--seed", "9"}, {"attack_report.json"}},
      {{"bc-demo", "--wrapper", wrapper("toy_toss"), "--seed", "9"}, {"bc_demo.json"}},
      {{"auth", "--trials", "5000", "--seed", "9"}, {"auth_report.json", "auth_trials.csv"}},
  };
  for (const auto& [args, files] : commands) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    auto run_in = [&](const fs::path& d) {
      auto full = args;
      full.push_back("--out");
      full.push_back(d.string());
      return invoke(full).code;
    };
    ASSERT_EQ(run_in(a), 0);
    ASSERT_EQ(run_in(b), 0);
    for (const auto& f : files) EXPECT_EQ(bytes(a / f), bytes(b / f)) << args[0] << " " << f;
  }
}
