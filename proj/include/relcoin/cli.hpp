#pragma once

// Command-line experiment runner. Config file first, then flags.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "json.hpp"
#include "relcoin/authdemo.hpp"
#include "relcoin/bc_reductions.hpp"
#include "relcoin/canonical_json.hpp"
#include "relcoin/cointoss.hpp"
#include "relcoin/error.hpp"
#include "relcoin/quantum.hpp"
#include "relcoin/quantum_oracle.hpp"
#include "relcoin/spacetime.hpp"

namespace relcoin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct RunConfig {
  ScenarioConfig scenario;
  std::uint64_t seed = 42;
  std::uint64_t trials = 10000;
  std::string out = "out";
  std::string adversary = "honest";
  bool verify_oracle = false;
  bool csv = true;
  std::optional<std::string> wrapper;
  std::optional<std::string> states;
  std::string example;
  std::string ct_source = "relativistic";
  auth::AuthConfig auth;
  std::size_t logins = 2;
  unsigned threads = 1;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

inline void apply_config(RunConfig& rc, const nlohmann::json& j) {
  require_known_keys(j,
                     {"scenario", "seed", "trials", "out", "adversary", "verify_oracle", "csv", "wrapper", "states",
                      "example", "ct_source", "auth", "logins"},
                     "config");
  try {
    if (j.contains("scenario")) rc.scenario = scenario_from_json(j.at("scenario"));
    rc.seed = j.value("seed", rc.seed);
    rc.trials = j.value("trials", rc.trials);
    rc.out = j.value("out", rc.out);
    rc.adversary = j.value("adversary", rc.adversary);
    rc.verify_oracle = j.value("verify_oracle", rc.verify_oracle);
    rc.csv = j.value("csv", rc.csv);
    if (j.contains("wrapper")) rc.wrapper = j.at("wrapper").get<std::string>();
    if (j.contains("states")) rc.states = j.at("states").get<std::string>();
    rc.example = j.value("example", rc.example);
    rc.ct_source = j.value("ct_source", rc.ct_source);
    if (j.contains("auth")) rc.auth = auth::auth_config_from_json(j.at("auth"));
    rc.logins = j.value("logins", rc.logins);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RELCOIN_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::logic_error&) {
      throw ConfigError("RELCOIN_THREADS must be a positive integer");
    }
  }
  return n;
}

// name[:parameter]
inline std::pair<cointoss::AdversaryStrategy, cointoss::AdversaryStrategy> adversary_from_name(
    const std::string& spec, const ScenarioConfig& s) {
  using namespace cointoss;
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::optional<double> param;
  if (colon != std::string::npos) {
    try {
      param = std::stod(spec.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw ConfigError("adversary '" + spec + "': bad parameter");
    }
  }
  if (name == "honest") return {Honest{}, Honest{}};
  if (name == "late-sender") return {Honest{}, LateSender{Response::Copy}};
  if (name == "late-sender-invert") return {Honest{}, LateSender{Response::Invert}};
  if (name == "late-sender-alice") return {LateSender{Response::Copy}, Honest{}};
  if (name == "biased-bit") {
    const double p = param.value_or(1.0);
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("biased-bit probability must be in [0, 1]");
    return {BiasedBit{p}, Honest{}};
  }
  if (name == "delayed") {
    const double lag = param.value_or(s.delta);
    if (!(lag >= 0.0) || !std::isfinite(lag)) throw ConfigError("delayed lag must be finite and >= 0");
    return {Honest{}, DelayedDelivery{lag}};
  }
  throw ConfigError("unknown adversary '" + spec +
                    "' (honest, late-sender, late-sender-invert, late-sender-alice, biased-bit[:p], delayed[:lag])");
}

inline void write_artifact(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw Error("write failed for '" + path.string() + "'");
}

inline int cmd_cointoss(const RunConfig& rc, std::ostream& out) {
  if (rc.trials < 1) throw ConfigError("--trials must be >= 1");
  const auto [alice, bob] = adversary_from_name(rc.adversary, rc.scenario);
  const auto res = cointoss::fairness_experiment(rc.scenario, alice, bob, rc.trials, rc.seed, rc.threads);
  ojson j;
  j["command"] = "cointoss";
  j["seed"] = rc.seed;
  j["adversary"] = rc.adversary;
  j["alice_strategy"] = cointoss::describe(alice);
  j["bob_strategy"] = cointoss::describe(bob);
  j["scenario"] = to_json(rc.scenario);
  j["report"] = cointoss::to_json(res.report);
  const std::filesystem::path dir(rc.out);
  write_artifact(dir / "cointoss_report.json", canonical_dump(j));
  if (rc.csv) write_artifact(dir / "cointoss_trials.csv", cointoss::to_csv(res.rows));
  const auto& r = res.report;
  out << "cointoss: " << r.trials << " trials, " << r.accepted << " accepted (" << r.zeros << " zeros, " << r.ones
      << " ones), " << r.aborted << " aborted; bias " << format_double(r.empirical_bias) << " vs bound "
      << format_double(r.bias_bound_epsilon) << "\n";
  return kExitOk;
}

struct StatePair {
  quantum::PureState psi0;
  quantum::PureState psi1;
  std::size_t split;
  std::string label;
};

inline StatePair builtin_pair(const std::string& name, std::uint64_t seed) {
  using quantum::PureState;
  using quantum::Vector;
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "bell-phase") {
    Vector p(4), m(4);
    p << r, 0, 0, r;
    m << r, 0, 0, -r;
    return {PureState(p, {2, 2}), PureState(m, {2, 2}), 1, name};
  }
  if (name == "orthogonal") return {PureState::basis({2, 2}, {0, 0}), PureState::basis({2, 2}, {1, 1}), 1, name};
  if (name == "identical") {
    const auto s = PureState::basis({2, 2}, {0, 1});
    return {s, s, 1, name};
  }
  if (name == "random") {
    CounterRng rng(seed);
    auto a = quantum::random_state({2, 3}, rng);
    auto b = quantum::random_state({2, 3}, rng);
    return {a, b, 1, name};
  }
  throw ConfigError("unknown example '" + name + "' (bell-phase, orthogonal, identical, random)");
}

inline bc::Wrapper load_wrapper(const std::string& path) { return bc::wrapper_from_json(parse_json_file(path)); }

inline std::unique_ptr<bc::CoinTossBox> make_ct(const RunConfig& rc) {
  if (rc.ct_source == "relativistic") return std::make_unique<bc::RelativisticCoinTossBox>(rc.scenario, rc.seed);
  if (rc.ct_source == "ideal") return std::make_unique<bc::IdealCoinTossBox>(rc.seed);
  throw ConfigError("unknown ct_source '" + rc.ct_source + "' (relativistic, ideal)");
}

inline void attach_oracle(quantum::AttackReport& rep, const quantum::PureState& a, const quantum::PureState& b,
                          std::size_t split, std::uint64_t seed) {
  quantum::OracleOptions opt;
  opt.seed = seed;
  rep.oracle_value = quantum::optimal_cheat_oracle(a, b, split, opt);
  rep.oracle_gap = std::abs(*rep.oracle_value - rep.alice_cheat_success);
}

inline int cmd_attack(const RunConfig& rc, std::ostream& out) {
  ojson j;
  j["command"] = "attack";
  j["seed"] = rc.seed;
  quantum::AttackReport rep;
  if (rc.wrapper) {
    auto ct = make_ct(rc);
    const auto wrapper = load_wrapper(*rc.wrapper);
    const auto demo = bc::attempt_bc_from_ct(*ct, wrapper, rc.scenario);
    rep = demo.attack;
    if (rc.verify_oracle) attach_oracle(rep, *demo.committed_states[0], *demo.committed_states[1], demo.split, rc.seed);
    j["source"] = "wrapper:" + wrapper.name;
  } else {
    StatePair pair = [&] {
      if (rc.states) {
        const auto sj = parse_json_file(*rc.states);
        require_known_keys(sj, {"psi0", "psi1", "split"}, "states file");
        try {
          return StatePair{quantum::state_from_json(sj.at("psi0")), quantum::state_from_json(sj.at("psi1")),
                           sj.at("split").get<std::size_t>(), "file"};
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(std::string("states file: ") + e.what());
        }
      }
      if (rc.example.empty()) throw ConfigError("attack needs --states, --wrapper or --example");
      return builtin_pair(rc.example, rc.seed);
    }();
    rep = quantum::mlc_attack(pair.psi0, pair.psi1, pair.split);
    if (rc.verify_oracle) attach_oracle(rep, pair.psi0, pair.psi1, pair.split, rc.seed);
    j["source"] = pair.label == "file" ? "states:" + *rc.states : "example:" + pair.label;
  }
  j["report"] = quantum::to_json(rep);
  write_artifact(std::filesystem::path(rc.out) / "attack_report.json", canonical_dump(j));
  out << "attack: D=" << format_double(rep.bob_distinguishability) << " F=" << format_double(rep.alice_fidelity)
      << " cheat_success=" << format_double(rep.alice_cheat_success)
      << " tradeoff_ok=" << (rep.tradeoff_ok ? "true" : "false");
  if (rep.oracle_gap) out << " oracle_gap=" << format_double(*rep.oracle_gap);
  out << "\n";
  return kExitOk;
}

inline int cmd_bc_demo(const RunConfig& rc, std::ostream& out) {
  if (!rc.wrapper) throw ConfigError("bc-demo needs --wrapper");
  const auto wrapper = load_wrapper(*rc.wrapper);
  auto ct = make_ct(rc);
  auto demo = bc::attempt_bc_from_ct(*ct, wrapper, rc.scenario);
  if (rc.verify_oracle) {
    attach_oracle(demo.attack, *demo.committed_states[0], *demo.committed_states[1], demo.split, rc.seed);
  }
  ojson j;
  j["command"] = "bc-demo";
  j["seed"] = rc.seed;
  j["ct_source"] = rc.ct_source;
  j["scenario"] = to_json(rc.scenario);
  j["demonstration"] = bc::to_json(demo);
  write_artifact(std::filesystem::path(rc.out) / "bc_demo.json", canonical_dump(j));
  const auto& a = demo.attack;
  out << "bc-demo " << wrapper.name << ": D=" << format_double(a.bob_distinguishability)
      << " F=" << format_double(a.alice_fidelity) << " cheat_success=" << format_double(a.alice_cheat_success)
      << " tradeoff_ok=" << (a.tradeoff_ok ? "true" : "false") << "\n";
  return kExitOk;
}

inline int cmd_auth(const RunConfig& rc, std::ostream& out) {
  rc.auth.validate();
  const auto rep = auth::simulate_eavesdropper(rc.auth, rc.logins, rc.trials, rc.seed, rc.threads, rc.csv);
  ojson j;
  j["command"] = "auth";
  j["report"] = auth::to_json(rep);
  const std::filesystem::path dir(rc.out);
  write_artifact(dir / "auth_report.json", canonical_dump(j));
  if (rc.csv) write_artifact(dir / "auth_trials.csv", auth::to_csv(rep));
  out << "auth: N=" << rc.auth.N << " n=" << rc.auth.n << " k=" << rc.logins
      << " expected_distinct=" << format_double(rep.expected_distinct_revealed)
      << " impersonation=" << format_double(rep.impersonation_success_prob) << "\n";
  return kExitOk;
}

// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Relativistic coin tossing and commitment experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed, trials;
  std::optional<std::string> out_dir, adversary, wrapper, states, example, ct_source;
  std::optional<std::size_t> digits, reveal, logins;
  bool verify_oracle = false, no_csv = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--seed", seed, "root seed");
    sub->add_option("--out", out_dir, "artifact directory");
    sub->add_flag("--no-csv", no_csv, "skip per-trial CSV");
  };
  auto* ct = app.add_subcommand("cointoss", "run a batch of coin tosses and summarize fairness");
  common(ct);
  ct->add_option("--trials", trials, "number of tosses");
  ct->add_option("--adversary", adversary, "strategy name");

  auto* at = app.add_subcommand("attack", "run the commitment attack on a pair of states");
  common(at);
  at->add_option("--states", states, "JSON file with psi0, psi1, split");
  at->add_option("--example", example, "bell-phase, orthogonal, identical, random");
  at->add_option("--wrapper", wrapper, "wrapper JSON; attacks its committed states");
  at->add_option("--ct-source", ct_source, "relativistic or ideal");
  at->add_flag("--verify-oracle", verify_oracle, "cross-check with the numerical ascent");

  auto* bd = app.add_subcommand("bc-demo", "execute a commitment wrapper over coin tosses");
  common(bd);
  bd->add_option("--wrapper", wrapper, "wrapper JSON")->required();
  bd->add_option("--ct-source", ct_source, "relativistic or ideal");
  bd->add_flag("--verify-oracle", verify_oracle, "cross-check with the numerical ascent");

  auto* au = app.add_subcommand("auth", "eavesdropper leakage over passkey logins");
  common(au);
  au->add_option("--trials", trials, "Monte Carlo trials");
  au->add_option("--digits", digits, "passkey length N");
  au->add_option("--reveal", reveal, "digits challenged per login n");
  au->add_option("--logins", logins, "observed logins k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig rc;
    if (!config_path.empty()) apply_config(rc, parse_json_file(config_path));
    if (seed) rc.seed = *seed;
    if (trials) rc.trials = *trials;
    if (out_dir) rc.out = *out_dir;
    if (adversary) rc.adversary = *adversary;
    if (wrapper) rc.wrapper = *wrapper;
    if (states) rc.states = *states;
    if (example) rc.example = *example;
    if (ct_source) rc.ct_source = *ct_source;
    if (verify_oracle) rc.verify_oracle = true;
    if (no_csv) rc.csv = false;
    if (digits) rc.auth.N = *digits;
    if (reveal) rc.auth.n = *reveal;
    if (logins) rc.logins = *logins;
    rc.scenario.validate();
    rc.threads = worker_count();

    if (ct->parsed()) return cmd_cointoss(rc, out);
    if (at->parsed()) return cmd_attack(rc, out);
    if (bd->parsed()) return cmd_bc_demo(rc, out);
    if (au->parsed()) return cmd_auth(rc, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace relcoin::cli
