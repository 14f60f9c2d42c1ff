#pragma once

// Passkey challenges chosen by coin tosses, and how much an eavesdropper
// learns over repeated logins.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "relcoin/bc_reductions.hpp"
#include "relcoin/canonical_json.hpp"
#include "relcoin/error.hpp"
#include "relcoin/random.hpp"

namespace relcoin::auth {

using bc::CoinTossBox;

struct AuthConfig {
  std::size_t N = 10;  // passkey length in digits
  std::size_t n = 3;   // digits challenged per login
  std::size_t alphabet = 10;

  // Logins require n < N; selection alone also allows n == N.
  void validate(bool allow_full = false) const {
    if (N < 1) throw ConfigError("auth: N must be >= 1");
    if (n < 1) throw ConfigError("auth: n must be >= 1");
    if (allow_full ? n > N : n >= N) {
      throw ConfigError("auth: n must be " + std::string(allow_full ? "<= N" : "< N") + " (n=" + std::to_string(n) +
                        ", N=" + std::to_string(N) + ")");
    }
    if (alphabet < 2) throw ConfigError("auth: alphabet must have at least 2 digits");
  }
};

// Uniform value in [0, bound) from coin bits, most significant first,
// rejecting out-of-range draws. Absent if the source aborts.
inline std::optional<std::size_t> uniform_below(std::size_t bound, CoinTossBox& source) {
  if (bound <= 1) return 0;
  unsigned bits = 0;
  while ((std::size_t{1} << bits) < bound) ++bits;
  for (;;) {
    std::size_t v = 0;
    for (unsigned i = 0; i < bits; ++i) {
      const auto b = source.toss();
      if (!b) return std::nullopt;
      v = (v << 1) | *b;
    }
    if (v < bound) return v;
  }
}

// n distinct sorted indices in [0, N), uniform over n-subsets, via a
// partial Fisher-Yates shuffle.
inline std::optional<std::vector<std::size_t>> select_digits(const AuthConfig& cfg, CoinTossBox& source) {
  cfg.validate(true);
  std::vector<std::size_t> perm(cfg.N);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const auto j = uniform_below(cfg.N - i, source);
    if (!j) return std::nullopt;
    std::swap(perm[i], perm[i + *j]);
  }
  std::vector<std::size_t> chosen(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cfg.n));
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

struct LeakageTrial {
  std::uint64_t trial = 0;
  std::size_t distinct = 0;
  bool impersonated = false;
};

struct LeakageReport {
  AuthConfig config;
  std::size_t logins = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double expected_distinct_revealed = 0.0;
  double distinct_stderr = 0.0;
  double impersonation_success_prob = 0.0;
  // N (1 - (1 - n/N)^k): each index is missed by a login with probability 1 - n/N.
  double analytic_expected_distinct = 0.0;
  std::vector<LeakageTrial> rows;  // filled when requested
};

using TossSourceFactory = std::function<std::unique_ptr<CoinTossBox>(std::uint64_t seed)>;

inline std::unique_ptr<CoinTossBox> ideal_source(std::uint64_t seed) {
  return std::make_unique<bc::IdealCoinTossBox>(seed);
}

// Monte Carlo over `trials` independent histories of k observed logins,
// then one fresh challenge. Logins and the fresh challenge draw from
// separate toss streams so results are monotone in k trial by trial.
inline LeakageReport simulate_eavesdropper(const AuthConfig& cfg, std::size_t k, std::uint64_t trials,
                                           std::uint64_t seed, unsigned threads = 1, bool keep_rows = false,
                                           const TossSourceFactory& factory = ideal_source) {
  cfg.validate();
  if (trials < 1) throw ConfigError("auth: trials must be >= 1");
  std::vector<LeakageTrial> rows(trials);
  auto work = [&](std::uint64_t begin, std::uint64_t step) {
    std::vector<char> known(cfg.N);
    for (std::uint64_t t = begin; t < trials; t += step) {
      const std::uint64_t ts = derive_trial_seed(seed, t);
      auto logins = factory(mix64(ts ^ 0x1));
      auto fresh = factory(mix64(ts ^ 0x2));
      std::fill(known.begin(), known.end(), 0);
      for (std::size_t login = 0; login < k; ++login) {
        const auto sel = select_digits(cfg, *logins);
        if (!sel) throw Error("auth: coin-toss source aborted during a login");
        for (const auto i : *sel) known[i] = 1;
      }
      const auto challenge = select_digits(cfg, *fresh);
      if (!challenge) throw Error("auth: coin-toss source aborted during a login");
      LeakageTrial& row = rows[t];
      row.trial = t;
      row.distinct = static_cast<std::size_t>(std::count(known.begin(), known.end(), 1));
      row.impersonated = std::all_of(challenge->begin(), challenge->end(), [&](std::size_t i) { return known[i]; });
    }
  };
  const auto workers = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, trials));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  LeakageReport rep;
  rep.config = cfg;
  rep.logins = k;
  rep.trials = trials;
  rep.seed = seed;
  std::uint64_t sum = 0, sum_sq = 0, hits = 0;
  for (const auto& r : rows) {
    sum += r.distinct;
    sum_sq += r.distinct * r.distinct;
    hits += r.impersonated;
  }
  const double n = static_cast<double>(trials);
  rep.expected_distinct_revealed = static_cast<double>(sum) / n;
  const double var = std::max(0.0, static_cast<double>(sum_sq) / n - rep.expected_distinct_revealed * rep.expected_distinct_revealed);
  rep.distinct_stderr = trials > 1 ? std::sqrt(var * n / (n - 1) / n) : 0.0;
  rep.impersonation_success_prob = static_cast<double>(hits) / n;
  const double miss = 1.0 - static_cast<double>(cfg.n) / static_cast<double>(cfg.N);
  rep.analytic_expected_distinct = static_cast<double>(cfg.N) * (1.0 - std::pow(miss, static_cast<double>(k)));
  if (keep_rows) rep.rows = std::move(rows);
  return rep;
}

inline AuthConfig auth_config_from_json(const nlohmann::json& j) {
  require_known_keys(j, {"N", "n", "alphabet"}, "auth config");
  AuthConfig c;
  try {
    c.N = j.value("N", c.N);
    c.n = j.value("n", c.n);
    c.alphabet = j.value("alphabet", c.alphabet);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("auth config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ojson to_json(const LeakageReport& r) {
  ojson j;
  j["N"] = r.config.N;
  j["n"] = r.config.n;
  j["alphabet"] = r.config.alphabet;
  j["logins"] = r.logins;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["expected_distinct_revealed"] = r.expected_distinct_revealed;
  j["distinct_stderr"] = r.distinct_stderr;
  j["analytic_expected_distinct"] = r.analytic_expected_distinct;
  j["impersonation_success_prob"] = r.impersonation_success_prob;
  return j;
}

inline std::string to_csv(const LeakageReport& r) {
  std::string out = "trial,distinct,impersonated\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.trial) + "," + std::to_string(row.distinct) + "," + (row.impersonated ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace relcoin::auth
