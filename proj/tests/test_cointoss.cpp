#include <gtest/gtest.h>

#include <cmath>

#include "relcoin/cointoss.hpp"

using namespace relcoin;
using namespace relcoin::cointoss;
namespace ct_detail = relcoin::cointoss::detail;

namespace {

const ScenarioConfig kScenario = ScenarioConfig::line(10, 1, 0.5);

BiasedBit fixed(int bit) { return BiasedBit{bit ? 1.0 : 0.0}; }

Outcome xor_oracle(int a, int b) { return a == b ? Outcome::Zero : Outcome::One; }

std::uint64_t seed_for(int a, int b) {
  for (std::uint64_t s = 0;; ++s) {
    const auto r = run_toss(kScenario, Honest{}, Honest{}, s).record;
    if (r.a_bit == a && r.b_bit == b) return s;
  }
}

}  // namespace

TEST(XorRule, AllFourBitPairs) {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const auto r = run_toss(kScenario, fixed(a), fixed(b), 1).record;
      ASSERT_TRUE(r.accepted());
      EXPECT_EQ(*r.a_bit, a);
      EXPECT_EQ(*r.b_bit, b);
      EXPECT_EQ(r.outcome, xor_oracle(a, b));
    }
  }
}

TEST(RunToss, HonestSeedsForEachPair) {
  EXPECT_EQ(run_toss(kScenario, Honest{}, Honest{}, seed_for(0, 0)).record.outcome, Outcome::Zero);
  EXPECT_EQ(run_toss(kScenario, Honest{}, Honest{}, seed_for(1, 0)).record.outcome, Outcome::One);
}

TEST(RunToss, HonestRecordTimings) {
  const auto res = run_toss(kScenario, Honest{}, Honest{}, 5);
  const auto& r = res.record;
  EXPECT_DOUBLE_EQ(r.a_send_time, 0.0);
  EXPECT_DOUBLE_EQ(r.b_send_time, 0.0);
  EXPECT_LT(r.a_recv_time, kScenario.delta);
  EXPECT_LT(r.b_recv_time, kScenario.delta);
  // Deciding needs the intra-party relay across the separation.
  EXPECT_GE(r.decided_at, kScenario.separation() - 2 * kScenario.delta);
  EXPECT_TRUE(res.transcript.terminated);
  EXPECT_TRUE(netsim::audit_causality(res.transcript).pass);
}

TEST(RunToss, HonestNeverAborts) {
  for (std::uint64_t s = 0; s < 2000; ++s) {
    ASSERT_TRUE(run_toss(kScenario, Honest{}, Honest{}, s).record.accepted()) << "seed " << s;
  }
}

TEST(RunToss, LateSenderIsRejected) {
  for (auto resp : {Response::Copy, Response::Invert}) {
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto bob = run_toss(kScenario, Honest{}, LateSender{resp}, s);
      EXPECT_EQ(bob.record.outcome, Outcome::Abort);
      EXPECT_EQ(bob.record.abort_reason, AbortReason::LateArrival);
      EXPECT_TRUE(netsim::audit_causality(bob.transcript).pass);
      const auto alice = run_toss(kScenario, LateSender{resp}, Honest{}, s);
      EXPECT_EQ(alice.record.abort_reason, AbortReason::LateArrival);
    }
  }
}

TEST(RunToss, DelayedDeliveryPastWindowIsLate) {
  const auto r = run_toss(kScenario, Honest{}, DelayedDelivery{kScenario.delta}, 3).record;
  EXPECT_EQ(r.abort_reason, AbortReason::LateArrival);
  const auto ok = run_toss(kScenario, Honest{}, DelayedDelivery{0.5 * kScenario.delta}, 3).record;
  EXPECT_TRUE(ok.accepted());
}

TEST(RunToss, DeterministicPerSeed) {
  for (std::uint64_t s : {1ull, 2ull, 1234ull}) {
    const auto a = run_toss(kScenario, BiasedBit{0.3}, Honest{}, s);
    const auto b = run_toss(kScenario, BiasedBit{0.3}, Honest{}, s);
    EXPECT_EQ(canonical_dump(netsim::to_json(a.transcript)), canonical_dump(netsim::to_json(b.transcript)));
  }
}

TEST(VerifyTiming, Examples) {
  CoinTossRecord r;
  r.a_send_time = r.b_send_time = 0.0;
  r.a_recv_time = r.b_recv_time = 0.5;
  EXPECT_TRUE(verify_timing(r, kScenario).accept);
  r.a_recv_time = kScenario.delta;
  auto v = verify_timing(r, kScenario);
  EXPECT_FALSE(v.accept);
  EXPECT_EQ(v.reason, AbortReason::LateArrival);
  r.a_recv_time = 0.5;
  r.a_send_time = -kScenario.delta / 10;
  v = verify_timing(r, kScenario);
  EXPECT_FALSE(v.accept);
  EXPECT_EQ(v.reason, AbortReason::EarlySend);
}

TEST(Judge, EarlySendCaughtByClaimedTimestamp) {
  // Strategy that sends early and reports its true emission time.
  DeterministicStrategy st{SendSlot::Early, {1, 1}, false, false};
  netsim::ProgramMap programs;
  ct_detail::install(programs, kScenario, Party::Alice, ct_detail::Behaviour{});
  ct_detail::install(programs, kScenario, Party::Bob, behaviour_of(st, kScenario));
  const auto t = netsim::run(kScenario, std::move(programs), 0, ct_detail::protocol_horizon(kScenario));
  EXPECT_EQ(judge(t, kScenario).abort_reason, AbortReason::EarlySend);
}

TEST(Judge, FlippedViewIsInconsistent) {
  DeterministicStrategy st{SendSlot::OnTime, {0, 0}, true, false};
  netsim::ProgramMap programs;
  ct_detail::install(programs, kScenario, Party::Alice, ct_detail::Behaviour{});
  ct_detail::install(programs, kScenario, Party::Bob, behaviour_of(st, kScenario));
  const auto t = netsim::run(kScenario, std::move(programs), 0, ct_detail::protocol_horizon(kScenario));
  EXPECT_EQ(judge(t, kScenario).abort_reason, AbortReason::Inconsistent);
}

TEST(Judge, NonBinaryPayloadIsMalformed) {
  netsim::ProgramMap programs;
  ct_detail::install(programs, kScenario, Party::Bob, ct_detail::Behaviour{});
  ct_detail::Behaviour bad;
  bad.fixed_value = 7;
  ct_detail::install(programs, kScenario, Party::Alice, bad);
  const auto t = netsim::run(kScenario, std::move(programs), 0, ct_detail::protocol_horizon(kScenario));
  EXPECT_EQ(judge(t, kScenario).abort_reason, AbortReason::Malformed);
}

TEST(Fairness, HonestWithinThreeSigma) {
  const auto res = fairness_experiment(kScenario, Honest{}, Honest{}, 20000, 42, 4);
  EXPECT_EQ(res.report.trials, 20000u);
  EXPECT_EQ(res.report.aborted, 0u);
  EXPECT_EQ(res.report.zeros + res.report.ones, res.report.accepted);
  EXPECT_NEAR(res.report.bias_bound_epsilon, 3 * 0.5 / std::sqrt(20000.0), 1e-15);
  EXPECT_LE(res.report.empirical_bias, res.report.bias_bound_epsilon);
  EXPECT_NEAR(res.report.confidence, 0.9973002039367398, 1e-12);
  EXPECT_LE(res.report.ci_low, 0.5);
  EXPECT_GE(res.report.ci_high, 0.5);
}

TEST(Fairness, ConstantBitIsMaskedByHonestPeer) {
  const auto res = fairness_experiment(kScenario, BiasedBit{1.0}, Honest{}, 20000, 9, 4);
  EXPECT_EQ(res.report.aborted, 0u);
  EXPECT_LE(res.report.empirical_bias, res.report.bias_bound_epsilon);
}

TEST(Fairness, ThreadCountDoesNotChangeRows) {
  const auto one = fairness_experiment(kScenario, Honest{}, Honest{}, 500, 3, 1);
  const auto many = fairness_experiment(kScenario, Honest{}, Honest{}, 500, 3, 7);
  EXPECT_EQ(to_csv(one.rows), to_csv(many.rows));
}

TEST(Fairness, SingleTrialAndZeroTrials) {
  std::uint64_t root = 0;
  for (;; ++root) {
    if (run_toss(kScenario, Honest{}, Honest{}, derive_trial_seed(root, 0)).record.outcome == Outcome::Zero) break;
  }
  const auto res = fairness_experiment(kScenario, Honest{}, Honest{}, 1, root);
  EXPECT_EQ(res.report.zeros, 1u);
  EXPECT_DOUBLE_EQ(res.report.empirical_bias, 0.5);
  EXPECT_THROW(fairness_experiment(kScenario, Honest{}, Honest{}, 0, 1), ConfigError);
}

TEST(Fairness, AbortsAreCountedSeparately) {
  const auto res = fairness_experiment(kScenario, Honest{}, LateSender{}, 300, 1, 2);
  EXPECT_EQ(res.report.aborted, 300u);
  EXPECT_EQ(res.report.accepted, 0u);
  EXPECT_EQ(res.report.aborts_by_reason.at("LateArrival"), 300u);
}

TEST(Exhaustive, OneBitEitherCheaterHasZeroAcceptedBias) {
  for (auto cheater : {Party::Alice, Party::Bob}) {
    const auto a = exhaustive_adversary_check(kScenario, cheater, 1);
    EXPECT_EQ(a.strategies, strategy_count(1));
    EXPECT_GT(a.accepted_strategies, 0u);
    EXPECT_EQ(a.max_bias, 0.0) << a.witness;
    // Informed strategies do bias the raw XOR, and are always rejected.
    EXPECT_GT(a.raw_biased_strategies, 0u);
    EXPECT_DOUBLE_EQ(a.max_raw_bias, 0.5);
    EXPECT_TRUE(a.all_biased_rejected);
  }
}

TEST(Exhaustive, TwoBitAlphabet) {
  const auto a = exhaustive_adversary_check(kScenario, Party::Bob, 2);
  EXPECT_EQ(a.strategies, strategy_count(2));
  EXPECT_EQ(a.max_bias, 0.0);
  EXPECT_TRUE(a.all_biased_rejected);
}

TEST(Exhaustive, BudgetAndRange) {
  EXPECT_THROW(enumerate_strategies(0), ConfigError);
  EXPECT_THROW(enumerate_strategies(9), ConfigError);
  EXPECT_THROW(enumerate_strategies(8), BudgetExceeded);
  EXPECT_THROW(enumerate_strategies(7), BudgetExceeded);
  EXPECT_NO_THROW(enumerate_strategies(6));
}

TEST(Csv, FixedColumns) {
  const auto res = fairness_experiment(kScenario, Honest{}, Honest{}, 3, 1);
  const auto csv = to_csv(res.rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n') + 1), "trial,seed,a,b,outcome,verdict\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}
