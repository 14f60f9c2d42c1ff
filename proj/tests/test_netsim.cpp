#include <gtest/gtest.h>

#include <set>

#include "relcoin/cointoss.hpp"
#include "relcoin/netsim.hpp"

using namespace relcoin;
using namespace relcoin::netsim;

namespace {

const ScenarioConfig kScenario = ScenarioConfig::line(10, 1, 0.5);

// Emits `count` random messages at random times from random points in its ball.
AgentProgram chatter(int count, double span, double delta) {
  return {[count, span, delta, sent = 0](const StepInput& in) mutable {
            Reaction r;
            if (sent < count) {
              ++sent;
              const AgentId to = kAgents[in.rng.below(4)];
              Position from = in.position;
              from[0] += (in.rng.uniform() * 2 - 1) * delta * 0.999;
              Note note{"echo", {}};
              for (const auto& m : in.delivered) note.inputs.push_back(m.id);
              r.notes.push_back(note);
              r.emits.push_back({to, Bytes{static_cast<std::uint8_t>(in.rng.below(256))}, in.rng.uniform(), from});
              r.wake_at = in.now + in.rng.uniform() * span;
            }
            return r;
          },
          std::nullopt, std::nullopt};
}

ProgramMap random_programs(std::uint64_t salt) {
  ProgramMap m;
  for (const auto& a : kAgents) m[a] = chatter(3 + static_cast<int>((salt + a.order()) % 4), 5.0, kScenario.delta);
  return m;
}

}  // namespace

TEST(Run, AllSilentGivesNoMessages) {
  const auto t = run(kScenario, all_silent(), 1, 100);
  EXPECT_TRUE(t.messages.empty());
  EXPECT_TRUE(t.terminated);
}

TEST(Run, LightSpeedDelivery) {
  ProgramMap m = all_silent();
  m[A1] = {[done = false](const StepInput&) mutable {
             Reaction r;
             if (!done) r.emits.push_back({B2, Bytes{0x01}});
             done = true;
             return r;
           },
           std::nullopt, std::nullopt};
  const auto t = run(kScenario, m, 1, 100);
  ASSERT_EQ(t.messages.size(), 1u);
  EXPECT_DOUBLE_EQ(t.messages[0].emission.time, 0.0);
  EXPECT_DOUBLE_EQ(t.messages[0].reception.time, 10.0);
  EXPECT_EQ(t.messages[0].reception.position, kScenario.site2);
}

TEST(Run, SameInputsGiveByteIdenticalTranscripts) {
  for (std::uint64_t seed : {0ull, 7ull, 99ull}) {
    const auto a = canonical_dump(to_json(run(kScenario, random_programs(seed), seed, 40)));
    const auto b = canonical_dump(to_json(run(kScenario, random_programs(seed), seed, 40)));
    EXPECT_EQ(a, b);
  }
  const auto a = canonical_dump(to_json(run(kScenario, random_programs(1), 1, 40)));
  const auto b = canonical_dump(to_json(run(kScenario, random_programs(1), 2, 40)));
  EXPECT_NE(a, b);
}

TEST(Run, PositionOutsideBallNamesTheAgent) {
  ProgramMap m = all_silent();
  m[B1] = {silent().step, std::nullopt, Position{1.5}};
  try {
    run(kScenario, m, 0, 10);
    FAIL() << "expected a position violation";
  } catch (const PositionViolation& e) {
    EXPECT_NE(std::string(e.what()).find("B1"), std::string::npos);
  }

  ProgramMap e = all_silent();
  e[A2] = {[](const StepInput&) {
             Reaction r;
             r.emits.push_back({B2, Bytes{0}, 0.0, Position{10 + 2.0}});
             return r;
           },
           std::nullopt, std::nullopt};
  try {
    run(kScenario, e, 0, 10);
    FAIL() << "expected a position violation";
  } catch (const PositionViolation& err) {
    EXPECT_NE(std::string(err.what()).find("A2"), std::string::npos);
  }
}

TEST(Run, MissingProgramAndBadHorizonAreConfigErrors) {
  ProgramMap m = all_silent();
  m.erase(B2);
  EXPECT_THROW(run(kScenario, m, 0, 10), ConfigError);
  EXPECT_THROW(run(kScenario, all_silent(), 0, std::numeric_limits<double>::infinity()), ConfigError);
}

TEST(Run, TranscriptOrderingAndTies) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto t = run(kScenario, random_programs(seed), seed, 60);
    for (std::size_t i = 1; i < t.messages.size(); ++i) {
      const auto &p = t.messages[i - 1], &q = t.messages[i];
      ASSERT_LE(p.reception.time, q.reception.time);
      if (p.reception.time == q.reception.time) {
        ASSERT_TRUE(p.sender < q.sender || (p.sender == q.sender && p.receiver <= q.receiver));
      }
    }
  }
}

TEST(Run, SimultaneousEventsFollowAgentOrder) {
  std::vector<std::string> order;
  ProgramMap m;
  for (const auto& a : kAgents) {
    m[a] = {[a, &order](const StepInput&) {
              order.push_back(a.name());
              return Reaction{};
            },
            std::nullopt, std::nullopt};
  }
  run(kScenario, m, 0, 1);
  EXPECT_EQ(order, (std::vector<std::string>{"A1", "A2", "B1", "B2"}));
}

TEST(Audit, SimulatorTranscriptsAlwaysPass) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto t = run(kScenario, random_programs(seed), seed, 50);
    const auto v = audit_causality(t);
    ASSERT_TRUE(v.pass) << v.detail;
  }
}

TEST(Audit, SurgeryIsCaught) {
  const auto honest = cointoss::run_toss(kScenario, cointoss::Honest{}, cointoss::Honest{}, 3).transcript;
  ASSERT_TRUE(audit_causality(honest).pass);

  auto early = honest;
  early.messages[2].reception.time = early.messages[2].emission.time + 0.5 * distance(early.messages[2].emission.position, early.messages[2].reception.position) - 0.1;
  EXPECT_FALSE(audit_causality(early).pass);

  // A2 decides before the message it cites has reached it.
  auto premature = honest;
  auto it = std::find_if(premature.events.begin(), premature.events.end(),
                         [](const LocalEvent& e) { return e.agent == A2 && !e.inputs.empty(); });
  ASSERT_NE(it, premature.events.end());
  it->time = premature.find(it->inputs.front())->reception.time - 1e-3;
  const auto v = audit_causality(premature);
  EXPECT_FALSE(v.pass);
  EXPECT_NE(v.detail.find("A2"), std::string::npos);

  // B2 cites a message addressed to somebody else.
  auto foreign = honest;
  const auto a_bit = foreign.between(A1, B1).front()->id;
  for (auto& e : foreign.events) {
    if (e.agent == B2) {
      e.inputs.push_back(a_bit);
      e.time = 100;
      break;
    }
  }
  EXPECT_FALSE(audit_causality(foreign).pass);
}

TEST(Audit, ReportsEarliestViolation) {
  Transcript t;
  Message m1{0, A1, B2, {1}, {{0}, 0}, {{10}, 5}};
  Message m2{1, A2, B1, {1}, {{10}, 0}, {{0}, 3}};
  t.messages = {m2, m1};
  const auto v = audit_causality(t);
  EXPECT_FALSE(v.pass);
  EXPECT_NE(v.detail.find("A2"), std::string::npos);
}

TEST(AgentSeeds, DeterministicAndDistinct) {
  EXPECT_EQ(derive_agent_seed(5, A1), derive_agent_seed(5, A1));
  EXPECT_NE(derive_agent_seed(5, A1), derive_agent_seed(5, B2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    for (const auto& a : kAgents) seen.insert(derive_agent_seed(s, a));
  }
  EXPECT_EQ(seen.size(), 40000u);
  // Frozen from an independent big-integer evaluation of the derivation.
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafull);
  EXPECT_EQ(mix64(1), 0x910a2dec89025cc1ull);
  EXPECT_EQ(derive_agent_seed(0, A1), 0x9a80e645e28eaa64ull);
  EXPECT_EQ(derive_agent_seed(42, B2), 0x369a7f9cf2e98419ull);
}

// A far laboratory cannot learn a bit emitted at the other site before
// light from that site reaches it; its early output is constant.
TEST(AdversaryClosure, CannotConditionOnUndepartedInformation) {
  std::set<int> outputs;
  for (std::uint8_t a = 0; a < 2; ++a) {
    ProgramMap m = all_silent();
    m[A1] = {[a, done = false](const StepInput&) mutable {
               Reaction r;
               if (!done) r.emits.push_back({B1, Bytes{a}});
               done = true;
               return r;
             },
             std::nullopt, std::nullopt};
    // B1 forwards everything to B2 as fast as possible.
    m[B1] = {[](const StepInput& in) {
               Reaction r;
               for (const auto& msg : in.delivered) r.emits.push_back({B2, msg.payload});
               return r;
             },
             std::nullopt, std::nullopt};
    // B2 tries to echo a at t + delta, well before t + separation.
    m[B2] = {[](const StepInput& in) {
               Reaction r;
               if (in.now == 1.0) {
                 int guess = 0;
                 for (const auto& msg : in.delivered) guess = msg.payload.at(0);
                 r.notes.push_back({"guess=" + std::to_string(guess), {}});
               } else if (in.now == 0.0) {
                 r.wake_at = 1.0;
               }
               return r;
             },
             std::nullopt, std::nullopt};
    const auto t = run(kScenario, m, 0, 30);
    ASSERT_TRUE(audit_causality(t).pass);
    for (const auto& e : t.events) {
      if (e.agent == B2) outputs.insert(e.record.back() - '0');
    }
  }
  EXPECT_EQ(outputs, (std::set<int>{0}));
}

TEST(Json, TranscriptRoundTrip) {
  const auto t = cointoss::run_toss(kScenario, cointoss::Honest{}, cointoss::Honest{}, 11).transcript;
  const auto text = canonical_dump(to_json(t));
  const auto back = transcript_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(canonical_dump(to_json(back)), text);
  EXPECT_EQ(back.seed, 11u);
  EXPECT_NE(text.find("\"messages\""), std::string::npos);
  EXPECT_LT(text.find("\"messages\""), text.find("\"events\""));
  EXPECT_LT(text.find("\"events\""), text.find("\"seed\""));
}

TEST(ResponseTest, CoLocatedLaboratoriesReplyWithinTwoDelta) {
  for (const auto& challenger : {A1, A2, B1, B2}) {
    const auto r = response_test(kScenario, challenger);
    EXPECT_TRUE(r.pass);
    EXPECT_DOUBLE_EQ(r.round_trip, 0.0);
  }
  // Responder at the far edge of its ball, no lag: exactly 2 delta.
  const auto edge = response_test(kScenario, A1, Position{-1.0});
  EXPECT_TRUE(edge.pass);
  EXPECT_DOUBLE_EQ(edge.round_trip, 2.0);
  const auto slow = response_test(kScenario, A1, Position{-0.5}, 1.5);
  EXPECT_FALSE(slow.pass);
}
