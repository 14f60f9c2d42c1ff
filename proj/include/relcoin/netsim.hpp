#pragma once

// Deterministic causal discrete-event simulator for the four-laboratory
// scenario: A1, B1 near site 1 and A2, B2 near site 2. Messages travel at
// most at signal speed; an agent only ever sees what has physically
// reached it.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "relcoin/canonical_json.hpp"
#include "relcoin/error.hpp"
#include "relcoin/random.hpp"
#include "relcoin/spacetime.hpp"

namespace relcoin::netsim {

enum class Party : std::uint8_t { Alice = 0, Bob = 1 };

constexpr Party other(Party p) noexcept { return p == Party::Alice ? Party::Bob : Party::Alice; }

inline std::string to_string(Party p) { return p == Party::Alice ? "alice" : "bob"; }

struct AgentId {
  Party party = Party::Alice;
  std::uint8_t index = 1;  // 1 or 2: which site the laboratory is near

  // Fixed total order A1 < A2 < B1 < B2, used for tie-breaking.
  constexpr int order() const noexcept { return static_cast<int>(party) * 2 + (index - 1); }
  constexpr auto operator<=>(const AgentId& o) const noexcept { return order() <=> o.order(); }
  constexpr bool operator==(const AgentId& o) const noexcept { return order() == o.order(); }

  std::string name() const { return std::string(party == Party::Alice ? "A" : "B") + char('0' + index); }
};

inline constexpr AgentId A1{Party::Alice, 1};
inline constexpr AgentId A2{Party::Alice, 2};
inline constexpr AgentId B1{Party::Bob, 1};
inline constexpr AgentId B2{Party::Bob, 2};
inline constexpr std::array<AgentId, 4> kAgents{A1, A2, B1, B2};

inline AgentId agent_from_name(const std::string& name) {
  for (const auto& a : kAgents) {
    if (a.name() == name) return a;
  }
  throw ConfigError("unknown agent '" + name + "'");
}

inline const Position& site_of(const ScenarioConfig& s, AgentId a) { return a.index == 1 ? s.site1 : s.site2; }

using Bytes = std::vector<std::uint8_t>;
using MessageId = std::uint64_t;

struct Message {
  MessageId id = 0;  // emission order within the run
  AgentId sender;
  AgentId receiver;
  Bytes payload;
  SpacetimePoint emission;
  SpacetimePoint reception;
};

// A decision record in an agent's local log. `inputs` names the messages
// the decision depended on.
struct LocalEvent {
  AgentId agent;
  double time = 0.0;
  std::string record;
  std::vector<MessageId> inputs;
};

struct Transcript {
  std::vector<Message> messages;  // sorted by reception time, then (sender, receiver, id)
  std::vector<LocalEvent> events;
  std::uint64_t seed = 0;
  // False when events were still pending at the horizon.
  bool terminated = true;

  const Message* find(MessageId id) const {
    for (const auto& m : messages) {
      if (m.id == id) return &m;
    }
    return nullptr;
  }

  std::vector<const Message*> between(AgentId from, AgentId to) const {
    std::vector<const Message*> out;
    for (const auto& m : messages) {
      if (m.sender == from && m.receiver == to) out.push_back(&m);
    }
    std::sort(out.begin(), out.end(), [](const Message* a, const Message* b) { return a->id < b->id; });
    return out;
  }

  std::vector<const LocalEvent*> events_of(AgentId agent) const {
    std::vector<const LocalEvent*> out;
    for (const auto& e : events) {
      if (e.agent == agent) out.push_back(&e);
    }
    return out;
  }
};

// Everything an agent program receives for one step, and nothing else.
struct StepInput {
  AgentId self;
  double now;
  const Position& position;
  std::span<const Message> delivered;
  CounterRng& rng;
};

struct Emit {
  AgentId to;
  Bytes payload;
  // Extra delay beyond light travel time; must be >= 0.
  double lag = 0.0;
  // Transmitter location inside the laboratory; defaults to the agent position.
  std::optional<Position> from = std::nullopt;
};

struct Note {
  std::string record;
  std::vector<MessageId> inputs;
};

struct Reaction {
  std::vector<Emit> emits;
  std::optional<double> wake_at;
  std::vector<Note> notes;
};

using StepFn = std::function<Reaction(const StepInput&)>;

// A deterministic decision procedure. Local state lives in the callable
// (typically a mutable lambda); `run` copies programs so each run starts
// from the same state.
struct AgentProgram {
  StepFn step;
  std::optional<double> first_wake;  // defaults to the scenario start time
  std::optional<Position> position;  // defaults to the agent's site
};

using ProgramMap = std::map<AgentId, AgentProgram>;

inline AgentProgram silent() {
  return {[](const StepInput&) { return Reaction{}; }, std::nullopt, std::nullopt};
}

inline ProgramMap all_silent() {
  ProgramMap m;
  for (const auto& a : kAgents) m[a] = silent();
  return m;
}

inline std::uint64_t derive_agent_seed(std::uint64_t root_seed, AgentId agent) noexcept {
  constexpr std::uint64_t kAgentSalt = 0xd1b54a32d192ed03ULL;
  return mix64(mix64(root_seed) ^ mix64(kAgentSalt + static_cast<std::uint64_t>(agent.order())));
}

struct RunLimits {
  std::size_t max_events = 1'000'000;
};

namespace detail {

constexpr double kPositionSlack = 1e-12;

inline void check_in_lab(const ScenarioConfig& s, AgentId a, const Position& p, const char* what) {
  if (p.size() != s.spatial_dim()) {
    throw PositionViolation(a.name() + ": " + what + " has wrong spatial dimension");
  }
  if (distance(p, site_of(s, a)) > s.delta + kPositionSlack) {
    throw PositionViolation(a.name() + ": " + what + " lies outside its delta-ball");
  }
}

struct Pending {
  double time;
  int agent_order;
  std::uint64_t seq;
  std::optional<std::size_t> message;  // index into the emitted list; empty for wakes

  bool operator>(const Pending& o) const {
    if (time != o.time) return time > o.time;
    if (agent_order != o.agent_order) return agent_order > o.agent_order;
    return seq > o.seq;
  }
};

}  // namespace detail

inline Transcript run(const ScenarioConfig& scenario, ProgramMap programs, std::uint64_t seed, double horizon,
                      RunLimits limits = {}) {
  scenario.validate();
  if (!std::isfinite(horizon)) throw ConfigError("run: horizon must be finite");
  for (const auto& a : kAgents) {
    if (!programs.contains(a)) throw ConfigError("run: no program for agent " + a.name());
  }

  std::array<Position, 4> positions;
  std::array<AgentProgram*, 4> agent_programs{};
  std::vector<CounterRng> rngs;
  rngs.reserve(4);
  for (const auto& a : kAgents) {
    auto& prog = programs.at(a);
    positions[a.order()] = prog.position.value_or(site_of(scenario, a));
    detail::check_in_lab(scenario, a, positions[a.order()], "laboratory position");
    agent_programs[a.order()] = &prog;
    rngs.emplace_back(derive_agent_seed(seed, a));
  }

  Transcript out;
  out.seed = seed;
  std::vector<Message> emitted;
  std::priority_queue<detail::Pending, std::vector<detail::Pending>, std::greater<>> queue;
  std::uint64_t seq = 0;

  for (const auto& a : kAgents) {
    const double wake = agent_programs[a.order()]->first_wake.value_or(scenario.start_time);
    queue.push({wake, a.order(), seq++, std::nullopt});
  }

  std::size_t processed = 0;
  while (!queue.empty() && queue.top().time <= horizon) {
    const detail::Pending head = queue.top();
    queue.pop();
    const AgentId self = kAgents[head.agent_order];

    // Batch every event for this agent at this instant into one step.
    std::vector<Message> delivered;
    auto take = [&](const detail::Pending& p) {
      if (p.message) delivered.push_back(emitted[*p.message]);
    };
    take(head);
    while (!queue.empty() && queue.top().time == head.time && queue.top().agent_order == head.agent_order) {
      take(queue.top());
      queue.pop();
    }
    if (++processed > limits.max_events) throw BudgetExceeded("run: event budget exhausted");

    auto& prog = *agent_programs[self.order()];
    if (!prog.step) continue;
    const StepInput input{self, head.time, positions[self.order()], delivered, rngs[self.order()]};
    Reaction reaction = prog.step(input);

    for (auto& note : reaction.notes) {
      out.events.push_back({self, head.time, std::move(note.record), std::move(note.inputs)});
    }
    for (auto& e : reaction.emits) {
      if (!(e.lag >= 0.0) || !std::isfinite(e.lag)) throw ConfigError(self.name() + ": emit lag must be >= 0");
      Position from = e.from.value_or(positions[self.order()]);
      detail::check_in_lab(scenario, self, from, "emission point");
      const Position& to_pos = positions[e.to.order()];
      Message m;
      m.id = emitted.size();
      m.sender = self;
      m.receiver = e.to;
      m.payload = std::move(e.payload);
      m.emission = {std::move(from), head.time};
      m.reception = {to_pos, earliest_arrival(m.emission, to_pos) + e.lag};
      queue.push({m.reception.time, e.to.order(), seq++, emitted.size()});
      emitted.push_back(std::move(m));
    }
    if (reaction.wake_at) {
      if (!(*reaction.wake_at >= head.time)) throw ConfigError(self.name() + ": cannot schedule a wake in the past");
      queue.push({*reaction.wake_at, self.order(), seq++, std::nullopt});
    }
  }
  out.terminated = queue.empty();

  for (auto& m : emitted) {
    if (m.reception.time <= horizon) out.messages.push_back(std::move(m));
  }
  std::sort(out.messages.begin(), out.messages.end(), [](const Message& a, const Message& b) {
    if (a.reception.time != b.reception.time) return a.reception.time < b.reception.time;
    if (a.sender != b.sender) return a.sender < b.sender;
    if (a.receiver != b.receiver) return a.receiver < b.receiver;
    return a.id < b.id;
  });
  return out;
}

// Pre-protocol liveness check at one site: the party's laboratory sends a
// challenge to the opponent's co-located laboratory and requires the reply
// within 2 delta. `responder` may sit anywhere in its ball and add lag.
struct ResponseTest {
  bool pass = false;
  double round_trip = 0.0;
  Transcript transcript;
};

inline ResponseTest response_test(const ScenarioConfig& s, AgentId challenger, std::optional<Position> responder_position = std::nullopt,
                                  double responder_lag = 0.0, std::uint64_t seed = 0) {
  const AgentId responder{challenger.party == Party::Alice ? Party::Bob : Party::Alice, challenger.index};
  ProgramMap programs = all_silent();
  programs[challenger] = {[responder, started = false](const StepInput&) mutable {
                            Reaction r;
                            if (!started) {
                              started = true;
                              r.emits.push_back({responder, Bytes{0x50}});
                            }
                            return r;
                          },
                          std::nullopt, std::nullopt};
  programs[responder] = {[challenger, responder_lag](const StepInput& in) {
                           Reaction r;
                           for (const auto& m : in.delivered) {
                             if (m.sender == challenger) r.emits.push_back({challenger, Bytes{0x51}, responder_lag});
                           }
                           return r;
                         },
                         std::nullopt, std::move(responder_position)};
  ResponseTest out;
  out.transcript = run(s, std::move(programs), seed, s.start_time + 4.0 * s.delta + responder_lag);
  const auto replies = out.transcript.between(responder, challenger);
  if (replies.empty()) {
    out.round_trip = std::numeric_limits<double>::infinity();
    return out;
  }
  out.round_trip = replies.front()->reception.time - s.start_time;
  out.pass = out.round_trip <= 2.0 * s.delta;
  return out;
}

struct AuditVerdict {
  bool pass = true;
  std::string detail;

  explicit operator bool() const { return pass; }
};

// Pass iff every message travels no faster than light and every logged
// decision cites only inputs available at that agent and time. On failure
// reports the earliest violating record.
inline AuditVerdict audit_causality(const Transcript& t) {
  std::optional<std::pair<double, std::string>> earliest;
  auto flag = [&](double time, std::string what) {
    if (!earliest || time < earliest->first) earliest.emplace(time, std::move(what));
  };

  std::map<MessageId, const Message*> by_id;
  for (const auto& m : t.messages) {
    by_id[m.id] = &m;
    bool ok = m.emission.position.size() == m.reception.position.size();
    if (ok) ok = causally_precedes(m.emission, m.reception);
    if (!ok) {
      flag(m.reception.time, "message " + std::to_string(m.id) + " " + m.sender.name() + "->" + m.receiver.name() +
                                 " received outside the emission light cone");
    }
  }
  for (const auto& e : t.events) {
    for (const MessageId id : e.inputs) {
      const auto it = by_id.find(id);
      std::string problem;
      if (it == by_id.end()) {
        problem = "cites unknown message " + std::to_string(id);
      } else {
        const Message& m = *it->second;
        const bool received = m.receiver == e.agent && m.reception.time <= e.time;
        const bool sent = m.sender == e.agent && m.emission.time <= e.time;
        if (!received && !sent) problem = "cites message " + std::to_string(id) + " not yet available";
      }
      if (!problem.empty()) flag(e.time, "event of " + e.agent.name() + " at t=" + format_double(e.time) + " " + problem);
    }
  }
  if (!earliest) return {};
  return {false, earliest->second};
}

inline std::string to_hex(const Bytes& b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(b.size() * 2);
  for (const auto byte : b) {
    s.push_back(kDigits[byte >> 4]);
    s.push_back(kDigits[byte & 0xf]);
  }
  return s;
}

inline Bytes from_hex(const std::string& s) {
  if (s.size() % 2 != 0) throw ConfigError("hex payload has odd length");
  auto nibble = [](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw ConfigError("invalid hex digit in payload");
  };
  Bytes b;
  for (std::size_t i = 0; i < s.size(); i += 2) b.push_back(static_cast<std::uint8_t>(nibble(s[i]) << 4 | nibble(s[i + 1])));
  return b;
}

inline ojson to_json(const Transcript& t) {
  ojson j;
  j["messages"] = ojson::array();
  for (const auto& m : t.messages) {
    ojson mj;
    mj["id"] = m.id;
    mj["sender"] = m.sender.name();
    mj["receiver"] = m.receiver.name();
    mj["payload"] = to_hex(m.payload);
    mj["emission"] = relcoin::to_json(m.emission);
    mj["reception"] = relcoin::to_json(m.reception);
    j["messages"].push_back(std::move(mj));
  }
  j["events"] = ojson::array();
  for (const auto& e : t.events) {
    ojson ej;
    ej["agent"] = e.agent.name();
    ej["time"] = e.time;
    ej["record"] = e.record;
    ej["inputs"] = e.inputs;
    j["events"].push_back(std::move(ej));
  }
  j["seed"] = t.seed;
  j["terminated"] = t.terminated;
  return j;
}

inline Transcript transcript_from_json(const nlohmann::json& j) {
  require_known_keys(j, {"messages", "events", "seed", "terminated"}, "transcript");
  Transcript t;
  try {
    for (const auto& mj : j.at("messages")) {
      require_known_keys(mj, {"id", "sender", "receiver", "payload", "emission", "reception"}, "message");
      Message m;
      m.id = mj.at("id").get<MessageId>();
      m.sender = agent_from_name(mj.at("sender").get<std::string>());
      m.receiver = agent_from_name(mj.at("receiver").get<std::string>());
      m.payload = from_hex(mj.at("payload").get<std::string>());
      m.emission = point_from_json(mj.at("emission"));
      m.reception = point_from_json(mj.at("reception"));
      t.messages.push_back(std::move(m));
    }
    for (const auto& ej : j.at("events")) {
      require_known_keys(ej, {"agent", "time", "record", "inputs"}, "event");
      t.events.push_back({agent_from_name(ej.at("agent").get<std::string>()), ej.at("time").get<double>(),
                          ej.at("record").get<std::string>(), ej.at("inputs").get<std::vector<MessageId>>()});
    }
    t.seed = j.at("seed").get<std::uint64_t>();
    t.terminated = j.value("terminated", true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("transcript: ") + e.what());
  }
  return t;
}

}  // namespace relcoin::netsim
