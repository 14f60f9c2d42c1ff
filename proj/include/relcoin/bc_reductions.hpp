#pragma once

// Reductions between coin tossing and bit commitment:
//  - a coin toss built on a commitment box (commit, guess, unveil);
//  - consolidation of a four-laboratory transcript into a two-principal
//    instance once each party gathers everything at one laboratory;
//  - purification of random choices into quantum dice;
//  - execution of finite commitment wrappers over a coin-toss box, with
//    the committed pure states handed to the cheating attack.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relcoin/canonical_json.hpp"
#include "relcoin/cointoss.hpp"
#include "relcoin/error.hpp"
#include "relcoin/netsim.hpp"
#include "relcoin/quantum.hpp"
#include "relcoin/random.hpp"
#include "relcoin/spacetime.hpp"

namespace relcoin::bc {

using Bit = std::uint8_t;
using netsim::AgentId;
using netsim::Bytes;
using netsim::MessageId;
using netsim::Party;
using quantum::PureState;

// ---------------------------------------------------------------------------
// Commitment boxes

struct CommitToken {
  std::uint64_t id = 0;
};

class BitCommitmentBox {
 public:
  virtual ~BitCommitmentBox() = default;
  virtual CommitToken commit(Bit bit) = 0;
  // The value the box opens the token to.
  virtual Bit unveil(const CommitToken& token) const = 0;
  // Whether Bob accepts `claimed` as the opening of `token`.
  virtual bool verify(const CommitToken& token, Bit claimed) const = 0;
  virtual double concealing_epsilon() const = 0;
  virtual double binding_epsilon() const = 0;
};

class IdealCommitmentBox : public BitCommitmentBox {
 public:
  CommitToken commit(Bit bit) override {
    bits_.push_back(bit & 1);
    return {bits_.size() - 1};
  }
  Bit unveil(const CommitToken& token) const override { return bits_.at(token.id); }
  bool verify(const CommitToken& token, Bit claimed) const override { return claimed == bits_.at(token.id); }
  double concealing_epsilon() const override { return 0.0; }
  double binding_epsilon() const override { return 0.0; }

 private:
  std::vector<Bit> bits_;
};

// Accepts any claimed opening: concealing but not binding at all.
class NonBindingBox : public IdealCommitmentBox {
 public:
  bool verify(const CommitToken&, Bit) const override { return true; }
  double binding_epsilon() const override { return 1.0; }
};

using BitSource = std::function<Bit()>;
// Alice's claimed opening given her committed bit and Bob's guess.
using RevealPolicy = std::function<Bit(Bit committed, Bit guess)>;

inline Bit honest_reveal(Bit committed, Bit) { return committed; }

struct CtFromBcResult {
  Bit committed = 0;
  Bit guess = 0;
  Bit revealed = 0;
  std::optional<Bit> outcome;  // absent when Alice's opening is rejected
  bool alice_flagged = false;
};

// Alice commits c; Bob guesses g; Alice unveils. Outcome 0 iff g == c.
inline CtFromBcResult ct_from_bc(BitCommitmentBox& box, const BitSource& alice_bit, const BitSource& bob_guess,
                                 const RevealPolicy& reveal = honest_reveal) {
  CtFromBcResult r;
  r.committed = alice_bit() & 1;
  const CommitToken token = box.commit(r.committed);
  r.guess = bob_guess() & 1;
  r.revealed = reveal(r.committed, r.guess) & 1;
  if (!box.verify(token, r.revealed)) {
    r.alice_flagged = true;
    return r;
  }
  r.outcome = r.guess == r.revealed ? 0 : 1;
  return r;
}

// ---------------------------------------------------------------------------
// Coin-toss boxes

class CoinTossBox {
 public:
  virtual ~CoinTossBox() = default;
  // Absent when the toss aborts.
  virtual std::optional<Bit> toss() = 0;
  virtual double bias_bound() const = 0;
};

class IdealCoinTossBox : public CoinTossBox {
 public:
  explicit IdealCoinTossBox(std::uint64_t seed) : rng_(seed) {}
  std::optional<Bit> toss() override { return static_cast<Bit>(rng_.bit()); }
  double bias_bound() const override { return 0.0; }

 private:
  CounterRng rng_;
};

// Replays a fixed bit stream; aborts once it runs out.
class ScriptedCoinTossBox : public CoinTossBox {
 public:
  explicit ScriptedCoinTossBox(std::vector<Bit> bits) : bits_(std::move(bits)) {}
  std::optional<Bit> toss() override {
    if (next_ >= bits_.size()) return std::nullopt;
    return bits_[next_++] & 1;
  }
  double bias_bound() const override { return 0.0; }
  std::size_t consumed() const { return next_; }

 private:
  std::vector<Bit> bits_;
  std::size_t next_ = 0;
};

// Each toss is one relativistic protocol run with a derived seed.
class RelativisticCoinTossBox : public CoinTossBox {
 public:
  RelativisticCoinTossBox(ScenarioConfig scenario, std::uint64_t root_seed,
                          cointoss::AdversaryStrategy alice = cointoss::Honest{},
                          cointoss::AdversaryStrategy bob = cointoss::Honest{})
      : scenario_(std::move(scenario)), root_seed_(root_seed), alice_(std::move(alice)), bob_(std::move(bob)) {
    scenario_.validate();
  }

  std::optional<Bit> toss() override {
    const std::uint64_t seed = derive_trial_seed(root_seed_, history_.size());
    history_.push_back(cointoss::run_toss(scenario_, alice_, bob_, seed));
    const auto& rec = history_.back().record;
    if (!rec.accepted()) return std::nullopt;
    return static_cast<Bit>(rec.outcome_bit());
  }
  double bias_bound() const override { return 0.0; }

  const std::vector<cointoss::TossResult>& history() const { return history_; }
  const ScenarioConfig& scenario() const { return scenario_; }

 private:
  ScenarioConfig scenario_;
  std::uint64_t root_seed_;
  cointoss::AdversaryStrategy alice_;
  cointoss::AdversaryStrategy bob_;
  std::vector<cointoss::TossResult> history_;
};

// ---------------------------------------------------------------------------
// Consolidation

enum class ItemRole { Sent, Received, Internal };

inline std::string to_string(ItemRole r) {
  switch (r) {
    case ItemRole::Sent: return "sent";
    case ItemRole::Received: return "received";
    case ItemRole::Internal: return "internal";
  }
  return "?";
}

struct DataItem {
  MessageId id = 0;
  ItemRole role = ItemRole::Internal;
  AgentId sender;
  AgentId receiver;
  Bytes payload;
  double emitted = 0.0;
  double received = 0.0;

  friend bool operator==(const DataItem& a, const DataItem& b) {
    return a.id == b.id && a.role == b.role && a.sender == b.sender && a.receiver == b.receiver &&
           a.payload == b.payload && a.emitted == b.emitted && a.received == b.received;
  }
};

struct PrincipalData {
  std::vector<DataItem> items;  // in message-id order
  std::vector<netsim::LocalEvent> log;

  friend bool operator==(const PrincipalData& a, const PrincipalData& b) {
    if (a.items != b.items || a.log.size() != b.log.size()) return false;
    for (std::size_t i = 0; i < a.log.size(); ++i) {
      const auto &x = a.log[i], &y = b.log[i];
      if (!(x.agent == y.agent) || x.time != y.time || x.record != y.record || x.inputs != y.inputs) return false;
    }
    return true;
  }
};

// A message between the two principals, in declared order.
struct PrincipalMessage {
  Party from = Party::Alice;
  Party to = Party::Bob;
  Bytes payload;
  MessageId source = 0;
};

struct StandardProtocolInstance {
  std::vector<PrincipalMessage> messages;
  std::array<PrincipalData, 2> data;  // indexed by Party
  // Post-protocol transfers A2 -> A1 and B2 -> B1.
  std::vector<netsim::Message> transfers;
  double consolidated_at = 0.0;
  std::optional<PureState> joint_state;
  std::size_t split = 0;
  std::vector<std::string> subsystem_labels;

  const PrincipalData& of(Party p) const { return data[static_cast<std::size_t>(p)]; }
};

// Gathers each party's data at its laboratory near site 1. Every
// message appears once in the blob of each principal it involves.
inline StandardProtocolInstance consolidate(const netsim::Transcript& t, const ScenarioConfig& s) {
  if (!t.terminated) throw Error("consolidate: transcript has pending events");
  StandardProtocolInstance inst;
  std::vector<const netsim::Message*> ordered;
  for (const auto& m : t.messages) ordered.push_back(&m);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return a->id < b->id; });

  double end = s.start_time;
  MessageId next_id = 0;
  for (const auto* m : ordered) {
    end = std::max(end, m->reception.time);
    next_id = std::max(next_id, m->id + 1);
    const Party from = m->sender.party;
    const Party to = m->receiver.party;
    DataItem item{m->id, ItemRole::Internal, m->sender, m->receiver, m->payload, m->emission.time, m->reception.time};
    if (from == to) {
      inst.data[static_cast<std::size_t>(from)].items.push_back(item);
    } else {
      item.role = ItemRole::Sent;
      inst.data[static_cast<std::size_t>(from)].items.push_back(item);
      item.role = ItemRole::Received;
      inst.data[static_cast<std::size_t>(to)].items.push_back(item);
      inst.messages.push_back({from, to, m->payload, m->id});
    }
  }
  for (const auto& e : t.events) {
    end = std::max(end, e.time);
    inst.data[static_cast<std::size_t>(e.agent.party)].log.push_back(e);
  }

  // Transfers start as soon as the protocol is over.
  for (const Party p : {Party::Alice, Party::Bob}) {
    const AgentId from{p, 2};
    const AgentId to{p, 1};
    Bytes bundle;
    for (const auto& item : inst.data[static_cast<std::size_t>(p)].items) {
      if (item.sender == from || item.receiver == from) bundle.insert(bundle.end(), item.payload.begin(), item.payload.end());
    }
    netsim::Message transfer;
    transfer.id = next_id++;
    transfer.sender = from;
    transfer.receiver = to;
    transfer.payload = std::move(bundle);
    transfer.emission = {netsim::site_of(s, from), end};
    transfer.reception = {netsim::site_of(s, to), earliest_arrival(transfer.emission, netsim::site_of(s, to))};
    inst.consolidated_at = std::max(inst.consolidated_at, transfer.reception.time);
    inst.transfers.push_back(std::move(transfer));
  }
  return inst;
}

inline StandardProtocolInstance consolidate(const netsim::Transcript& t, const ScenarioConfig& s, PureState joint,
                                            std::size_t split, std::vector<std::string> labels) {
  StandardProtocolInstance inst = consolidate(t, s);
  if (split < 1 || split >= joint.subsystems()) throw DimensionMismatch("consolidate: invalid split");
  if (labels.size() != joint.subsystems()) throw DimensionMismatch("consolidate: one label per subsystem");
  inst.joint_state = std::move(joint);
  inst.split = split;
  inst.subsystem_labels = std::move(labels);
  return inst;
}

// Replays the principal-level message sequence between two standard
// parties starting from their internal data; returns the final data.
inline std::array<std::vector<DataItem>, 2> replay_standard(const StandardProtocolInstance& inst) {
  std::array<std::vector<DataItem>, 2> held;
  for (const Party p : {Party::Alice, Party::Bob}) {
    for (const auto& item : inst.of(p).items) {
      if (item.role == ItemRole::Internal) held[static_cast<std::size_t>(p)].push_back(item);
    }
  }
  // Timing metadata travels with the sender's copy.
  std::map<MessageId, const DataItem*> sender_copy;
  for (const Party p : {Party::Alice, Party::Bob}) {
    for (const auto& item : inst.of(p).items) {
      if (item.role == ItemRole::Sent) sender_copy[item.id] = &item;
    }
  }
  for (const auto& m : inst.messages) {
    const auto it = sender_copy.find(m.source);
    if (it == sender_copy.end()) throw Error("replay: message without a sender record");
    DataItem item = *it->second;
    item.payload = m.payload;
    held[static_cast<std::size_t>(m.from)].push_back(item);
    item.role = ItemRole::Received;
    held[static_cast<std::size_t>(m.to)].push_back(item);
  }
  for (auto& h : held) {
    std::stable_sort(h.begin(), h.end(), [](const DataItem& a, const DataItem& b) { return a.id < b.id; });
  }
  return held;
}

// ---------------------------------------------------------------------------
// Quantum dice

struct DiceSpec {
  std::vector<double> probabilities;
  bool shared = false;  // one die per site, perfectly correlated

  static DiceSpec uniform(std::size_t n, bool shared = false) {
    return {std::vector<double>(n, 1.0 / static_cast<double>(n)), shared};
  }
};

// Amplitude sqrt(p_i) on |i> (or |i>|i> when shared), so measuring in the
// computational basis reproduces p_i.
inline PureState purify_choice(const DiceSpec& spec) {
  const auto& p = spec.probabilities;
  if (p.empty()) throw ConfigError("dice: no outcomes");
  double sum = 0.0;
  for (const double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("dice: probabilities must be finite and nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("dice: probabilities must sum to 1");
  const auto n = static_cast<Eigen::Index>(p.size());
  if (!spec.shared) {
    quantum::Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = std::sqrt(p[static_cast<std::size_t>(i)]);
    return PureState::normalized(std::move(v), {p.size()});
  }
  quantum::Vector v = quantum::Vector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v[i * n + i] = std::sqrt(p[static_cast<std::size_t>(i)]);
  return PureState::normalized(std::move(v), {p.size(), p.size()});
}

// The honest toss with both dice kept quantum: A1 holds a, A2 its copy of
// b, B1 its copy of a, B2 holds b. Subsystem order (A1, A2, B1, B2).
inline PureState purified_cointoss_state() {
  const PureState a_die = purify_choice(DiceSpec::uniform(2, true));  // (A1, B1)
  const PureState b_die = purify_choice(DiceSpec::uniform(2, true));  // (B2, A2)
  return quantum::permute(quantum::tensor(a_die, b_die), {0, 3, 1, 2});
}

// ---------------------------------------------------------------------------
// Finite commitment wrappers over a coin-toss box

enum class StepKind { PartyMessage, CoinToss, QuantumMessage };
enum class Direction { AliceToBob, BobToAlice };

// Terms name sender-held bits: "commit", "toss:K", "msg:K", "const:0|1".
// A value or basis is the XOR of its terms.
struct WrapperStep {
  StepKind kind = StepKind::CoinToss;
  Direction direction = Direction::AliceToBob;
  std::vector<std::string> value;
  std::vector<std::string> basis;  // quantum messages only: Hadamard applied iff XOR is 1
  std::optional<AgentId> from_agent;
  std::optional<AgentId> to_agent;
  std::optional<double> max_latency;
};

struct Wrapper {
  std::string name;
  std::vector<WrapperStep> steps;
};

struct WrapperLimits {
  std::size_t max_tosses = 4;
  std::size_t max_messages = 6;
  std::size_t max_registers = 12;
};

struct Register {
  std::string label;
  Party owner;
};

struct SampleMessage {
  std::size_t step = 0;
  std::string kind;
  AgentId from;
  AgentId to;
  int value = 0;  // classical value, or the encoded value of a quantum message
  int basis = 0;
  double sent = 0.0;
  double received = 0.0;
};

struct DemonstrationRecord {
  std::string wrapper;
  std::vector<Bit> toss_values;
  std::vector<cointoss::CoinTossRecord> toss_records;
  std::vector<StandardProtocolInstance> consolidated_tosses;
  std::vector<Register> registers;  // final order: Alice's first
  std::size_t split = 0;
  std::array<std::vector<SampleMessage>, 2> sample_runs;  // per committed bit
  std::array<std::optional<PureState>, 2> committed_states;
  quantum::AttackReport attack;
};

namespace detail {

inline Party sender_party(Direction d) { return d == Direction::AliceToBob ? Party::Alice : Party::Bob; }

struct Term {
  enum Kind { Commit, Toss, Msg, Const } kind;
  std::size_t index = 0;
};

inline Term parse_term(const std::string& s) {
  auto number = [&](std::size_t prefix) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(s.substr(prefix), &used);
      if (used != s.size() - prefix) throw ConfigError("wrapper: bad term '" + s + "'");
      return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
      throw ConfigError("wrapper: bad term '" + s + "'");
    }
  };
  if (s == "commit") return {Term::Commit};
  if (s.rfind("toss:", 0) == 0) return {Term::Toss, number(5)};
  if (s.rfind("msg:", 0) == 0) return {Term::Msg, number(4)};
  if (s == "const:0") return {Term::Const, 0};
  if (s == "const:1") return {Term::Const, 1};
  throw ConfigError("wrapper: unknown term '" + s + "'");
}

// Qubit-register machine executing a wrapper for one committed bit.
class Machine {
 public:
  Machine(Bit commit, const std::vector<Bit>& toss_values) : commit_(commit), toss_values_(toss_values) {}

  std::size_t add(const PureState& s, std::vector<Register> regs) {
    const std::size_t first = regs_.size();
    state_ = state_ ? quantum::tensor(*state_, s) : s;
    for (auto& r : regs) regs_.push_back(std::move(r));
    return first;
  }

  void coin_toss() {
    const std::size_t k = tosses_.size();
    const std::size_t first = add(purify_choice(DiceSpec::uniform(2, true)),
                                  {{"toss" + std::to_string(k) + ".A", Party::Alice},
                                   {"toss" + std::to_string(k) + ".B", Party::Bob}});
    tosses_.push_back({first, first + 1});
  }

  // Register held by `who` carrying the term, or a classical constant.
  std::variant<std::size_t, int> resolve(const Term& t, Party who) const {
    switch (t.kind) {
      case Term::Commit:
        if (who != Party::Alice) throw ConfigError("wrapper: only Alice holds the committed bit");
        return int(commit_);
      case Term::Const:
        return int(t.index);
      case Term::Toss:
        if (t.index >= tosses_.size()) throw ConfigError("wrapper: toss referenced before it happens");
        return who == Party::Alice ? tosses_[t.index][0] : tosses_[t.index][1];
      case Term::Msg:
        if (t.index >= messages_.size()) throw ConfigError("wrapper: message referenced before it is sent");
        if (regs_[messages_[t.index][0]].owner == who) return messages_[t.index][0];
        return messages_[t.index][1];
    }
    return 0;
  }

  // XOR of terms into each target register.
  void encode(const std::vector<std::string>& terms, Party who, const std::vector<std::size_t>& targets) {
    for (const auto& text : terms) {
      const auto src = resolve(parse_term(text), who);
      for (const auto target : targets) {
        if (const auto* reg = std::get_if<std::size_t>(&src)) {
          state_ = quantum::apply(*state_, quantum::gates::cnot(), {*reg, target});
        } else if (std::get<int>(src) & 1) {
          state_ = quantum::apply(*state_, quantum::gates::pauli_x(), {target});
        }
      }
    }
  }

  // Classical value of the XOR of terms under the sample toss values.
  int classical(const std::vector<std::string>& terms, Party who) const {
    int v = 0;
    for (const auto& text : terms) {
      const Term t = parse_term(text);
      (void)resolve(t, who);  // validates access
      switch (t.kind) {
        case Term::Commit: v ^= commit_; break;
        case Term::Const: v ^= int(t.index); break;
        case Term::Toss: v ^= t.index < toss_values_.size() ? toss_values_[t.index] : 0; break;
        case Term::Msg: v ^= message_values_.at(t.index); break;
      }
    }
    return v & 1;
  }

  int party_message(const WrapperStep& step) {
    const Party from = sender_party(step.direction);
    const int value = classical(step.value, from);
    const std::size_t m = messages_.size();
    const std::size_t first = add(PureState::basis({2, 2}, {0, 0}),
                                  {{"msg" + std::to_string(m) + ".sent", from},
                                   {"msg" + std::to_string(m) + ".recv", netsim::other(from)}});
    encode(step.value, from, {first, first + 1});
    messages_.push_back({first, first + 1});
    message_values_.push_back(value);
    return value;
  }

  std::pair<int, int> quantum_message(const WrapperStep& step) {
    const Party from = sender_party(step.direction);
    const int value = classical(step.value, from);
    const int basis = classical(step.basis, from);
    const std::size_t q = qubits_++;
    const std::size_t reg = add(PureState::basis({2}, {0}), {{"qmsg" + std::to_string(q), from}});
    encode(step.value, from, {reg});
    for (const auto& text : step.basis) {
      const auto src = resolve(parse_term(text), from);
      if (const auto* ctl = std::get_if<std::size_t>(&src)) {
        state_ = quantum::apply(*state_, quantum::gates::controlled(quantum::gates::hadamard()), {*ctl, reg});
      } else if (std::get<int>(src) & 1) {
        state_ = quantum::apply(*state_, quantum::gates::hadamard(), {reg});
      }
    }
    regs_[reg].owner = netsim::other(from);
    return {value, basis};
  }

  // Final state with Alice's registers first; each side gets at least one.
  std::pair<PureState, std::size_t> finish() {
    for (const Party p : {Party::Alice, Party::Bob}) {
      const bool any = std::any_of(regs_.begin(), regs_.end(), [&](const Register& r) { return r.owner == p; });
      if (!any) add(PureState::basis({2}, {0}), {{p == Party::Alice ? "pad.A" : "pad.B", p}});
    }
    std::vector<std::size_t> order;
    for (const Party p : {Party::Alice, Party::Bob}) {
      for (std::size_t i = 0; i < regs_.size(); ++i) {
        if (regs_[i].owner == p) order.push_back(i);
      }
    }
    std::vector<Register> sorted;
    std::size_t split = 0;
    for (const auto i : order) {
      sorted.push_back(regs_[i]);
      split += regs_[i].owner == Party::Alice;
    }
    regs_ = std::move(sorted);
    return {quantum::permute(*state_, order), split};
  }

  const std::vector<Register>& registers() const { return regs_; }
  std::size_t register_count() const { return regs_.size(); }

 private:
  Bit commit_;
  std::vector<Bit> toss_values_;
  std::optional<PureState> state_;
  std::vector<Register> regs_;
  std::vector<std::array<std::size_t, 2>> tosses_;    // (Alice copy, Bob copy)
  std::vector<std::array<std::size_t, 2>> messages_;  // (sender copy, receiver copy)
  std::vector<int> message_values_;
  std::size_t qubits_ = 0;
};

inline std::size_t registers_needed(const Wrapper& w) {
  std::size_t n = 0;
  for (const auto& s : w.steps) n += s.kind == StepKind::QuantumMessage ? 1 : 2;
  return n + 2;  // possible padding
}

}  // namespace detail

inline void validate(const Wrapper& w, const ScenarioConfig& s, const WrapperLimits& limits = {}) {
  std::size_t tosses = 0, messages = 0;
  for (const auto& step : w.steps) {
    if (step.kind == StepKind::CoinToss) {
      ++tosses;
      continue;
    }
    ++messages;
    const Party from = detail::sender_party(step.direction);
    const AgentId src = step.from_agent.value_or(from == Party::Alice ? netsim::A1 : netsim::B2);
    const AgentId dst = step.to_agent.value_or(from == Party::Alice ? netsim::B2 : netsim::A1);
    if (src.party != from || dst.party != netsim::other(from)) {
      throw ConfigError("wrapper '" + w.name + "': message endpoints " + src.name() + "->" + dst.name() +
                        " do not match its direction");
    }
    if (step.max_latency) {
      const double travel = distance(netsim::site_of(s, src), netsim::site_of(s, dst));
      if (travel > *step.max_latency) {
        throw ConfigError("wrapper '" + w.name + "': message " + src.name() + "->" + dst.name() +
                          " cannot arrive within max_latency " + format_double(*step.max_latency) +
                          " (light travel " + format_double(travel) + ")");
      }
    }
    if (step.value.empty() && step.kind == StepKind::PartyMessage) {
      throw ConfigError("wrapper '" + w.name + "': party message needs a value (use const:0 for a blank)");
    }
  }
  if (tosses > limits.max_tosses) throw ConfigError("wrapper '" + w.name + "': too many coin tosses");
  if (messages > limits.max_messages) throw ConfigError("wrapper '" + w.name + "': too many messages");
  if (detail::registers_needed(w) > limits.max_registers) throw ConfigError("wrapper '" + w.name + "': too many registers");
}

// Runs the wrapper in the relativistic scenario: every coin toss is drawn
// from `ct`, every message is routed between site laboratories (A1 and B2
// by default). Both commitments are then executed with all randomness
// purified and the resulting pair of pure states is attacked.
inline DemonstrationRecord attempt_bc_from_ct(CoinTossBox& ct, const Wrapper& w, const ScenarioConfig& scenario,
                                              const WrapperLimits& limits = {}) {
  scenario.validate();
  validate(w, scenario, limits);
  DemonstrationRecord rec;
  rec.wrapper = w.name;

  for (const auto& step : w.steps) {
    if (step.kind != StepKind::CoinToss) continue;
    const auto bit = ct.toss();
    if (!bit) throw Error("wrapper '" + w.name + "': coin toss aborted");
    rec.toss_values.push_back(*bit);
  }
  if (auto* rel = dynamic_cast<RelativisticCoinTossBox*>(&ct)) {
    const auto& hist = rel->history();
    for (std::size_t i = hist.size() - rec.toss_values.size(); i < hist.size(); ++i) {
      rec.toss_records.push_back(hist[i].record);
      rec.consolidated_tosses.push_back(consolidate(hist[i].transcript, rel->scenario()));
    }
  }

  for (Bit c = 0; c < 2; ++c) {
    detail::Machine machine(c, rec.toss_values);
    double clock = scenario.start_time;
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
      const auto& step = w.steps[i];
      if (step.kind == StepKind::CoinToss) {
        machine.coin_toss();
        continue;
      }
      const Party from = detail::sender_party(step.direction);
      SampleMessage sm;
      sm.step = i;
      sm.from = step.from_agent.value_or(from == Party::Alice ? netsim::A1 : netsim::B2);
      sm.to = step.to_agent.value_or(from == Party::Alice ? netsim::B2 : netsim::A1);
      if (step.kind == StepKind::PartyMessage) {
        sm.kind = "party_message";
        sm.value = machine.party_message(step);
      } else {
        sm.kind = "quantum_message";
        std::tie(sm.value, sm.basis) = machine.quantum_message(step);
      }
      // Message i+1 leaves only after message i has arrived.
      sm.sent = clock;
      sm.received = clock + distance(netsim::site_of(scenario, sm.from), netsim::site_of(scenario, sm.to));
      clock = sm.received;
      rec.sample_runs[c].push_back(sm);
    }
    auto [state, split] = machine.finish();
    rec.registers = machine.registers();
    rec.split = split;
    rec.committed_states[c] = std::move(state);
  }
  rec.attack = quantum::mlc_attack(*rec.committed_states[0], *rec.committed_states[1], rec.split);
  return rec;
}

// ---------------------------------------------------------------------------
// JSON

inline Wrapper wrapper_from_json(const nlohmann::json& j) {
  require_known_keys(j, {"name", "steps"}, "wrapper");
  Wrapper w;
  try {
    w.name = j.value("name", std::string("unnamed"));
    for (const auto& sj : j.at("steps")) {
      require_known_keys(sj, {"kind", "direction", "value", "basis", "from_agent", "to_agent", "max_latency"},
                         "wrapper step");
      WrapperStep s;
      const auto kind = sj.at("kind").get<std::string>();
      if (kind == "coin_toss") {
        s.kind = StepKind::CoinToss;
      } else if (kind == "party_message") {
        s.kind = StepKind::PartyMessage;
      } else if (kind == "quantum_message") {
        s.kind = StepKind::QuantumMessage;
      } else {
        throw ConfigError("wrapper step: unknown kind '" + kind + "'");
      }
      if (s.kind != StepKind::CoinToss) {
        const auto dir = sj.at("direction").get<std::string>();
        if (dir == "alice_to_bob") {
          s.direction = Direction::AliceToBob;
        } else if (dir == "bob_to_alice") {
          s.direction = Direction::BobToAlice;
        } else {
          throw ConfigError("wrapper step: unknown direction '" + dir + "'");
        }
        s.value = sj.value("value", std::vector<std::string>{});
        s.basis = sj.value("basis", std::vector<std::string>{});
        if (s.kind == StepKind::PartyMessage && !s.basis.empty()) {
          throw ConfigError("wrapper step: basis applies to quantum messages only");
        }
        for (const auto& t : s.value) detail::parse_term(t);
        for (const auto& t : s.basis) detail::parse_term(t);
        if (sj.contains("from_agent")) s.from_agent = netsim::agent_from_name(sj.at("from_agent").get<std::string>());
        if (sj.contains("to_agent")) s.to_agent = netsim::agent_from_name(sj.at("to_agent").get<std::string>());
        if (sj.contains("max_latency")) s.max_latency = sj.at("max_latency").get<double>();
      }
      w.steps.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("wrapper: ") + e.what());
  }
  return w;
}

inline ojson to_json(const DataItem& d) {
  ojson j;
  j["id"] = d.id;
  j["role"] = to_string(d.role);
  j["sender"] = d.sender.name();
  j["receiver"] = d.receiver.name();
  j["payload"] = netsim::to_hex(d.payload);
  j["emitted"] = d.emitted;
  j["received"] = d.received;
  return j;
}

inline ojson to_json(const StandardProtocolInstance& inst) {
  ojson j;
  j["messages"] = ojson::array();
  for (const auto& m : inst.messages) {
    ojson mj;
    mj["from"] = netsim::to_string(m.from);
    mj["to"] = netsim::to_string(m.to);
    mj["payload"] = netsim::to_hex(m.payload);
    mj["source"] = m.source;
    j["messages"].push_back(std::move(mj));
  }
  for (const Party p : {Party::Alice, Party::Bob}) {
    ojson pj;
    pj["items"] = ojson::array();
    for (const auto& item : inst.of(p).items) pj["items"].push_back(to_json(item));
    pj["log"] = ojson::array();
    for (const auto& e : inst.of(p).log) {
      ojson ej;
      ej["agent"] = e.agent.name();
      ej["time"] = e.time;
      ej["record"] = e.record;
      ej["inputs"] = e.inputs;
      pj["log"].push_back(std::move(ej));
    }
    j[netsim::to_string(p)] = std::move(pj);
  }
  j["transfers"] = ojson::array();
  for (const auto& t : inst.transfers) {
    ojson tj;
    tj["id"] = t.id;
    tj["sender"] = t.sender.name();
    tj["receiver"] = t.receiver.name();
    tj["bytes"] = t.payload.size();
    tj["emission"] = relcoin::to_json(t.emission);
    tj["reception"] = relcoin::to_json(t.reception);
    j["transfers"].push_back(std::move(tj));
  }
  j["consolidated_at"] = inst.consolidated_at;
  if (inst.joint_state) {
    j["joint_state"] = quantum::to_json(*inst.joint_state);
    j["split"] = inst.split;
    j["subsystem_labels"] = inst.subsystem_labels;
  }
  return j;
}

inline ojson to_json(const DemonstrationRecord& r) {
  ojson j;
  j["wrapper"] = r.wrapper;
  j["toss_values"] = ojson::array();
  for (const auto b : r.toss_values) j["toss_values"].push_back(int(b));
  j["tosses"] = ojson::array();
  for (std::size_t i = 0; i < r.toss_records.size(); ++i) {
    ojson tj;
    tj["record"] = cointoss::to_json(r.toss_records[i]);
    tj["consolidated"] = to_json(r.consolidated_tosses[i]);
    j["tosses"].push_back(std::move(tj));
  }
  j["registers"] = ojson::array();
  for (const auto& reg : r.registers) {
    ojson rj;
    rj["label"] = reg.label;
    rj["owner"] = netsim::to_string(reg.owner);
    j["registers"].push_back(std::move(rj));
  }
  j["split"] = r.split;
  for (Bit c = 0; c < 2; ++c) {
    ojson run = ojson::array();
    for (const auto& m : r.sample_runs[c]) {
      ojson mj;
      mj["step"] = m.step;
      mj["kind"] = m.kind;
      mj["from"] = m.from.name();
      mj["to"] = m.to.name();
      mj["value"] = m.value;
      mj["basis"] = m.basis;
      mj["sent"] = m.sent;
      mj["received"] = m.received;
      run.push_back(std::move(mj));
    }
    j[c == 0 ? "sample_run_commit0" : "sample_run_commit1"] = std::move(run);
  }
  j["attack"] = quantum::to_json(r.attack);
  return j;
}

}  // namespace relcoin::bc
