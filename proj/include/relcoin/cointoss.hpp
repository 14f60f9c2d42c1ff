#pragma once

// Two-site classical coin toss. At the agreed time t, A1 sends a random
// bit to B1 while B2 sends one to A2; both must arrive before t + delta.
// Each party then relays what it sent and received across the separation
// and the co-located laboratories confirm their views. Equal bits give 0,
// unequal bits give 1.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "relcoin/canonical_json.hpp"
#include "relcoin/error.hpp"
#include "relcoin/netsim.hpp"
#include "relcoin/random.hpp"
#include "relcoin/spacetime.hpp"

namespace relcoin::cointoss {

using netsim::AgentId;
using netsim::AgentProgram;
using netsim::Bytes;
using netsim::Message;
using netsim::MessageId;
using netsim::Party;
using netsim::Transcript;

enum class AbortReason { LateArrival, EarlySend, Inconsistent, Malformed };

inline std::string to_string(AbortReason r) {
  switch (r) {
    case AbortReason::LateArrival: return "LateArrival";
    case AbortReason::EarlySend: return "EarlySend";
    case AbortReason::Inconsistent: return "Inconsistent";
    case AbortReason::Malformed: return "Malformed";
  }
  return "?";
}

enum class Outcome { Zero, One, Abort };

struct CoinTossRecord {
  // Bytes as received; absent when the message never arrived. Values
  // other than 0 and 1 are malformed.
  std::optional<std::uint8_t> a_bit;
  std::optional<std::uint8_t> b_bit;
  // Send times are the senders' claims from the confirmation phase.
  // Missing observations are +infinity.
  double a_send_time = std::numeric_limits<double>::infinity();
  double a_recv_time = std::numeric_limits<double>::infinity();
  double b_send_time = std::numeric_limits<double>::infinity();
  double b_recv_time = std::numeric_limits<double>::infinity();
  Outcome outcome = Outcome::Abort;
  std::optional<AbortReason> abort_reason;
  // Earliest time at which both parties have concluded.
  double decided_at = std::numeric_limits<double>::infinity();

  bool accepted() const { return outcome != Outcome::Abort; }
  int outcome_bit() const { return outcome == Outcome::One ? 1 : 0; }
};

struct TimingVerdict {
  bool accept = true;
  std::optional<AbortReason> reason;
};

// Accept iff both bits were sent at or after t and received strictly
// before t + delta.
inline TimingVerdict verify_timing(const CoinTossRecord& r, const ScenarioConfig& s) {
  const double t = s.start_time;
  const double deadline = s.start_time + s.delta;
  if (r.a_send_time < t || r.b_send_time < t) return {false, AbortReason::EarlySend};
  if (!(r.a_recv_time < deadline) || !(r.b_recv_time < deadline)) return {false, AbortReason::LateArrival};
  return {};
}

// ---------------------------------------------------------------------------
// Strategies

enum class Response { Copy, Invert };

struct Honest {};
// Waits until the peer's bit is relayed across the separation, then sends
// a bit computed from it.
struct LateSender {
  Response response = Response::Copy;
};
struct BiasedBit {
  double p_one = 1.0;
};
struct DelayedDelivery {
  double lag = 0.0;
};
// Programs for the party's laboratory near site 1 and near site 2.
struct Custom {
  AgentProgram site1;
  AgentProgram site2;
};

using AdversaryStrategy = std::variant<Honest, LateSender, BiasedBit, DelayedDelivery, Custom>;

inline std::string describe(const AdversaryStrategy& s) {
  struct {
    std::string operator()(const Honest&) const { return "honest"; }
    std::string operator()(const LateSender& l) const {
      return std::string("late-sender(") + (l.response == Response::Copy ? "copy" : "invert") + ")";
    }
    std::string operator()(const BiasedBit& b) const { return "biased-bit(" + format_double(b.p_one) + ")"; }
    std::string operator()(const DelayedDelivery& d) const { return "delayed(" + format_double(d.lag) + ")"; }
    std::string operator()(const Custom&) const { return "custom"; }
  } visitor;
  return std::visit(visitor, s);
}

// The laboratory that emits the party's bit, and the one that receives
// the opponent's bit. Each is co-located with the opponent's other role.
constexpr AgentId sender_of(Party p) noexcept { return p == Party::Alice ? netsim::A1 : netsim::B2; }
constexpr AgentId receiver_of(Party p) noexcept { return p == Party::Alice ? netsim::A2 : netsim::B1; }

namespace detail {

constexpr std::uint8_t kMissing = 0xFF;
constexpr std::uint8_t kMalformed = 0xFE;
constexpr std::size_t kViewSize = 10;

inline void put_time(Bytes& b, double t) {
  const auto bits = std::bit_cast<std::uint64_t>(t);
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

inline double get_time(const Bytes& b, std::size_t offset) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[offset + i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

// [a][b][claimed send time of the viewer's own bit]
struct View {
  std::uint8_t a = 0;
  std::uint8_t b = 0;
  double claimed_send = 0.0;
};

inline Bytes encode_view(const View& v) {
  Bytes out{v.a, v.b};
  put_time(out, v.claimed_send);
  return out;
}

inline std::optional<View> decode_view(const Bytes& b) {
  if (b.size() != kViewSize) return std::nullopt;
  return View{b[0], b[1], get_time(b, 2)};
}

// Every knob a deterministic or randomized single-party behaviour needs.
// Honest play is the default-constructed value.
struct Behaviour {
  double p_one = 0.5;
  // Forces the sent value (bypasses randomness).
  std::optional<std::uint8_t> fixed_value;
  // When set, the sender waits for the peer's bit and sends table[peer].
  std::optional<std::array<std::uint8_t, 2>> informed_table;
  std::optional<double> send_time;  // defaults to t
  double lag = 0.0;
  bool inner_edge = false;   // move both laboratories toward each other by delta
  bool flip_view = false;    // misreport the peer's bit when confirming
  bool claim_start = false;  // claim a send time of exactly t
};

// What one laboratory knows about the toss.
struct Knowledge {
  std::optional<std::uint8_t> own;  // the party's sent value
  double own_send = 0.0;
  std::optional<std::uint8_t> peer;  // peer bit byte, or kMissing / kMalformed
  double peer_time = 0.0;
  std::optional<View> peer_view;
  bool peer_view_bad = false;
  bool view_sent = false;
  bool concluded = false;
  std::vector<MessageId> cites;
};

inline std::string verdict_of(const Knowledge& k, const ScenarioConfig& s, Party self, const View& mine) {
  const std::uint8_t peer = *k.peer;
  if (peer == kMissing) return "abort=" + to_string(AbortReason::LateArrival);
  if (peer == kMalformed || peer > 1) return "abort=" + to_string(AbortReason::Malformed);
  if (k.peer_view_bad || !k.peer_view) return "abort=" + to_string(AbortReason::Inconsistent);
  const View& theirs = *k.peer_view;
  if (theirs.claimed_send < s.start_time) return "abort=" + to_string(AbortReason::EarlySend);
  if (!(k.peer_time < s.start_time + s.delta)) return "abort=" + to_string(AbortReason::LateArrival);
  if (theirs.claimed_send > k.peer_time) return "abort=" + to_string(AbortReason::Inconsistent);
  if (theirs.a != mine.a || theirs.b != mine.b) return "abort=" + to_string(AbortReason::Inconsistent);
  (void)self;
  return std::string("outcome=") + ((mine.a ^ mine.b) & 1 ? "1" : "0");
}

// Once a laboratory knows both bits it confirms its view with the
// co-located opponent laboratory; once it also holds theirs it concludes.
inline void advance(Knowledge& k, const ScenarioConfig& s, Party self, AgentId opponent_here, const Behaviour& bh,
                    netsim::Reaction& out) {
  if (!k.own || !k.peer) return;
  std::uint8_t peer_report = *k.peer;
  if (bh.flip_view && peer_report <= 1) peer_report ^= 1;
  View mine;
  mine.a = self == Party::Alice ? *k.own : peer_report;
  mine.b = self == Party::Alice ? peer_report : *k.own;
  mine.claimed_send = bh.claim_start ? s.start_time : k.own_send;
  if (!k.view_sent) {
    k.view_sent = true;
    out.emits.push_back({opponent_here, encode_view(mine), 0.0, std::nullopt});
    std::ostringstream rec;
    rec << "view a=" << int(mine.a) << " b=" << int(mine.b);
    out.notes.push_back({rec.str(), k.cites});
  }
  if (!k.concluded && (k.peer_view || k.peer_view_bad)) {
    k.concluded = true;
    View truthful = mine;
    if (bh.flip_view) {
      // Judge against what was actually observed.
      if (self == Party::Alice) truthful.b = *k.peer; else truthful.a = *k.peer;
    }
    out.notes.push_back({verdict_of(k, s, self, truthful), k.cites});
  }
}

inline Position inner_edge_position(const ScenarioConfig& s, AgentId a) {
  const double dx = s.separation();
  Position p = netsim::site_of(s, a);
  const double sign = a.index == 1 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += sign * s.delta * (s.site2[i] - s.site1[i]) / dx;
  return p;
}

inline AgentProgram sender_program(const ScenarioConfig& s, Party self, const Behaviour& bh) {
  const AgentId me = sender_of(self);
  const AgentId partner = receiver_of(self);
  const AgentId opponent_here = receiver_of(netsim::other(self));
  AgentProgram prog;
  prog.first_wake = bh.send_time.value_or(s.start_time);
  if (bh.inner_edge) prog.position = inner_edge_position(s, me);
  prog.step = [s, self, partner, opponent_here, bh, k = Knowledge{}, sent = false](
                  const netsim::StepInput& in) mutable {
    netsim::Reaction out;
    for (const Message& m : in.delivered) {
      if (m.sender == partner && m.payload.size() == 9 && !k.peer) {
        k.peer = m.payload[0];
        k.peer_time = detail::get_time(m.payload, 1);
        k.cites.push_back(m.id);
      } else if (m.sender == opponent_here && !k.peer_view && !k.peer_view_bad) {
        k.peer_view = decode_view(m.payload);
        k.peer_view_bad = !k.peer_view;
        k.cites.push_back(m.id);
      }
    }
    auto send = [&](std::uint8_t value, std::vector<MessageId> cites) {
      sent = true;
      k.own = value;
      k.own_send = in.now;
      out.emits.push_back({opponent_here, Bytes{value}, bh.lag, std::nullopt});
      Bytes relay{value};
      put_time(relay, in.now);
      out.emits.push_back({partner, std::move(relay), 0.0, std::nullopt});
      out.notes.push_back({"sent bit " + std::to_string(int(value)), std::move(cites)});
    };
    if (!sent) {
      if (bh.informed_table) {
        if (k.peer && *k.peer <= 1) send((*bh.informed_table)[*k.peer], k.cites);
      } else {
        std::uint8_t value = bh.fixed_value ? *bh.fixed_value : static_cast<std::uint8_t>(in.rng.bernoulli(bh.p_one));
        send(value, {});
      }
    }
    advance(k, s, self, opponent_here, bh, out);
    return out;
  };
  return prog;
}

inline AgentProgram receiver_program(const ScenarioConfig& s, Party self, const Behaviour& bh) {
  const AgentId me = receiver_of(self);
  const AgentId partner = sender_of(self);
  const AgentId opponent_here = sender_of(netsim::other(self));
  AgentProgram prog;
  prog.first_wake = s.start_time;
  if (bh.inner_edge) prog.position = inner_edge_position(s, me);
  prog.step = [s, self, partner, opponent_here, bh, k = Knowledge{}, got_bit = false](
                  const netsim::StepInput& in) mutable {
    netsim::Reaction out;
    const double deadline = s.start_time + s.delta;
    for (const Message& m : in.delivered) {
      if (m.sender == partner && m.payload.size() == 9 && !k.own) {
        k.own = m.payload[0];
        k.own_send = detail::get_time(m.payload, 1);
        k.cites.push_back(m.id);
      } else if (m.sender == opponent_here && !got_bit) {
        got_bit = true;
        const std::uint8_t byte = m.payload.size() == 1 ? m.payload[0] : kMalformed;
        k.cites.push_back(m.id);
        if (!k.peer) {
          k.peer = byte;
          k.peer_time = in.now;
          Bytes relay{byte};
          put_time(relay, in.now);
          out.emits.push_back({partner, std::move(relay), 0.0, std::nullopt});
          out.notes.push_back({"received bit", {m.id}});
        }
      } else if (m.sender == opponent_here && !k.peer_view && !k.peer_view_bad) {
        k.peer_view = decode_view(m.payload);
        k.peer_view_bad = !k.peer_view;
        k.cites.push_back(m.id);
      }
    }
    if (!k.peer && in.now >= deadline) {
      // Nothing arrived inside the window.
      k.peer = kMissing;
      k.peer_time = deadline;
      Bytes relay{kMissing};
      put_time(relay, deadline);
      out.emits.push_back({partner, std::move(relay), 0.0, std::nullopt});
      out.notes.push_back({"no bit by deadline", {}});
    }
    if (!k.peer && in.now < deadline) out.wake_at = deadline;
    advance(k, s, self, opponent_here, bh, out);
    return out;
  };
  return prog;
}

inline Behaviour behaviour_of(const AdversaryStrategy& strategy) {
  Behaviour bh;
  if (const auto* l = std::get_if<LateSender>(&strategy)) {
    bh.informed_table = l->response == Response::Copy ? std::array<std::uint8_t, 2>{0, 1}
                                                      : std::array<std::uint8_t, 2>{1, 0};
    bh.inner_edge = true;
  } else if (const auto* b = std::get_if<BiasedBit>(&strategy)) {
    bh.p_one = b->p_one;
  } else if (const auto* d = std::get_if<DelayedDelivery>(&strategy)) {
    bh.lag = d->lag;
  }
  return bh;
}

inline void install(netsim::ProgramMap& programs, const ScenarioConfig& s, Party party, const Behaviour& bh) {
  programs[sender_of(party)] = sender_program(s, party, bh);
  programs[receiver_of(party)] = receiver_program(s, party, bh);
}

inline void install(netsim::ProgramMap& programs, const ScenarioConfig& s, Party party,
                    const AdversaryStrategy& strategy) {
  if (const auto* c = std::get_if<Custom>(&strategy)) {
    programs[AgentId{party, 1}] = c->site1;
    programs[AgentId{party, 2}] = c->site2;
    return;
  }
  install(programs, s, party, behaviour_of(strategy));
}

inline double protocol_horizon(const ScenarioConfig& s) { return s.start_time + 4.0 * s.separation() + 4.0 * s.delta; }

}  // namespace detail

// Builds the record from the physical transcript: the bits as received,
// the senders' claimed send times, and the four confirmation views.
inline CoinTossRecord judge(const Transcript& t, const ScenarioConfig& s) {
  using detail::decode_view;
  CoinTossRecord r;
  const auto a_chan = t.between(netsim::A1, netsim::B1);
  const auto b_chan = t.between(netsim::B2, netsim::A2);
  const Message* a_msg = a_chan.empty() ? nullptr : a_chan[0];
  const Message* b_msg = b_chan.empty() ? nullptr : b_chan[0];

  std::vector<std::optional<detail::View>> alice_views, bob_views;
  auto view_at = [](const std::vector<const Message*>& chan, std::size_t i) -> std::optional<detail::View> {
    if (chan.size() <= i) return std::nullopt;
    return decode_view(chan[i]->payload);
  };
  alice_views.push_back(view_at(a_chan, 1));
  alice_views.push_back(view_at(t.between(netsim::A2, netsim::B2), 0));
  bob_views.push_back(view_at(t.between(netsim::B1, netsim::A1), 0));
  bob_views.push_back(view_at(b_chan, 1));

  auto bit_of = [](const Message* m) -> std::optional<std::uint8_t> {
    if (!m) return std::nullopt;
    return m->payload.size() == 1 ? m->payload[0] : detail::kMalformed;
  };
  r.a_bit = bit_of(a_msg);
  r.b_bit = bit_of(b_msg);
  if (a_msg) r.a_recv_time = a_msg->reception.time;
  if (b_msg) r.b_recv_time = b_msg->reception.time;
  auto claim = [](const std::vector<std::optional<detail::View>>& views, const Message* m) {
    for (const auto& v : views) {
      if (v) return v->claimed_send;
    }
    return m ? m->emission.time : std::numeric_limits<double>::infinity();
  };
  r.a_send_time = claim(alice_views, a_msg);
  r.b_send_time = claim(bob_views, b_msg);

  // Both parties' first conclusions.
  double alice_done = std::numeric_limits<double>::infinity();
  double bob_done = std::numeric_limits<double>::infinity();
  for (const auto& e : t.events) {
    if (e.record.rfind("outcome=", 0) != 0 && e.record.rfind("abort=", 0) != 0) continue;
    double& slot = e.agent.party == Party::Alice ? alice_done : bob_done;
    slot = std::min(slot, e.time);
  }
  r.decided_at = std::max(alice_done, bob_done);

  auto abort = [&](AbortReason why) {
    r.outcome = Outcome::Abort;
    r.abort_reason = why;
    return r;
  };
  if (!r.a_bit || !r.b_bit) return abort(AbortReason::LateArrival);
  if (*r.a_bit > 1 || *r.b_bit > 1) return abort(AbortReason::Malformed);
  if (const auto v = verify_timing(r, s); !v.accept) return abort(*v.reason);
  if (r.a_send_time > r.a_recv_time || r.b_send_time > r.b_recv_time) return abort(AbortReason::Inconsistent);
  auto agree = [&](const std::vector<std::optional<detail::View>>& views, double claimed) {
    return std::all_of(views.begin(), views.end(), [&](const auto& v) {
      return v && v->a == *r.a_bit && v->b == *r.b_bit && v->claimed_send == claimed;
    });
  };
  if (!agree(alice_views, r.a_send_time) || !agree(bob_views, r.b_send_time)) return abort(AbortReason::Inconsistent);
  r.outcome = (*r.a_bit ^ *r.b_bit) ? Outcome::One : Outcome::Zero;
  return r;
}

struct TossResult {
  CoinTossRecord record;
  Transcript transcript;
};

inline TossResult run_toss(const ScenarioConfig& scenario, const AdversaryStrategy& alice,
                           const AdversaryStrategy& bob, std::uint64_t seed) {
  scenario.validate();
  netsim::ProgramMap programs;
  detail::install(programs, scenario, Party::Alice, alice);
  detail::install(programs, scenario, Party::Bob, bob);
  Transcript t = netsim::run(scenario, std::move(programs), seed, detail::protocol_horizon(scenario));
  CoinTossRecord r = judge(t, scenario);
  return {r, std::move(t)};
}

// ---------------------------------------------------------------------------
// Fairness statistics

struct TrialRow {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  CoinTossRecord record;
};

struct FairnessReport {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  std::uint64_t zeros = 0;
  std::uint64_t ones = 0;
  std::uint64_t aborted = 0;
  std::map<std::string, std::uint64_t> aborts_by_reason;
  double empirical_bias = 0.0;  // |zeros/accepted - 1/2|
  // Half-width of the z-sigma normal interval around 1/2 for the accepted
  // count; an honest coin stays within it with probability `confidence`.
  double bias_bound_epsilon = 0.5;
  double z = 3.0;
  double confidence = 0.0;
  // Wilson score interval for P(outcome = 0) at the same z.
  double ci_low = 0.0;
  double ci_high = 1.0;
};

inline FairnessReport summarize(const std::vector<TrialRow>& rows, double z = 3.0) {
  FairnessReport rep;
  rep.z = z;
  rep.confidence = std::erf(z / std::sqrt(2.0));
  for (const auto& reason : {AbortReason::LateArrival, AbortReason::EarlySend, AbortReason::Inconsistent,
                             AbortReason::Malformed}) {
    rep.aborts_by_reason[to_string(reason)] = 0;
  }
  for (const auto& row : rows) {
    ++rep.trials;
    if (row.record.accepted()) {
      ++rep.accepted;
      (row.record.outcome == Outcome::Zero ? rep.zeros : rep.ones)++;
    } else {
      ++rep.aborted;
      ++rep.aborts_by_reason[to_string(*row.record.abort_reason)];
    }
  }
  if (rep.accepted > 0) {
    const double n = static_cast<double>(rep.accepted);
    const double p = static_cast<double>(rep.zeros) / n;
    rep.empirical_bias = std::abs(p - 0.5);
    rep.bias_bound_epsilon = z * 0.5 / std::sqrt(n);
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    rep.ci_low = std::max(0.0, centre - half);
    rep.ci_high = std::min(1.0, centre + half);
  }
  return rep;
}

struct FairnessResult {
  FairnessReport report;
  std::vector<TrialRow> rows;
};

// Trial i uses seed derive_trial_seed(root_seed, i). Trials are spread
// over `threads` workers; rows come back in trial order.
inline FairnessResult fairness_experiment(const ScenarioConfig& scenario, const AdversaryStrategy& alice,
                                          const AdversaryStrategy& bob, std::uint64_t trials,
                                          std::uint64_t root_seed, unsigned threads = 1) {
  if (trials < 1) throw ConfigError("fairness_experiment: trials must be >= 1");
  scenario.validate();
  std::vector<TrialRow> rows(trials);
  const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, trials));
  auto work = [&](unsigned w) {
    for (std::uint64_t i = w; i < trials; i += workers) {
      const std::uint64_t seed = derive_trial_seed(root_seed, i);
      rows[i] = {i, seed, run_toss(scenario, alice, bob, seed).record};
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  FairnessReport rep = summarize(rows);
  return {rep, std::move(rows)};
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of deterministic single-party cheating

enum class SendSlot { Early, OnTime, Informed };

struct DeterministicStrategy {
  SendSlot slot = SendSlot::OnTime;
  // Uninformed slots send table[0]; informed sends table[peer bit].
  std::array<std::uint8_t, 2> table{0, 0};
  bool flip_view = false;
  bool claim_start = false;

  std::string describe() const {
    std::ostringstream os;
    os << (slot == SendSlot::Early ? "early" : slot == SendSlot::OnTime ? "on-time" : "informed");
    if (slot == SendSlot::Informed) {
      os << " f(0)=" << int(table[0]) << " f(1)=" << int(table[1]);
    } else {
      os << " value=" << int(table[0]);
    }
    os << (flip_view ? " flip-view" : " true-view") << (claim_start ? " claim-t" : " true-time");
    return os.str();
  }
};

inline detail::Behaviour behaviour_of(const DeterministicStrategy& st, const ScenarioConfig& s) {
  detail::Behaviour bh;
  bh.flip_view = st.flip_view;
  bh.claim_start = st.claim_start;
  switch (st.slot) {
    case SendSlot::Early:
      bh.send_time = s.start_time - s.delta / 2;
      bh.fixed_value = st.table[0];
      break;
    case SendSlot::OnTime:
      bh.fixed_value = st.table[0];
      break;
    case SendSlot::Informed:
      bh.informed_table = st.table;
      bh.inner_edge = true;
      break;
  }
  return bh;
}

inline std::uint64_t strategy_count(unsigned message_bits) {
  const std::uint64_t v = std::uint64_t{1} << message_bits;
  return (2 * v + v * v) * 4;
}

inline std::vector<DeterministicStrategy> enumerate_strategies(unsigned message_bits,
                                                               std::uint64_t budget = std::uint64_t{1} << 16) {
  if (message_bits < 1 || message_bits > 8) throw ConfigError("message_alphabet_bits must be in [1, 8]");
  if (strategy_count(message_bits) > budget) throw BudgetExceeded("strategy enumeration exceeds budget");
  const unsigned v = 1u << message_bits;
  std::vector<DeterministicStrategy> out;
  for (int flags = 0; flags < 4; ++flags) {
    const bool flip = flags & 1;
    const bool claim = flags & 2;
    for (auto slot : {SendSlot::Early, SendSlot::OnTime}) {
      for (unsigned x = 0; x < v; ++x) {
        out.push_back({slot, {std::uint8_t(x), std::uint8_t(x)}, flip, claim});
      }
    }
    for (unsigned f0 = 0; f0 < v; ++f0) {
      for (unsigned f1 = 0; f1 < v; ++f1) {
        out.push_back({SendSlot::Informed, {std::uint8_t(f0), std::uint8_t(f1)}, flip, claim});
      }
    }
  }
  return out;
}

struct StrategyOutcome {
  DeterministicStrategy strategy;
  int accepted_runs = 0;  // out of 2 (honest bit 0 and 1)
  int accepted_zeros = 0;
  // Bias of the raw XOR of well-formed sent bits, ignoring verdicts.
  std::optional<double> raw_bias;
  std::optional<double> bias;  // |P(0 | accepted) - 1/2|
};

struct ExhaustiveAnalysis {
  Party cheater = Party::Bob;
  unsigned message_bits = 1;
  std::uint64_t strategies = 0;
  std::uint64_t accepted_strategies = 0;
  std::uint64_t raw_biased_strategies = 0;
  double max_bias = 0.0;  // over strategies with at least one accepted run
  std::string witness;
  double max_raw_bias = 0.0;
  bool all_biased_rejected = true;  // every raw-biased strategy is never accepted
  std::vector<StrategyOutcome> outcomes;
};

// For each deterministic strategy of `cheater`, runs the toss against an
// honest opponent once per value of the opponent's bit and sums exactly
// over that uniform bit.
inline ExhaustiveAnalysis exhaustive_adversary_check(const ScenarioConfig& scenario, Party cheater,
                                                     unsigned message_bits) {
  scenario.validate();
  ExhaustiveAnalysis res;
  res.cheater = cheater;
  res.message_bits = message_bits;
  const auto strategies = enumerate_strategies(message_bits);
  res.strategies = strategies.size();
  bool have_witness = false;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    StrategyOutcome so;
    so.strategy = strategies[i];
    int raw_runs = 0, raw_zeros = 0;
    for (std::uint8_t honest_bit = 0; honest_bit < 2; ++honest_bit) {
      netsim::ProgramMap programs;
      detail::Behaviour honest;
      honest.fixed_value = honest_bit;
      detail::install(programs, scenario, netsim::other(cheater), honest);
      detail::install(programs, scenario, cheater, behaviour_of(strategies[i], scenario));
      const Transcript t = netsim::run(scenario, std::move(programs), i, detail::protocol_horizon(scenario));
      const CoinTossRecord r = judge(t, scenario);
      if (r.a_bit && r.b_bit && *r.a_bit <= 1 && *r.b_bit <= 1) {
        ++raw_runs;
        raw_zeros += (*r.a_bit == *r.b_bit);
      }
      if (r.accepted()) {
        ++so.accepted_runs;
        so.accepted_zeros += r.outcome == Outcome::Zero;
      }
    }
    if (raw_runs > 0) so.raw_bias = std::abs(double(raw_zeros) / raw_runs - 0.5);
    if (so.accepted_runs > 0) {
      so.bias = std::abs(double(so.accepted_zeros) / so.accepted_runs - 0.5);
      ++res.accepted_strategies;
      if (!have_witness || *so.bias > res.max_bias) {
        res.max_bias = *so.bias;
        res.witness = so.strategy.describe();
        have_witness = true;
      }
    }
    if (so.raw_bias && *so.raw_bias > 0) {
      ++res.raw_biased_strategies;
      res.max_raw_bias = std::max(res.max_raw_bias, *so.raw_bias);
      if (so.accepted_runs > 0) res.all_biased_rejected = false;
    }
    res.outcomes.push_back(so);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Serialization

inline std::string outcome_label(const CoinTossRecord& r) {
  if (r.outcome == Outcome::Zero) return "0";
  if (r.outcome == Outcome::One) return "1";
  return "abort";
}

inline std::string verdict_label(const CoinTossRecord& r) {
  return r.accepted() ? "Accept" : to_string(*r.abort_reason);
}

inline std::string bit_label(const std::optional<std::uint8_t>& b) {
  if (!b) return "-";
  return std::to_string(int(*b));
}

inline constexpr const char* kCsvHeader = "trial,seed,a,b,outcome,verdict\n";

inline std::string to_csv(const std::vector<TrialRow>& rows) {
  std::string out = kCsvHeader;
  for (const auto& row : rows) {
    out += std::to_string(row.trial) + "," + std::to_string(row.seed) + "," + bit_label(row.record.a_bit) + "," +
           bit_label(row.record.b_bit) + "," + outcome_label(row.record) + "," + verdict_label(row.record) + "\n";
  }
  return out;
}

inline ojson to_json(const CoinTossRecord& r) {
  ojson j;
  j["a_bit"] = r.a_bit ? ojson(int(*r.a_bit)) : ojson(nullptr);
  j["b_bit"] = r.b_bit ? ojson(int(*r.b_bit)) : ojson(nullptr);
  j["a_send_time"] = r.a_send_time;
  j["a_recv_time"] = r.a_recv_time;
  j["b_send_time"] = r.b_send_time;
  j["b_recv_time"] = r.b_recv_time;
  j["outcome"] = outcome_label(r);
  j["verdict"] = verdict_label(r);
  j["decided_at"] = r.decided_at;
  return j;
}

inline ojson to_json(const FairnessReport& r) {
  ojson j;
  j["trials"] = r.trials;
  j["accepted"] = r.accepted;
  j["zeros"] = r.zeros;
  j["ones"] = r.ones;
  j["aborted"] = r.aborted;
  ojson reasons;
  for (const auto& [k, v] : r.aborts_by_reason) reasons[k] = v;
  j["aborts_by_reason"] = reasons;
  j["empirical_bias"] = r.empirical_bias;
  j["bias_bound_epsilon"] = r.bias_bound_epsilon;
  j["z"] = r.z;
  j["confidence"] = r.confidence;
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  return j;
}

inline ojson to_json(const ExhaustiveAnalysis& a) {
  ojson j;
  j["cheater"] = netsim::to_string(a.cheater);
  j["message_bits"] = a.message_bits;
  j["strategies"] = a.strategies;
  j["accepted_strategies"] = a.accepted_strategies;
  j["raw_biased_strategies"] = a.raw_biased_strategies;
  j["max_bias"] = a.max_bias;
  j["witness"] = a.witness;
  j["max_raw_bias"] = a.max_raw_bias;
  j["all_biased_rejected"] = a.all_biased_rejected;
  return j;
}

}  // namespace relcoin::cointoss
