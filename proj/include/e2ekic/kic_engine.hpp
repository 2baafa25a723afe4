#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "e2ekic/channel_model.hpp"
#include "e2ekic/signal_expr.hpp"

namespace e2ekic {

// ---------------------------------------------------------------------------
// Transmission schedule
//
// Node 1 transmits x(t) at every slot t >= 1.  Node i > 1 relays with a fixed
// lag: at slot t it transmits x(t - delay(i)), so its first transmission is
// at slot delay(i) + 1.  The lags satisfy
//     delay(1) = 0,   delay(i) = (m_i + 1) * delay(i-1) + 1
// where m_i is the number of cancellation rounds node i runs.  That recursion
// is exactly what makes every unknown-interference slot at node i land m_i+1
// cancellation steps in the future, terminating the iteration.
// ---------------------------------------------------------------------------

class Schedule {
public:
    // rounds_per_node[i-1] = m_i; delays are derived via the recursion above.
    explicit Schedule(std::vector<int> rounds_per_node);

    int size() const { return static_cast<int>(delays_.size()); }
    int rounds(int i) const;
    std::int64_t delay(int i) const;

    // Relative lags delta_j = delay(i-1) - delay(j) for j = 1..i-2, as seen by
    // receiver i.  Strictly decreasing in j, all >= 1.
    std::vector<std::int64_t> offsets(int i) const;

    // First slot at which node i's received signal has its steady-state shape
    // (all earlier nodes are transmitting).
    std::int64_t steady_state_slot(int i) const;

private:
    std::vector<int> rounds_;            // rounds_[i-1] = m_i
    std::vector<std::int64_t> delays_;   // delays_[i-1] = delay(i)
};

Schedule build_schedule(const ChannelModel& model, const ScenarioConfig& cfg);

// Closed form of the delay recursion with m_j = m for every node:
//   delay(i) = i - 1                      if m = 0
//   delay(i) = ((m+1)^(i-1) - 1) / m      otherwise
// Exact integer arithmetic; throws on overflow.
std::int64_t delay_closed_form(int i, int m);

// ---------------------------------------------------------------------------
// Received signal and iterative cancellation
// ---------------------------------------------------------------------------

// What node i hears at slot t (>= steady state):
//   y_i(t) = sum_{j<i} h_ji x(t - delay(j)) + z_i(t)
SignalExpr received_signal(const ChannelModel& model, const Schedule& sched,
                           int i, std::int64_t t);

struct CancellationResult {
    int node = 0;
    int rounds = 0;
    SignalExpr expr;
    double sinr_db = 0.0;
    std::int64_t slots_waited = 0;  // m * delay(i-1), one max-offset wait per round
};

// Runs m rounds of known-interference cancellation at node i, slot t.  Each
// round snapshots the residual's unknown data terms and subtracts, for each
// one, the appropriately shifted and scaled copy of the received signal that
// cancels it.  The useful term x(t - delay(i-1)) is never touched: every
// unknown term sits at a strictly later source slot.
CancellationResult cancel_rounds_recursive(const ChannelModel& model,
                                           const Schedule& sched, int i, int m,
                                           std::optional<std::int64_t> t = {});

// Same residual, built non-iteratively from the closed-form expansion: the
// round-r correction is a sum over ordered tuples (j_1..j_r) of weak
// transmitters, weighted by prod h_{j_k,i} / h_{i-1,i}^r, of the received
// signal shifted by the tuple's total lag.  Term count grows as (i-2)^(m+1);
// `term_budget` bounds it.
SignalExpr cancel_rounds_expanded(const ChannelModel& model,
                                  const Schedule& sched, int i, int m,
                                  std::optional<std::int64_t> t = {},
                                  std::uint64_t term_budget = 1000000);

bool decode(double sinr_db, double gamma_linear);

// ---------------------------------------------------------------------------
// Slot/node transmission trace (who sends which packet when)
// ---------------------------------------------------------------------------

struct TransmissionTrace {
    int nodes = 0;
    int slots = 0;
    // packet_at(t, i): source-stream index transmitted by node i at slot t,
    // or nullopt while the node is still waiting for its first packet.
    std::optional<std::int64_t> packet_at(int slot, int node) const;
    std::string to_csv() const;

    std::vector<std::int64_t> cells;  // 0 = idle, laid out slot-major
};

TransmissionTrace trace_schedule(const Schedule& sched, int slots);

} // namespace e2ekic
