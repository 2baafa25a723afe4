#include "e2ekic/kic_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "e2ekic/analysis.hpp"
#include "e2ekic/errors.hpp"

namespace e2ekic {

// ---------------------------------------------------------------------------
// Schedule
// ---------------------------------------------------------------------------

Schedule::Schedule(std::vector<int> rounds_per_node)
    : rounds_(std::move(rounds_per_node)) {
    if (rounds_.size() < 2)
        throw ConfigError("schedule needs at least 2 nodes");
    for (int m : rounds_)
        if (m < 0) throw ConfigError("rounds per node must be >= 0");

    delays_.resize(rounds_.size());
    delays_[0] = 0;
    for (std::size_t k = 1; k < rounds_.size(); ++k) {
        const std::int64_t mult = rounds_[k] + 1;
        const std::int64_t prev = delays_[k - 1];
        if (prev > (std::numeric_limits<std::int64_t>::max() - 1) / mult)
            throw ConfigError("schedule delay overflows 64-bit slot index");
        delays_[k] = mult * prev + 1;
    }
}

int Schedule::rounds(int i) const {
    if (i < 1 || i > size())
        throw std::invalid_argument("rounds(i): node out of range");
    return rounds_[i - 1];
}

std::int64_t Schedule::delay(int i) const {
    if (i < 1 || i > size())
        throw std::invalid_argument("delay(i): node out of range");
    return delays_[i - 1];
}

std::vector<std::int64_t> Schedule::offsets(int i) const {
    if (i < 3 || i > size())
        throw std::invalid_argument("offsets(i): need 3 <= i <= N");
    std::vector<std::int64_t> out(static_cast<std::size_t>(i - 2));
    for (int j = 1; j <= i - 2; ++j) out[j - 1] = delay(i - 1) - delay(j);
    return out;
}

std::int64_t Schedule::steady_state_slot(int i) const {
    if (i < 2 || i > size())
        throw std::invalid_argument("steady_state_slot(i): need 2 <= i <= N");
    // All transmitters j <= i-1 are active once node i-1 has started.
    return delay(i - 1) + 1;
}

Schedule build_schedule(const ChannelModel& model, const ScenarioConfig& cfg) {
    const int n = model.size();
    std::vector<int> rounds(static_cast<std::size_t>(n), 0);

    if (cfg.rounds.kind == RoundsPolicy::Kind::Uniform) {
        if (cfg.rounds.m < 0)
            throw ConfigError("uniform rounds policy needs m >= 0");
        std::fill(rounds.begin(), rounds.end(), cfg.rounds.m);
    } else {
        if (!(cfg.gamma >= 1.0))
            throw ConfigError("decoding threshold gamma must be >= 1");
        // Node 2 hears no unknown interference, so it never cancels.
        for (int i = 3; i <= n; ++i) {
            const auto m = min_rounds(model, i, cfg.gamma);
            if (!m) {
                char buf[96];
                std::snprintf(buf, sizeof buf,
                              "node %d cannot reach the decoding threshold "
                              "for any number of rounds", i);
                throw FeasibilityError(i, buf);
            }
            rounds[static_cast<std::size_t>(i - 1)] = *m;
        }
    }
    return Schedule(std::move(rounds));
}

std::int64_t delay_closed_form(int i, int m) {
    if (i < 1) throw std::invalid_argument("delay_closed_form: node index >= 1");
    if (m < 0) throw std::invalid_argument("delay_closed_form: rounds >= 0");
    // delay(i) = sum_{k=0}^{i-2} (m+1)^k covers both the m = 0 and m > 0
    // closed forms with exact integer arithmetic.
    std::int64_t acc = 0;
    std::int64_t pw = 1;
    for (int k = 0; k <= i - 2; ++k) {
        if (acc > std::numeric_limits<std::int64_t>::max() - pw)
            throw ConfigError("delay overflows 64-bit slot index");
        acc += pw;
        if (k < i - 2) {
            if (pw > std::numeric_limits<std::int64_t>::max() / (m + 1))
                throw ConfigError("delay overflows 64-bit slot index");
            pw *= (m + 1);
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Received signal and cancellation
// ---------------------------------------------------------------------------

SignalExpr received_signal(const ChannelModel& model, const Schedule& sched,
                           int i, std::int64_t t) {
    if (i < 2 || i > model.size())
        throw std::invalid_argument("received_signal: need 2 <= i <= N");
    if (t < sched.steady_state_slot(i))
        throw std::invalid_argument(
            "received_signal: slot precedes steady state for this node");

    SignalExpr y;
    for (int j = 1; j < i; ++j)
        y.add_term(Term::data(t - sched.delay(j)), model.gain(j, i));
    y.add_term(Term::noise(i, t), {1.0, 0.0});
    return y;
}

namespace {

void check_cancel_args(const ChannelModel& model, const Schedule& sched, int i,
                       int m) {
    if (sched.size() != model.size())
        throw std::invalid_argument("schedule and channel model sizes differ");
    if (i < 3 || i > model.size())
        throw std::invalid_argument("cancellation applies to nodes 3..N");
    if (m < 0) throw std::invalid_argument("rounds must be >= 0");
}

} // namespace

CancellationResult cancel_rounds_recursive(const ChannelModel& model,
                                           const Schedule& sched, int i, int m,
                                           std::optional<std::int64_t> t_opt) {
    check_cancel_args(model, sched, i, m);
    const std::int64_t t = t_opt.value_or(sched.steady_state_slot(i));
    if (t < sched.steady_state_slot(i))
        throw std::invalid_argument("cancellation slot precedes steady state");

    const Term useful = Term::data(t - sched.delay(i - 1));
    const cplx h_strong = model.gain(i - 1, i);

    SignalExpr g = received_signal(model, sched, i, t);

    for (int r = 1; r <= m; ++r) {
        // Snapshot the unknown data terms; the loop below mutates g.
        std::vector<std::pair<std::int64_t, cplx>> unknown;
        for (const auto& [term, c] : g.terms())
            if (term.kind == Term::Kind::Data && term != useful)
                unknown.emplace_back(term.slot, c);
        if (unknown.empty()) break;

        for (const auto& [slot, c] : unknown) {
            // x(slot) rides strongest on node i-1's copy, heard at t + s.
            const std::int64_t s = slot - useful.slot;
            g.add_scaled(received_signal(model, sched, i, t + s), -c / h_strong);
        }
    }

    CancellationResult res;
    res.node = i;
    res.rounds = m;
    res.sinr_db = to_db(sinr_linear(
        power_split(g, useful, model.tx_power(), model.noise_power())));
    res.expr = std::move(g);
    // Each round waits out the longest offset delta_1 = delay(i-1) before the
    // freshest slot it needs has arrived.
    res.slots_waited = static_cast<std::int64_t>(m) * sched.delay(i - 1);
    return res;
}

SignalExpr cancel_rounds_expanded(const ChannelModel& model,
                                  const Schedule& sched, int i, int m,
                                  std::optional<std::int64_t> t_opt,
                                  std::uint64_t term_budget) {
    check_cancel_args(model, sched, i, m);
    const std::int64_t t = t_opt.value_or(sched.steady_state_slot(i));
    if (t < sched.steady_state_slot(i))
        throw std::invalid_argument("cancellation slot precedes steady state");

    const int w = i - 2;  // number of weak transmitters
    if (w > 1 &&
        std::pow(static_cast<double>(w), m + 1) > static_cast<double>(term_budget))
        throw TermBudgetError(
            "expanded cancellation exceeds the term budget; raise it or use "
            "the recursive route");

    const cplx h_strong = model.gain(i - 1, i);
    const auto deltas = sched.offsets(i);

    SignalExpr g = received_signal(model, sched, i, t);

    // Round r adds, with sign (-1)^r, one shifted received signal per ordered
    // tuple (j_1..j_r) of weak transmitters.
    std::vector<int> idx;
    for (int r = 1; r <= m; ++r) {
        const double sign = (r % 2 == 0) ? 1.0 : -1.0;
        idx.assign(static_cast<std::size_t>(r), 0);
        while (true) {
            cplx prod{1.0, 0.0};
            std::int64_t shift = 0;
            for (int k = 0; k < r; ++k) {
                prod *= model.gain(idx[static_cast<std::size_t>(k)] + 1, i);
                shift += deltas[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
            }
            for (int k = 0; k < r; ++k) prod /= h_strong;

            g.add_scaled(received_signal(model, sched, i, t + shift),
                         sign * prod);

            // Odometer over tuples in [0, w) ^ r.
            int pos = r - 1;
            while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == w) {
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
    return g;
}

bool decode(double sinr_db, double gamma_linear) {
    if (!(gamma_linear > 0.0))
        throw std::invalid_argument("decode: gamma must be positive");
    return from_db(sinr_db) >= gamma_linear;
}

// ---------------------------------------------------------------------------
// Transmission trace
// ---------------------------------------------------------------------------

std::optional<std::int64_t> TransmissionTrace::packet_at(int slot,
                                                         int node) const {
    if (slot < 1 || slot > slots || node < 1 || node > nodes)
        throw std::invalid_argument("packet_at: cell out of range");
    const std::int64_t v =
        cells[static_cast<std::size_t>(slot - 1) * nodes + (node - 1)];
    if (v == 0) return std::nullopt;
    return v;
}

std::string TransmissionTrace::to_csv() const {
    std::string out = "slot,node,packet_index\n";
    char buf[96];
    for (int t = 1; t <= slots; ++t) {
        for (int i = 1; i <= nodes; ++i) {
            const auto p = packet_at(t, i);
            if (p)
                std::snprintf(buf, sizeof buf, "%d,%d,%lld\n", t, i,
                              static_cast<long long>(*p));
            else
                std::snprintf(buf, sizeof buf, "%d,%d,-\n", t, i);
            out += buf;
        }
    }
    return out;
}

TransmissionTrace trace_schedule(const Schedule& sched, int slots) {
    if (slots < 1) throw std::invalid_argument("trace_schedule: slots >= 1");
    TransmissionTrace tr;
    tr.nodes = sched.size();
    tr.slots = slots;
    tr.cells.assign(static_cast<std::size_t>(slots) * tr.nodes, 0);
    for (int t = 1; t <= slots; ++t) {
        for (int i = 1; i <= tr.nodes; ++i) {
            const std::int64_t p = t - sched.delay(i);
            if (p >= 1)
                tr.cells[static_cast<std::size_t>(t - 1) * tr.nodes + (i - 1)] = p;
        }
    }
    return tr;
}

} // namespace e2ekic
