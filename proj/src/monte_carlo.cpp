#include "e2ekic/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

#include "e2ekic/errors.hpp"

namespace e2ekic {

std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

// Uniform in (0, 1]; the +1 keeps log() finite in Box-Muller.
double to_unit(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

cplx draw_circular(std::uint64_t& state, double power) {
    const double u1 = to_unit(splitmix64_next(state));
    const double u2 = to_unit(splitmix64_next(state));
    const double r = std::sqrt(-std::log(u1) * power);
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

cplx draw_qpsk(std::uint64_t& state, double power) {
    const std::uint64_t bits = splitmix64_next(state);
    const double a = std::sqrt(power / 2.0);
    return {(bits & 1) ? a : -a, (bits & 2) ? a : -a};
}

} // namespace

McReport run_monte_carlo(const ChannelModel& model, const Schedule& sched,
                         int i, int m, const McConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("monte carlo needs at least 1 trial");

    // Route (a): symbolic residual from the per-round recursion.
    const CancellationResult sym = cancel_rounds_recursive(model, sched, i, m);
    const std::int64_t t = sched.steady_state_slot(i);
    const Term useful = Term::data(t - sched.delay(i - 1));
    const cplx useful_coef = sym.expr.coef(useful);

    // Route (b): weights of shifted received signals from the tuple
    // expansion, g = sum_s w(s) y_i(t + s).
    std::map<std::int64_t, cplx> shift_w;
    shift_w[0] = {1.0, 0.0};
    {
        const auto deltas = sched.offsets(i);
        const cplx h_strong = model.gain(i - 1, i);
        std::vector<int> idx;
        const int w = i - 2;
        for (int r = 1; r <= m; ++r) {
            const double sign = (r % 2 == 0) ? 1.0 : -1.0;
            idx.assign(static_cast<std::size_t>(r), 0);
            while (true) {
                cplx prod{1.0, 0.0};
                std::int64_t shift = 0;
                for (int k = 0; k < r; ++k) {
                    prod *= model.gain(idx[static_cast<std::size_t>(k)] + 1, i);
                    shift += deltas[static_cast<std::size_t>(
                        idx[static_cast<std::size_t>(k)])];
                }
                for (int k = 0; k < r; ++k) prod /= h_strong;
                shift_w[shift] += sign * prod;

                int pos = r - 1;
                while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == w) {
                    idx[static_cast<std::size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 0) break;
            }
        }
    }

    // Slot universe: data slots feeding any shifted received signal, one
    // noise slot per shift.  Fixed sorted order keeps the sample stream
    // deterministic.
    std::map<std::int64_t, int> x_index;
    std::vector<std::int64_t> z_slots;
    z_slots.reserve(shift_w.size());
    for (const auto& [s, w] : shift_w) {
        (void)w;
        for (int j = 1; j < i; ++j) x_index.emplace(t + s - sched.delay(j), 0);
        z_slots.push_back(t + s);
    }
    for (const auto& [term, c] : sym.expr.terms()) {
        (void)c;
        if (term.kind == Term::Kind::Data) x_index.emplace(term.slot, 0);
    }
    {
        int k = 0;
        for (auto& [slot, id] : x_index) {
            (void)slot;
            id = k++;
        }
    }
    const auto x_id = [&](std::int64_t slot) { return x_index.at(slot); };
    const auto z_id = [&](std::int64_t slot) {
        const auto it = std::lower_bound(z_slots.begin(), z_slots.end(), slot);
        return static_cast<int>(it - z_slots.begin());
    };

    // Flatten route (a) for fast per-trial evaluation.
    struct Flat {
        int idx;
        cplx coef;
    };
    std::vector<Flat> sym_data, sym_noise;
    for (const auto& [term, c] : sym.expr.terms()) {
        if (term.kind == Term::Kind::Data)
            sym_data.push_back({x_id(term.slot), c});
        else
            sym_noise.push_back({z_id(term.slot), c});
    }

    // Gains used when evaluating y_i numerically.
    std::vector<cplx> h(static_cast<std::size_t>(i));
    for (int j = 1; j < i; ++j) h[static_cast<std::size_t>(j)] = model.gain(j, i);

    struct ShiftEval {
        cplx weight;
        std::vector<int> x_ids;  // ordered j = 1..i-1
        int z_idx;
    };
    std::vector<ShiftEval> evals;
    evals.reserve(shift_w.size());
    for (const auto& [s, w] : shift_w) {
        ShiftEval ev;
        ev.weight = w;
        for (int j = 1; j < i; ++j)
            ev.x_ids.push_back(x_id(t + s - sched.delay(j)));
        ev.z_idx = z_id(t + s);
        evals.push_back(std::move(ev));
    }

    const double tx = model.tx_power();
    const double sigma2 = model.noise_power();
    const int useful_idx = x_id(useful.slot);

    std::vector<cplx> xv(x_index.size());
    std::vector<cplx> zv(z_slots.size());

    double useful_acc = 0.0;
    double resid_acc = 0.0;

    for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        // Counter-based stream: trial order never affects the draws.
        std::uint64_t state = cfg.seed + trial * 0x9E3779B97F4A7C15ull;
        for (auto& x : xv)
            x = cfg.symbol_model == SymbolModel::Qpsk ? draw_qpsk(state, tx)
                                                      : draw_circular(state, tx);
        for (auto& z : zv)
            z = sigma2 == 0.0 ? cplx{0.0, 0.0} : draw_circular(state, sigma2);

        cplx g1{0.0, 0.0};
        for (const auto& f : sym_data) g1 += f.coef * xv[static_cast<std::size_t>(f.idx)];
        for (const auto& f : sym_noise) g1 += f.coef * zv[static_cast<std::size_t>(f.idx)];

        cplx g2{0.0, 0.0};
        for (const auto& ev : evals) {
            cplx y = zv[static_cast<std::size_t>(ev.z_idx)];
            for (int j = 1; j < i; ++j)
                y += h[static_cast<std::size_t>(j)] *
                     xv[static_cast<std::size_t>(ev.x_ids[static_cast<std::size_t>(j - 1)])];
            g2 += ev.weight * y;
        }

        if (std::abs(g1 - g2) > 1e-9) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "sample routes disagree at node %d, m %d, trial %llu "
                          "(|diff| = %.3g)", i, m,
                          static_cast<unsigned long long>(trial),
                          std::abs(g1 - g2));
            throw InternalError(buf);
        }

        const cplx u = useful_coef * xv[static_cast<std::size_t>(useful_idx)];
        useful_acc += std::norm(u);
        resid_acc += std::norm(g1 - u);
    }

    const PowerSplit ps = power_split(sym.expr, useful, tx, sigma2);

    McReport rep;
    rep.node = i;
    rep.rounds = m;
    rep.trials = cfg.trials;
    rep.predicted_useful = ps.useful;
    rep.predicted_residual = ps.interference + ps.noise;
    rep.empirical_useful = useful_acc / static_cast<double>(cfg.trials);
    rep.empirical_residual = resid_acc / static_cast<double>(cfg.trials);
    if (rep.predicted_residual > 0.0)
        rep.rel_error = std::abs(rep.empirical_residual - rep.predicted_residual) /
                        rep.predicted_residual;
    else
        rep.rel_error = rep.empirical_residual == 0.0
                            ? 0.0
                            : std::numeric_limits<double>::infinity();
    return rep;
}

} // namespace e2ekic
