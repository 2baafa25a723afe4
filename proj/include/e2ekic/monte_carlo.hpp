#pragma once

#include <cstdint>

#include "e2ekic/channel_model.hpp"
#include "e2ekic/kic_engine.hpp"

namespace e2ekic {

// ---------------------------------------------------------------------------
// Waveform-level validation of the symbolic engine
//
// Draws random source symbols and noise, runs the cancellation numerically on
// the sampled waveforms, and compares average residual power against the
// prediction from the symbolic expression.  Two independent evaluation routes
// guard against bugs: (a) the symbolic residual with samples substituted in,
// (b) the tuple-expansion recursion executed directly on sampled received
// values.  They must agree to 1e-9 on every trial.
// ---------------------------------------------------------------------------

enum class SymbolModel { CircularGaussian, Qpsk };

struct McConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 12345;
    SymbolModel symbol_model = SymbolModel::CircularGaussian;
};

struct McReport {
    int node = 0;
    int rounds = 0;
    std::uint64_t trials = 0;
    double predicted_useful = 0.0;
    double predicted_residual = 0.0;  // interference + noise power
    double empirical_useful = 0.0;
    double empirical_residual = 0.0;
    double rel_error = 0.0;  // |empirical - predicted| / predicted residual
};

McReport run_monte_carlo(const ChannelModel& model, const Schedule& sched,
                         int i, int m, const McConfig& cfg);

// splitmix64 step; exposed for tests that pin the sample stream.
std::uint64_t splitmix64_next(std::uint64_t& state);

} // namespace e2ekic
