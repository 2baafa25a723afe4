#pragma once

#include <cstdint>
#include <vector>

#include "e2ekic/signal_expr.hpp"

namespace e2ekic {

// ---------------------------------------------------------------------------
// ChannelModel
//
// A chain of N nodes on a line.  Node 1 originates the data stream; every
// later node i overhears all earlier transmitters j < i through a flat-fading
// gain h_ji.  Gains follow a power-law path loss in distance, normalised so
// the adjacent hop has unit magnitude: |h_ji|^2 = (i-j)^-alpha under equal
// spacing (the spacing itself cancels out of every ratio the simulator uses).
// Noise power is set from the configured single-hop SNR: sigma^2 = P_T *
// 10^(-snr_db/10).
// ---------------------------------------------------------------------------

class ChannelModel {
public:
    static ChannelModel equally_spaced(int n, double alpha, double spacing,
                                       double tx_power, double single_hop_snr_db);

    // Arbitrary node positions along the line (strictly increasing).  Gains
    // are normalised by the first hop distance so |h_12| = 1.
    static ChannelModel from_positions(const std::vector<double>& positions,
                                       double alpha, double tx_power,
                                       double single_hop_snr_db);

    // Same geometry but an explicit noise power; used for noiseless runs.
    static ChannelModel equally_spaced_sigma(int n, double alpha, double spacing,
                                             double tx_power, double noise_power);

    // Copy with gain phases drawn uniformly from [0, 2pi), magnitudes kept.
    // Exploratory option only; all analytic results assume zero phases.
    ChannelModel with_random_phases(std::uint64_t seed) const;

    int size() const { return n_; }
    double alpha() const { return alpha_; }
    double tx_power() const { return tx_power_; }
    double noise_power() const { return noise_power_; }
    double configured_snr_db() const { return configured_snr_db_; }

    // Channel from transmitter j to receiver i, 1 <= j < i <= N.
    cplx gain(int j, int i) const;
    double gain_sq(int j, int i) const;

    // SNR of the direct hop into node i (from node i-1), in dB.
    double single_hop_snr_db(int i) const;

private:
    ChannelModel() = default;
    void build_gains(const std::vector<double>& positions);
    std::size_t index(int j, int i) const;

    int n_ = 0;
    double alpha_ = 0.0;
    double tx_power_ = 1.0;
    double noise_power_ = 0.0;
    double configured_snr_db_ = 0.0;
    std::vector<cplx> gains_;  // packed lower triangle, j < i
};

// How many cancellation rounds each node runs.
struct RoundsPolicy {
    enum class Kind { Uniform, AdaptiveMin };
    Kind kind = Kind::Uniform;
    int m = 2;  // rounds for Uniform; ignored for AdaptiveMin
};

// Scenario knobs shared by the schedule builder and the analysis layer.
// gamma is the decoding SINR threshold in linear units (>= 1).
struct ScenarioConfig {
    double gamma = 10.0;
    double single_hop_snr_db = 20.0;
    RoundsPolicy rounds;
};

} // namespace e2ekic
