#include "e2ekic/channel_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "e2ekic/errors.hpp"

namespace e2ekic {

namespace {

void check_common(int n, double alpha, double tx_power) {
    if (n < 2) throw ConfigError("channel model needs at least 2 nodes");
    if (!(alpha > 0.0)) throw ConfigError("path loss exponent must be positive");
    if (!(tx_power > 0.0)) throw ConfigError("transmit power must be positive");
}

} // namespace

std::size_t ChannelModel::index(int j, int i) const {
    // Packed rows: receiver i contributes i-1 entries for j = 1..i-1.
    return static_cast<std::size_t>((i - 2) * (i - 1) / 2 + (j - 1));
}

void ChannelModel::build_gains(const std::vector<double>& positions) {
    const double d0 = positions[1] - positions[0];
    gains_.resize(static_cast<std::size_t>(n_ - 1) * n_ / 2);
    for (int i = 2; i <= n_; ++i) {
        for (int j = 1; j < i; ++j) {
            const double d = positions[i - 1] - positions[j - 1];
            const double mag = std::pow(d / d0, -alpha_ / 2.0);
            gains_[index(j, i)] = cplx{mag, 0.0};
        }
    }
}

ChannelModel ChannelModel::equally_spaced(int n, double alpha, double spacing,
                                          double tx_power,
                                          double single_hop_snr_db) {
    check_common(n, alpha, tx_power);
    if (!(spacing > 0.0)) throw ConfigError("node spacing must be positive");

    ChannelModel m;
    m.n_ = n;
    m.alpha_ = alpha;
    m.tx_power_ = tx_power;
    m.configured_snr_db_ = single_hop_snr_db;
    m.noise_power_ = tx_power * std::pow(10.0, -single_hop_snr_db / 10.0);

    std::vector<double> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = spacing * i;
    m.build_gains(pos);
    return m;
}

ChannelModel ChannelModel::from_positions(const std::vector<double>& positions,
                                          double alpha, double tx_power,
                                          double single_hop_snr_db) {
    check_common(static_cast<int>(positions.size()), alpha, tx_power);
    for (std::size_t k = 1; k < positions.size(); ++k)
        if (!(positions[k] > positions[k - 1]))
            throw ConfigError("node positions must be strictly increasing");

    ChannelModel m;
    m.n_ = static_cast<int>(positions.size());
    m.alpha_ = alpha;
    m.tx_power_ = tx_power;
    m.configured_snr_db_ = single_hop_snr_db;
    m.noise_power_ = tx_power * std::pow(10.0, -single_hop_snr_db / 10.0);
    m.build_gains(positions);
    return m;
}

ChannelModel ChannelModel::equally_spaced_sigma(int n, double alpha,
                                                double spacing, double tx_power,
                                                double noise_power) {
    if (noise_power < 0.0) throw ConfigError("noise power must be non-negative");
    ChannelModel m = equally_spaced(n, alpha, spacing, tx_power, 0.0);
    m.noise_power_ = noise_power;
    m.configured_snr_db_ =
        noise_power == 0.0 ? std::numeric_limits<double>::infinity()
                           : to_db(tx_power / noise_power);
    return m;
}

ChannelModel ChannelModel::with_random_phases(std::uint64_t seed) const {
    ChannelModel m = *this;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    for (auto& g : m.gains_) {
        const double phi = uni(rng);
        g = std::abs(g) * cplx{std::cos(phi), std::sin(phi)};
    }
    return m;
}

cplx ChannelModel::gain(int j, int i) const {
    if (i < 2 || i > n_ || j < 1 || j >= i)
        throw std::invalid_argument("gain(j,i) requires 1 <= j < i <= N");
    return gains_[index(j, i)];
}

double ChannelModel::gain_sq(int j, int i) const { return std::norm(gain(j, i)); }

double ChannelModel::single_hop_snr_db(int i) const {
    return to_db(gain_sq(i - 1, i) * tx_power_ / noise_power_);
}

} // namespace e2ekic
