#include "doctest.h"

#include <cmath>
#include <vector>

#include "e2ekic/analysis.hpp"
#include "e2ekic/errors.hpp"
#include "e2ekic/monte_carlo.hpp"

using namespace e2ekic;

namespace {

McConfig quick(std::uint64_t trials, std::uint64_t seed = 12345) {
    McConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("splitmix64 matches the reference sequence") {
    std::uint64_t state = 0;
    CHECK(splitmix64_next(state) == 0xE220A8397B1DCDAFull);
    CHECK(splitmix64_next(state) == 0x6E789E6AA1B965F4ull);
    CHECK(splitmix64_next(state) == 0x06C45D188009454Full);
}

TEST_CASE("reports are deterministic in the seed, not the trial order") {
    const auto model = ChannelModel::equally_spaced(4, 3.0, 1.0, 1.0, 20.0);
    const Schedule s(std::vector<int>(4, 1));

    const auto a = run_monte_carlo(model, s, 4, 1, quick(64));
    const auto b = run_monte_carlo(model, s, 4, 1, quick(64));
    CHECK(a.empirical_residual == b.empirical_residual);
    CHECK(a.empirical_useful == b.empirical_useful);

    const auto c = run_monte_carlo(model, s, 4, 1, quick(64, 999));
    CHECK(c.empirical_residual != a.empirical_residual);

    // Prefix property of counter-based streams: the first trial of a longer
    // run is the same draw as a single-trial run.
    const auto one = run_monte_carlo(model, s, 4, 1, quick(1));
    const auto myriad = run_monte_carlo(model, s, 4, 1, quick(10000));
    CHECK(one.empirical_residual != 0.0);
    CHECK(myriad.trials == 10000);
}

TEST_CASE("empirical residual tracks the symbolic prediction") {
    const auto model = ChannelModel::equally_spaced(3, 3.0, 1.0, 1.0, 20.0);
    const Schedule s(std::vector<int>(3, 1));
    const auto rep = run_monte_carlo(model, s, 3, 1, quick(20000));
    CHECK(rep.predicted_residual == doctest::Approx(0.026875).epsilon(1e-12));
    CHECK(rep.rel_error < 5.0 / std::sqrt(20000.0));
    CHECK(rep.predicted_useful == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.empirical_useful - 1.0) < 5.0 / std::sqrt(20000.0));
}

TEST_CASE("validation grid stays within the chi-square tolerance") {
    const auto model = ChannelModel::equally_spaced(6, 3.0, 1.0, 1.0, 20.0);
    const double tol = 5.0 / std::sqrt(4000.0);
    for (int m = 0; m <= 3; ++m) {
        const Schedule s(std::vector<int>(6, m));
        for (int i = 3; i <= 6; ++i) {
            const auto rep = run_monte_carlo(model, s, i, m, quick(4000));
            CHECK(rep.rel_error < tol);
            // Sampled residual also respects the closed-form ceiling here.
            CHECK(rep.empirical_residual <
                  interference_bound(model, i, m) * (1.0 + tol));
        }
    }
}

TEST_CASE("noiseless runs isolate the interference component") {
    const auto noisy = ChannelModel::equally_spaced(4, 3.0, 1.0, 1.0, 20.0);
    const auto silent = ChannelModel::equally_spaced_sigma(4, 3.0, 1.0, 1.0, 0.0);
    const Schedule s(std::vector<int>(4, 1));

    const auto rep = run_monte_carlo(silent, s, 4, 1, quick(20000));
    const auto split = power_split(
        cancel_rounds_recursive(noisy, s, 4, 1).expr,
        Term::data(s.steady_state_slot(4) - s.delay(3)), 1.0, 0.01);
    CHECK(rep.predicted_residual ==
          doctest::Approx(split.interference).epsilon(1e-12));
    CHECK(std::abs(rep.empirical_residual - split.interference) <
          split.interference * 3.0 / std::sqrt(20000.0));
}

TEST_CASE("QPSK symbols carry exactly unit power") {
    const auto model = ChannelModel::equally_spaced(3, 3.0, 1.0, 1.0, 20.0);
    const Schedule s(std::vector<int>(3, 1));
    McConfig cfg = quick(5000);
    cfg.symbol_model = SymbolModel::Qpsk;
    const auto rep = run_monte_carlo(model, s, 3, 1, cfg);
    // |x|^2 is constant for QPSK, so the useful average is exact.
    CHECK(rep.empirical_useful == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.rel_error < 5.0 / std::sqrt(5000.0));
}

TEST_CASE("trial count must be positive") {
    const auto model = ChannelModel::equally_spaced(3, 3.0, 1.0, 1.0, 20.0);
    const Schedule s(std::vector<int>(3, 1));
    CHECK_THROWS_AS(run_monte_carlo(model, s, 3, 1, quick(0)), ConfigError);
}
