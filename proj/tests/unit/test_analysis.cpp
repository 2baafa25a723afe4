#include "doctest.h"

#include <cmath>
#include <vector>

#include "e2ekic/analysis.hpp"
#include "e2ekic/kic_engine.hpp"

using namespace e2ekic;

namespace {

ChannelModel ref_model(int n, double alpha) {
    return ChannelModel::equally_spaced(n, alpha, 1.0, 1.0, 20.0);
}

// Smallest m whose bound-level SINR reaches gamma, scanning directly.
int brute_min_rounds(const ChannelModel& model, int i, double gamma, int cap) {
    for (int m = 0; m <= cap; ++m) {
        const double sinr =
            model.gain_sq(i - 1, i) * model.tx_power() / interference_bound(model, i, m);
        if (sinr >= gamma) return m;
    }
    return -1;
}

} // namespace

TEST_CASE("residual ratio rho under equal spacing") {
    const auto model = ref_model(6, 3.0);
    CHECK(rho(model, 3) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(rho(model, 4) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(rho(model, 6) == doctest::Approx(0.5).epsilon(1e-15));
    for (int i = 3; i <= 6; ++i)
        CHECK(rho(model, i) ==
              doctest::Approx(std::pow(2.0, -3.0) * (i - 2)).epsilon(1e-14));
}

TEST_CASE("interference bound golden values at the third node") {
    const auto model = ref_model(3, 3.0);
    CHECK(interference_bound(model, 3, 0) ==
          doctest::Approx(0.135).epsilon(1e-14));
    CHECK(interference_bound(model, 3, 1) ==
          doctest::Approx(0.026875).epsilon(1e-14));
}

TEST_CASE("interference bound at node 4, one round") {
    const auto model = ref_model(4, 3.0);
    // b^2 (i-2) rho P_T + sigma^2 (1 - rho^2)/(1 - rho) with rho = 1/4.
    CHECK(interference_bound(model, 4, 1) ==
          doctest::Approx(0.075).epsilon(1e-14));
}

TEST_CASE("rho = 1 limit switches to the linear noise sum") {
    // At alpha = 2 the two-hop gain is exactly 1/4, so rho(6) = 4/4 lands on
    // 1 bitwise and the geometric series degenerates to sigma^2 (m+1).
    const auto model = ref_model(6, 2.0);
    REQUIRE(rho(model, 6) == 1.0);
    for (int m = 0; m <= 3; ++m)
        CHECK(interference_bound(model, 6, m) ==
              doctest::Approx(1.0 + 0.01 * (m + 1)).epsilon(1e-14));
}

TEST_CASE("bound-level SINR equals the exact value at the third node") {
    // Single interferer: the geometric-series bound is tight there.
    for (double alpha : {2.1, 3.0, 4.0}) {
        const auto model = ref_model(3, alpha);
        for (int m = 0; m <= 4; ++m) {
            const Schedule s(std::vector<int>(3, m));
            const auto res = cancel_rounds_recursive(model, s, 3, m);
            CHECK(std::abs(sinr_lower_bound_db(model, 3, m) - res.sinr_db) <=
                  1e-9);
        }
    }
}

TEST_CASE("bound-level SINR iterates strictly upward while rho < 1") {
    for (double alpha : {2.1, 3.0, 4.0}) {
        const auto model = ref_model(8, alpha);
        for (int i = 3; i <= 8; ++i) {
            if (rho(model, i) >= 1.0) continue;
            for (int m = 0; m <= 3; ++m)
                CHECK(sinr_lower_bound_db(model, i, m + 1) >
                      sinr_lower_bound_db(model, i, m));
        }
    }
}

TEST_CASE("feasibility condition") {
    CHECK(feasibility_condition(ref_model(3, 3.0), 3, 10.0));
    // Low exponents keep the direct and two-hop links too close: at alpha
    // around 0.1 the margin term drags the right side below 3.
    CHECK_FALSE(feasibility_condition(ref_model(3, 0.1), 3, 10.0));
    CHECK(feasibility_condition(ref_model(3, 0.5), 3, 10.0));

    const auto model = ref_model(8, 2.1);
    for (int i = 3; i <= 8; ++i)
        if (feasibility_condition(model, i, 10.0)) CHECK(rho(model, i) < 1.0);
}

TEST_CASE("minimal rounds golden value and brute-force agreement") {
    const auto m3 = min_rounds(ref_model(3, 3.0), 3, 10.0);
    REQUIRE(m3.has_value());
    CHECK(*m3 == 1);

    for (double alpha : {2.1, 3.0, 4.0}) {
        const auto model = ref_model(8, alpha);
        for (double gamma : {1.0, 2.0, 10.0, 31.622776601683793}) {
            for (int i = 3; i <= 8; ++i) {
                const auto m = min_rounds(model, i, gamma);
                const int brute = brute_min_rounds(model, i, gamma, 500);
                if (m) {
                    CHECK(*m == brute);
                } else {
                    CHECK_FALSE(feasibility_condition(model, i, gamma));
                    CHECK(brute == -1);
                }
            }
        }
    }
}

TEST_CASE("gamma = 1 needs no cancellation rounds") {
    const auto m = min_rounds(ref_model(3, 3.0), 3, 1.0);
    REQUIRE(m.has_value());
    CHECK(*m == 0);
}

TEST_CASE("chain length limits") {
    CHECK(max_chain_length(4.0) == 16);
    CHECK(max_chain_length(3.0) == 8);
    CHECK(max_chain_length(2.0) == 4);

    // Exactly integral bound excludes itself: B = 2 makes alpha = 2 land on 4.
    CHECK(max_chain_length_general(2.0, 2.0) == 3);
    CHECK(max_chain_length_general(2.0, 0.5) == 5);

    for (double alpha = 2.001; alpha < 6.0; alpha += 0.05)
        CHECK(max_chain_length(alpha) >= 4);

    CHECK_THROWS_AS(max_chain_length(0.0), std::invalid_argument);
    CHECK_THROWS_AS(max_chain_length(4.0, -1.0), std::invalid_argument);
}

TEST_CASE("analysis rejects nodes without two upstream transmitters") {
    const auto model = ref_model(4, 3.0);
    CHECK_THROWS_AS(rho(model, 2), std::invalid_argument);
    CHECK_THROWS_AS(interference_bound(model, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(min_rounds(model, 2, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(feasibility_condition(model, 3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(interference_bound(model, 3, -1), std::invalid_argument);
}

TEST_CASE("bound report bundles the per-node analysis") {
    const auto model = ref_model(4, 3.0);
    const auto rep = make_bound_report(model, 3, 1, 10.0);
    CHECK(rep.node == 3);
    CHECK(rep.rounds == 1);
    CHECK(rep.rho == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(rep.interference_bound == doctest::Approx(0.026875).epsilon(1e-14));
    CHECK(rep.sinr_lb_db == doctest::Approx(15.706515270763381).epsilon(1e-12));
    CHECK(rep.feasible);
    REQUIRE(rep.min_rounds.has_value());
    CHECK(*rep.min_rounds == 1);
}
