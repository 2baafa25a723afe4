#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "e2ekic/errors.hpp"
#include "e2ekic/experiment.hpp"

using namespace e2ekic;

namespace {

std::filesystem::path temp_dir(const char* tag) {
    auto p = std::filesystem::temp_directory_path() /
             (std::string("e2ekic_test_") + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("empty config object yields the reference scenario") {
    const auto cfg = parse_config_text("{}");
    CHECK(cfg.n == 8);
    REQUIRE(cfg.alpha_list.size() == 3);
    CHECK(cfg.alpha_list[0] == doctest::Approx(2.1));
    CHECK(cfg.alpha_list[1] == doctest::Approx(3.0));
    CHECK(cfg.alpha_list[2] == doctest::Approx(4.0));
    CHECK(cfg.single_hop_snr_db == 20.0);
    CHECK(cfg.gamma_db == 10.0);
    CHECK(cfg.gamma_linear() == doctest::Approx(10.0).epsilon(1e-15));
    REQUIRE(cfg.m_list.size() == 5);
    CHECK(cfg.m_list[4] == 4);
    CHECK(cfg.m_policy.kind == RoundsPolicy::Kind::Uniform);
    CHECK(cfg.m_policy.m == 2);
    CHECK(cfg.mc.trials == 100000);
    CHECK(cfg.mc.seed == 12345);
    CHECK(cfg.mc.symbol_model == SymbolModel::CircularGaussian);
    CHECK(cfg.output_dir == "out");
}

TEST_CASE("partial config keeps defaults for missing fields") {
    const auto cfg = parse_config_text(
        R"({"alpha_list": [3.0], "m_list": [0, 1], "monte_carlo": {"trials": 50}})");
    CHECK(cfg.n == 8);
    CHECK(cfg.alpha_list.size() == 1);
    CHECK(cfg.m_list.size() == 2);
    CHECK(cfg.mc.trials == 50);
    CHECK(cfg.mc.seed == 12345);
}

TEST_CASE("config validation lists every violation") {
    try {
        parse_config_text(R"({"n": 1, "alpha_list": [-1.0], "gamma_db": -3})");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("n must be >= 2") != std::string::npos);
        CHECK(msg.find("alpha_list entries") != std::string::npos);
        CHECK(msg.find("gamma_db") != std::string::npos);
    }
}

TEST_CASE("malformed JSON reports the parse location") {
    try {
        parse_config_text("{\n  \"n\": 8,\n  oops\n}");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("unknown keys and bad enum values are rejected") {
    CHECK_THROWS_AS(parse_config_text(R"({"nodes": 8})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"m_policy": {"type": "magic"}})"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"monte_carlo": {"symbol_model": "bpsk"}})"),
        ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"monte_carlo": {"trials": -5}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"n": "eight"})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"([1, 2])"), ConfigError);
}

TEST_CASE("adaptive policy parses") {
    const auto cfg =
        parse_config_text(R"({"m_policy": {"type": "adaptive_min"}})");
    CHECK(cfg.m_policy.kind == RoundsPolicy::Kind::AdaptiveMin);
}

TEST_CASE("config file round trip") {
    const auto dir = temp_dir("cfg");
    const auto path = dir / "config.json";
    {
        std::ofstream out(path);
        out << R"({"n": 4, "output_dir": ")" << (dir / "results").string()
            << R"("})";
    }
    const auto cfg = parse_config(path.string());
    CHECK(cfg.n == 4);
    CHECK_THROWS_AS(parse_config((dir / "missing.json").string()), IoError);
}

TEST_CASE("delay table covers the node/rounds grid") {
    auto cfg = parse_config_text(R"({"n": 4, "m_list": [0, 2]})");
    const auto rows = run_delay_table(cfg);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].node == 1);
    CHECK(rows[0].slots == 0);
    bool found = false;
    for (const auto& r : rows)
        if (r.node == 4 && r.rounds == 2) {
            CHECK(r.slots == 13);
            found = true;
        }
    CHECK(found);
    CHECK(to_csv(rows).rfind("i,m,delay_slots\n", 0) == 0);
}

TEST_CASE("sinr sweep emits the anchor rows and honest bounds") {
    const auto cfg = parse_config_text(
        R"({"n": 4, "alpha_list": [3.0], "m_list": [0, 1]})");
    const auto rows = run_sinr_sweep(cfg);
    REQUIRE(rows.size() == 6);  // nodes 2..4 x two rounds

    for (const auto& r : rows) {
        CHECK_FALSE(r.skipped);
        if (r.node == 2) {
            CHECK(r.actual_db == 20.0);  // exact configured anchor
            CHECK(r.lb_db == 20.0);
        } else {
            CHECK(r.lb_db <= r.actual_db + 1e-9);
        }
        if (r.node == 3 && r.rounds == 1)
            CHECK(r.actual_db ==
                  doctest::Approx(15.706515270763381).epsilon(1e-12));
        if (r.node == 3)
            CHECK(std::abs(r.lb_db - r.actual_db) <= 1e-9);
    }
}

TEST_CASE("sweep marks cells beyond the term budget as skipped") {
    const auto cfg = parse_config_text(
        R"({"n": 8, "alpha_list": [3.0], "m_list": [4], "term_budget": 10})");
    const auto rows = run_sinr_sweep(cfg);
    int skipped = 0;
    for (const auto& r : rows) {
        if (r.node <= 3) CHECK_FALSE(r.skipped);
        if (r.skipped) ++skipped;
    }
    CHECK(skipped == 5);  // nodes 4..8 at m=4 overflow a 10-term budget
    const std::string csv = to_csv(rows);
    CHECK(csv.find(",skipped,skipped") != std::string::npos);
}

TEST_CASE("bounds report and chain lengths") {
    const auto cfg = parse_config_text(R"({"n": 4, "alpha_list": [3.0, 4.0]})");
    const auto rows = run_bounds_report(cfg);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].alpha == doctest::Approx(3.0));
    CHECK(rows[0].node == 3);
    CHECK(rows[0].rho == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(rows[0].feasible);
    REQUIRE(rows[0].min_rounds.has_value());
    CHECK(*rows[0].min_rounds == 1);

    const auto chains = run_chain_lengths(cfg);
    REQUIRE(chains.size() == 2);
    CHECK(chains[0].max_length == 8);
    CHECK(chains[1].max_length == 16);

    const auto infeasible =
        run_bounds_report(parse_config_text(R"({"n": 3, "alpha_list": [0.1]})"));
    REQUIRE(infeasible.size() == 1);
    CHECK_FALSE(infeasible[0].feasible);
    CHECK_FALSE(infeasible[0].min_rounds.has_value());
    CHECK(to_csv(infeasible).find(",0,-") != std::string::npos);
}

TEST_CASE("adaptive delay table uses per-node minimal rounds") {
    const auto cfg = parse_config_text(
        R"({"n": 4, "alpha_list": [3.0], "m_policy": {"type": "adaptive_min"}})");
    const auto rows = run_adaptive_delay_table(cfg);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].rounds == 0);
    CHECK(rows[0].slots == 0);
    CHECK(rows[1].slots == 1);
    CHECK(rows[2].rounds == 1);
    CHECK(rows[2].slots == 3);
    CHECK(rows[3].rounds == 1);
    CHECK(rows[3].slots == 7);

    const auto stuck = parse_config_text(
        R"({"n": 3, "alpha_list": [0.1], "m_policy": {"type": "adaptive_min"}})");
    CHECK_THROWS_AS(run_adaptive_delay_table(stuck), FeasibilityError);
}

TEST_CASE("five-node example trace") {
    const auto tr = run_example_n5();
    CHECK(tr.nodes == 5);
    CHECK(tr.slots == 20);
    CHECK(tr.packet_at(5, 3) == 1);
    CHECK(tr.packet_at(14, 4) == 1);
    for (int i = 2; i <= 5; ++i) CHECK_FALSE(tr.packet_at(1, i).has_value());
}

TEST_CASE("monte carlo grid rows") {
    const auto cfg = parse_config_text(
        R"({"n": 5, "monte_carlo": {"trials": 500, "max_node": 4, "max_rounds": 1}})");
    const auto rows = run_monte_carlo_grid(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.trials == 500);
        CHECK(r.seed == 12345);
        CHECK(r.pred_residual > 0.0);
        CHECK(r.rel_error < 0.5);
    }
    CHECK(to_csv(rows).rfind("i,m,trials,seed,pred_residual,emp_residual,rel_err\n",
                             0) == 0);
}

TEST_CASE("dataset runs are reproducible") {
    const auto cfg = parse_config_text(
        R"({"n": 5, "alpha_list": [2.1], "monte_carlo": {"trials": 300, "max_node": 4, "max_rounds": 2}})");
    CHECK(to_csv(run_sinr_sweep(cfg)) == to_csv(run_sinr_sweep(cfg)));
    CHECK(to_csv(run_monte_carlo_grid(cfg)) == to_csv(run_monte_carlo_grid(cfg)));
}

TEST_CASE("commands write the documented files") {
    const auto dir = temp_dir("cmd");
    auto cfg = parse_config_text("{}");
    cfg.output_dir = (dir / "results").string();

    cmd_example_n5(cfg);
    const auto trace = slurp(dir / "results" / "trace_n5.csv");
    CHECK(trace.rfind("slot,node,packet_index\n", 0) == 0);
    CHECK(trace.find("14,4,1\n") != std::string::npos);

    auto small = parse_config_text(R"({"n": 4, "alpha_list": [3.0]})");
    small.output_dir = cfg.output_dir;
    cmd_delay_table(small);
    CHECK(slurp(dir / "results" / "delay_table.csv").rfind("i,m,", 0) == 0);
    cmd_bounds_report(small);
    CHECK(slurp(dir / "results" / "max_chain_length.csv") ==
          "alpha,max_chain_length\n3,8\n");
}

TEST_CASE("unwritable output reports an IO error") {
    const auto dir = temp_dir("io");
    const auto blocker = dir / "file";
    {
        std::ofstream out(blocker);
        out << "x";
    }
    auto cfg = parse_config_text("{}");
    cfg.output_dir = (blocker / "sub").string();
    CHECK_THROWS_AS(cmd_example_n5(cfg), IoError);
}
