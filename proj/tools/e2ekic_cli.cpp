#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"

#include "e2ekic/e2ekic.h"

namespace {

int status_to_exit(e2ekic_status st) {
    switch (st) {
        case E2EKIC_OK:
            return 0;
        case E2EKIC_ERR_INFEASIBLE:
            return 3;
        case E2EKIC_ERR_INTERNAL:
            return 4;
        default:
            // Config, argument, IO, and term-budget problems are all caller
            // input issues.
            return 2;
    }
}

void print_error(e2ekic_status st) {
    if (st == E2EKIC_ERR_INFEASIBLE)
        std::fprintf(stderr, "error: %s (node %d)\n", e2ekic_last_error(),
                     e2ekic_last_infeasible_node());
    else
        std::fprintf(stderr, "error: %s\n", e2ekic_last_error());
}

std::string output_dir_of(const e2ekic_config* cfg) {
    size_t needed = 0;
    if (e2ekic_config_output_dir(cfg, nullptr, 0, &needed) != E2EKIC_OK)
        return "?";
    std::string s(needed + 1, '\0');
    e2ekic_config_output_dir(cfg, s.data(), s.size(), nullptr);
    s.resize(needed);
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Chain-relay interference cancellation: figure datasets as CSV"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;

    app.add_option("--config", config_path,
                   "JSON experiment config (defaults when omitted)");
    auto* out_opt = app.add_option(
        "--out", out_dir,
        "Output directory (overrides config and E2EKIC_OUT_DIR)");
    auto* seed_opt =
        app.add_option("--seed", seed, "Monte Carlo seed override");

    auto* sweep = app.add_subcommand(
        "sinr-sweep", "Exact SINR and lower bound per (alpha, node, rounds)");
    auto* delays = app.add_subcommand(
        "delay-table",
        "End-to-end delay per (node, rounds); adds per-node adaptive delays "
        "when m_policy is adaptive_min");
    auto* bounds = app.add_subcommand(
        "bounds-report",
        "Feasibility, residual ratio rho, minimal rounds, max chain length");
    auto* example = app.add_subcommand(
        "example-n5", "Five-node transmission trace (m=2, 20 slots)");
    auto* mc = app.add_subcommand(
        "monte-carlo", "Sampled validation of the symbolic cancellation");

    // --config/--out/--seed live on the parent; accept them after the
    // subcommand name too.
    for (auto* sub : {sweep, delays, bounds, example, mc}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    e2ekic_config* cfg = nullptr;
    e2ekic_status st = config_path.empty()
                           ? e2ekic_config_default(&cfg)
                           : e2ekic_config_load(config_path.c_str(), &cfg);
    if (st != E2EKIC_OK) {
        print_error(st);
        return status_to_exit(st);
    }

    const char* env_dir = std::getenv("E2EKIC_OUT_DIR");
    if (st == E2EKIC_OK && env_dir && *env_dir && out_opt->count() == 0)
        st = e2ekic_config_set_output_dir(cfg, env_dir);
    if (st == E2EKIC_OK && out_opt->count() > 0)
        st = e2ekic_config_set_output_dir(cfg, out_dir.c_str());
    if (st == E2EKIC_OK && seed_opt->count() > 0)
        st = e2ekic_config_set_seed(cfg, seed);

    const char* files = "";
    if (st == E2EKIC_OK) {
        if (sweep->parsed()) {
            st = e2ekic_run_sinr_sweep(cfg);
            files = "sinr_sweep.csv";
        } else if (delays->parsed()) {
            st = e2ekic_run_delay_table(cfg);
            files = "delay_table.csv";
        } else if (bounds->parsed()) {
            st = e2ekic_run_bounds_report(cfg);
            files = "bounds_report.csv, max_chain_length.csv";
        } else if (example->parsed()) {
            st = e2ekic_run_example_n5(cfg);
            files = "trace_n5.csv";
        } else if (mc->parsed()) {
            st = e2ekic_run_monte_carlo(cfg);
            files = "monte_carlo.csv";
        }
    }

    if (st != E2EKIC_OK) {
        print_error(st);
        e2ekic_config_free(cfg);
        return status_to_exit(st);
    }

    std::printf("wrote %s in %s\n", files, output_dir_of(cfg).c_str());
    e2ekic_config_free(cfg);
    return 0;
}
