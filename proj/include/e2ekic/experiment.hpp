#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "e2ekic/analysis.hpp"
#include "e2ekic/channel_model.hpp"
#include "e2ekic/kic_engine.hpp"
#include "e2ekic/monte_carlo.hpp"

namespace e2ekic {

// ---------------------------------------------------------------------------
// Experiment configuration
//
// Parsed from a JSON file; every field has a default so an empty object (or a
// missing --config flag) reproduces the reference scenario: N=8 chain, alpha
// in {2.1, 3, 4}, 20 dB single-hop SNR, 10 dB decode threshold, m in 0..4.
// ---------------------------------------------------------------------------

// Grid controls for the monte-carlo command.  The validation grid is
// i in [3, min(N, max_node)], m in [0, max_rounds], at one path-loss
// exponent (the emitted CSV schema carries no alpha column).
struct McRunConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 12345;
    SymbolModel symbol_model = SymbolModel::CircularGaussian;
    double alpha = 3.0;
    int max_node = 6;
    int max_rounds = 3;
    bool noiseless = false;
};

struct ExperimentConfig {
    int n = 8;
    std::vector<double> alpha_list{2.1, 3.0, 4.0};
    double single_hop_snr_db = 20.0;
    double gamma_db = 10.0;
    std::vector<int> m_list{0, 1, 2, 3, 4};
    RoundsPolicy m_policy{};
    std::uint64_t term_budget = 1000000;
    double epsilon = 1e-9;  // chain-length margin: B = 2 - epsilon
    McRunConfig mc;
    std::string output_dir = "out";

    double gamma_linear() const;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& json_text);

// Throws ConfigError listing every violated invariant at once.
void validate(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Figure datasets
// ---------------------------------------------------------------------------

struct SinrRow {
    double alpha = 0.0;
    int node = 0;
    int rounds = 0;
    bool skipped = false;  // term budget exceeded; numeric fields unset
    double actual_db = 0.0;
    double lb_db = 0.0;
};

struct DelayRow {
    int node = 0;
    int rounds = 0;
    std::int64_t slots = 0;
};

struct AdaptiveDelayRow {
    double alpha = 0.0;
    int node = 0;
    int rounds = 0;
    std::int64_t slots = 0;
};

struct BoundsRow {
    double alpha = 0.0;
    int node = 0;
    double rho = 0.0;
    bool feasible = false;
    std::optional<int> min_rounds;
};

struct ChainRow {
    double alpha = 0.0;
    long max_length = 0;
};

struct McRow {
    int node = 0;
    int rounds = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double pred_residual = 0.0;
    double emp_residual = 0.0;
    double rel_error = 0.0;
};

// SINR per (alpha, node, rounds): exact value from the cancellation engine
// next to the closed-form lower bound.  Node-2 rows report the configured
// single-hop SNR (no unknown interference to cancel there).
std::vector<SinrRow> run_sinr_sweep(const ExperimentConfig& cfg);

// End-to-end delay (slots) per (node, rounds) from the closed form.
std::vector<DelayRow> run_delay_table(const ExperimentConfig& cfg);

// Per-node minimal rounds and resulting delays under the adaptive policy;
// throws FeasibilityError naming the first node that cannot decode.
std::vector<AdaptiveDelayRow> run_adaptive_delay_table(const ExperimentConfig& cfg);

std::vector<BoundsRow> run_bounds_report(const ExperimentConfig& cfg);
std::vector<ChainRow> run_chain_lengths(const ExperimentConfig& cfg);

// The five-node walkthrough: uniform m=2 schedule traced for 20 slots.
TransmissionTrace run_example_n5();

std::vector<McRow> run_monte_carlo_grid(const ExperimentConfig& cfg);

std::string to_csv(const std::vector<SinrRow>& rows);
std::string to_csv(const std::vector<DelayRow>& rows);
std::string to_csv(const std::vector<AdaptiveDelayRow>& rows);
std::string to_csv(const std::vector<BoundsRow>& rows);
std::string to_csv(const std::vector<ChainRow>& rows);
std::string to_csv(const std::vector<McRow>& rows);

// ---------------------------------------------------------------------------
// Commands: compute a dataset and write it under cfg.output_dir.
// File names are fixed (documented schema):
//   sinr-sweep    -> sinr_sweep.csv
//   delay-table   -> delay_table.csv (+ delay_adaptive.csv under AdaptiveMin)
//   bounds-report -> bounds_report.csv + max_chain_length.csv
//   example-n5    -> trace_n5.csv
//   monte-carlo   -> monte_carlo.csv
// ---------------------------------------------------------------------------

void cmd_sinr_sweep(const ExperimentConfig& cfg);
void cmd_delay_table(const ExperimentConfig& cfg);
void cmd_bounds_report(const ExperimentConfig& cfg);
void cmd_example_n5(const ExperimentConfig& cfg);
void cmd_monte_carlo(const ExperimentConfig& cfg);

// UTF-8, header row, \n line endings; creates parent directories.
void write_file(const std::string& path, const std::string& content);

} // namespace e2ekic
