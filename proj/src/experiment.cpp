#include "e2ekic/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "e2ekic/errors.hpp"

namespace e2ekic {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const char* where, std::vector<std::string>& errs) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            errs.push_back(std::string("unknown key '") + key + "' in " + where);
    }
}

// Signed read so a negative value fails validation instead of wrapping.
void get_count(const json& j, const char* key, std::uint64_t& dst,
               std::vector<std::string>& errs) {
    if (!j.contains(key)) return;
    try {
        const auto v = j.at(key).get<std::int64_t>();
        if (v < 0) {
            errs.push_back(std::string("field '") + key + "' must be >= 0");
            return;
        }
        dst = static_cast<std::uint64_t>(v);
    } catch (const json::exception& e) {
        errs.push_back(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
void get_field(const json& j, const char* key, T& dst,
               std::vector<std::string>& errs) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        errs.push_back(std::string("field '") + key + "': " + e.what());
    }
}

bool term_budget_exceeded(int i, int m, std::uint64_t budget) {
    return i > 3 && std::pow(static_cast<double>(i - 2), m + 1) >
                        static_cast<double>(budget);
}

} // namespace

double ExperimentConfig::gamma_linear() const { return from_db(gamma_db); }

ExperimentConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    ExperimentConfig cfg;
    std::vector<std::string> errs;

    reject_unknown_keys(j,
                        {"n", "alpha_list", "single_hop_snr_db", "gamma_db",
                         "m_list", "m_policy", "term_budget", "epsilon",
                         "monte_carlo", "output_dir"},
                        "config", errs);

    get_field(j, "n", cfg.n, errs);
    get_field(j, "alpha_list", cfg.alpha_list, errs);
    get_field(j, "single_hop_snr_db", cfg.single_hop_snr_db, errs);
    get_field(j, "gamma_db", cfg.gamma_db, errs);
    get_field(j, "m_list", cfg.m_list, errs);
    get_count(j, "term_budget", cfg.term_budget, errs);
    get_field(j, "epsilon", cfg.epsilon, errs);
    get_field(j, "output_dir", cfg.output_dir, errs);

    if (j.contains("m_policy")) {
        const json& p = j.at("m_policy");
        if (!p.is_object()) {
            errs.push_back("m_policy must be an object with a 'type' field");
        } else {
            reject_unknown_keys(p, {"type", "m"}, "m_policy", errs);
            std::string type = "uniform";
            get_field(p, "type", type, errs);
            if (type == "uniform") {
                cfg.m_policy.kind = RoundsPolicy::Kind::Uniform;
                get_field(p, "m", cfg.m_policy.m, errs);
            } else if (type == "adaptive_min") {
                cfg.m_policy.kind = RoundsPolicy::Kind::AdaptiveMin;
            } else {
                errs.push_back("m_policy.type must be 'uniform' or 'adaptive_min'");
            }
        }
    }

    if (j.contains("monte_carlo")) {
        const json& mc = j.at("monte_carlo");
        if (!mc.is_object()) {
            errs.push_back("monte_carlo must be an object");
        } else {
            reject_unknown_keys(mc,
                                {"trials", "seed", "symbol_model", "alpha",
                                 "max_node", "max_rounds", "noiseless"},
                                "monte_carlo", errs);
            get_count(mc, "trials", cfg.mc.trials, errs);
            if (mc.contains("seed")) {
                try {
                    cfg.mc.seed = mc.at("seed").is_number_unsigned()
                                      ? mc.at("seed").get<std::uint64_t>()
                                      : static_cast<std::uint64_t>(
                                            mc.at("seed").get<std::int64_t>());
                } catch (const json::exception& e) {
                    errs.push_back(std::string("field 'seed': ") + e.what());
                }
            }
            if (mc.contains("symbol_model")) {
                std::string sm;
                get_field(mc, "symbol_model", sm, errs);
                if (sm == "circular_gaussian")
                    cfg.mc.symbol_model = SymbolModel::CircularGaussian;
                else if (sm == "qpsk")
                    cfg.mc.symbol_model = SymbolModel::Qpsk;
                else if (!sm.empty())
                    errs.push_back(
                        "symbol_model must be 'circular_gaussian' or 'qpsk'");
            }
            get_field(mc, "alpha", cfg.mc.alpha, errs);
            get_field(mc, "max_node", cfg.mc.max_node, errs);
            get_field(mc, "max_rounds", cfg.mc.max_rounds, errs);
            get_field(mc, "noiseless", cfg.mc.noiseless, errs);
        }
    }

    if (!errs.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }

    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate(const ExperimentConfig& cfg) {
    std::vector<std::string> errs;

    if (cfg.n < 2) errs.push_back("n must be >= 2");
    if (cfg.alpha_list.empty()) errs.push_back("alpha_list must be non-empty");
    for (double a : cfg.alpha_list)
        if (!(a > 0.0) || !std::isfinite(a)) {
            errs.push_back("alpha_list entries must be positive finite");
            break;
        }
    if (!std::isfinite(cfg.single_hop_snr_db))
        errs.push_back("single_hop_snr_db must be finite");
    if (!(cfg.gamma_db >= 0.0) || !std::isfinite(cfg.gamma_db))
        errs.push_back("gamma_db must be >= 0 (decode threshold gamma >= 1)");
    if (cfg.m_list.empty()) errs.push_back("m_list must be non-empty");
    for (int m : cfg.m_list)
        if (m < 0) {
            errs.push_back("m_list entries must be >= 0");
            break;
        }
    if (cfg.m_policy.kind == RoundsPolicy::Kind::Uniform && cfg.m_policy.m < 0)
        errs.push_back("uniform m_policy needs m >= 0");
    if (cfg.term_budget < 1) errs.push_back("term_budget must be >= 1");
    if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
        errs.push_back("epsilon must be positive finite");
    if (cfg.mc.trials < 1) errs.push_back("monte_carlo.trials must be >= 1");
    if (!(cfg.mc.alpha > 0.0) || !std::isfinite(cfg.mc.alpha))
        errs.push_back("monte_carlo.alpha must be positive finite");
    if (cfg.mc.max_node < 3) errs.push_back("monte_carlo.max_node must be >= 3");
    if (cfg.mc.max_rounds < 0)
        errs.push_back("monte_carlo.max_rounds must be >= 0");
    if (cfg.output_dir.empty()) errs.push_back("output_dir must be non-empty");

    if (!errs.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

std::vector<SinrRow> run_sinr_sweep(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<SinrRow> rows;

    for (double alpha : cfg.alpha_list) {
        const auto model = ChannelModel::equally_spaced(
            cfg.n, alpha, 1.0, 1.0, cfg.single_hop_snr_db);

        std::map<int, Schedule> schedules;
        for (int m : cfg.m_list)
            if (!schedules.count(m))
                schedules.emplace(
                    m, build_schedule(model,
                                      ScenarioConfig{cfg.gamma_linear(),
                                                     cfg.single_hop_snr_db,
                                                     {RoundsPolicy::Kind::Uniform, m}}));

        for (int i = 2; i <= cfg.n; ++i) {
            for (int m : cfg.m_list) {
                SinrRow row;
                row.alpha = alpha;
                row.node = i;
                row.rounds = m;
                if (i == 2) {
                    // No unknown interference into node 2: SINR is the
                    // configured single-hop SNR and the bound is met with
                    // equality.
                    row.actual_db = cfg.single_hop_snr_db;
                    row.lb_db = cfg.single_hop_snr_db;
                } else if (term_budget_exceeded(i, m, cfg.term_budget)) {
                    row.skipped = true;
                } else {
                    row.actual_db =
                        cancel_rounds_recursive(model, schedules.at(m), i, m)
                            .sinr_db;
                    row.lb_db = sinr_lower_bound_db(model, i, m);
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<DelayRow> run_delay_table(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<DelayRow> rows;
    for (int i = 1; i <= cfg.n; ++i)
        for (int m : cfg.m_list)
            rows.push_back({i, m, delay_closed_form(i, m)});
    return rows;
}

std::vector<AdaptiveDelayRow> run_adaptive_delay_table(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<AdaptiveDelayRow> rows;
    for (double alpha : cfg.alpha_list) {
        const auto model = ChannelModel::equally_spaced(
            cfg.n, alpha, 1.0, 1.0, cfg.single_hop_snr_db);
        const Schedule sched = build_schedule(
            model, ScenarioConfig{cfg.gamma_linear(), cfg.single_hop_snr_db,
                                  {RoundsPolicy::Kind::AdaptiveMin, 0}});
        for (int i = 1; i <= cfg.n; ++i)
            rows.push_back({alpha, i, sched.rounds(i), sched.delay(i)});
    }
    return rows;
}

std::vector<BoundsRow> run_bounds_report(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<BoundsRow> rows;
    for (double alpha : cfg.alpha_list) {
        const auto model = ChannelModel::equally_spaced(
            cfg.n, alpha, 1.0, 1.0, cfg.single_hop_snr_db);
        for (int i = 3; i <= cfg.n; ++i) {
            BoundsRow row;
            row.alpha = alpha;
            row.node = i;
            row.rho = rho(model, i);
            row.feasible = feasibility_condition(model, i, cfg.gamma_linear());
            row.min_rounds = min_rounds(model, i, cfg.gamma_linear());
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<ChainRow> run_chain_lengths(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<ChainRow> rows;
    for (double alpha : cfg.alpha_list)
        rows.push_back({alpha, max_chain_length(alpha, cfg.epsilon)});
    return rows;
}

TransmissionTrace run_example_n5() {
    const Schedule sched(std::vector<int>(5, 2));
    return trace_schedule(sched, 20);
}

std::vector<McRow> run_monte_carlo_grid(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto model =
        cfg.mc.noiseless
            ? ChannelModel::equally_spaced_sigma(cfg.n, cfg.mc.alpha, 1.0, 1.0, 0.0)
            : ChannelModel::equally_spaced(cfg.n, cfg.mc.alpha, 1.0, 1.0,
                                           cfg.single_hop_snr_db);

    McConfig mc;
    mc.trials = cfg.mc.trials;
    mc.seed = cfg.mc.seed;
    mc.symbol_model = cfg.mc.symbol_model;

    std::vector<McRow> rows;
    const int top = std::min(cfg.n, cfg.mc.max_node);
    for (int i = 3; i <= top; ++i) {
        for (int m = 0; m <= cfg.mc.max_rounds; ++m) {
            const Schedule sched(
                std::vector<int>(static_cast<std::size_t>(cfg.n), m));
            const McReport rep = run_monte_carlo(model, sched, i, m, mc);
            rows.push_back({i, m, rep.trials, mc.seed, rep.predicted_residual,
                            rep.empirical_residual, rep.rel_error});
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV serialization
// ---------------------------------------------------------------------------

std::string to_csv(const std::vector<SinrRow>& rows) {
    std::string out = "alpha,i,m,sinr_actual_db,sinr_lb_db\n";
    for (const auto& r : rows) {
        out += num(r.alpha) + "," + std::to_string(r.node) + "," +
               std::to_string(r.rounds) + ",";
        if (r.skipped)
            out += "skipped,skipped\n";
        else
            out += num(r.actual_db) + "," + num(r.lb_db) + "\n";
    }
    return out;
}

std::string to_csv(const std::vector<DelayRow>& rows) {
    std::string out = "i,m,delay_slots\n";
    for (const auto& r : rows)
        out += std::to_string(r.node) + "," + std::to_string(r.rounds) + "," +
               std::to_string(r.slots) + "\n";
    return out;
}

std::string to_csv(const std::vector<AdaptiveDelayRow>& rows) {
    std::string out = "alpha,i,m_i,delay_slots\n";
    for (const auto& r : rows)
        out += num(r.alpha) + "," + std::to_string(r.node) + "," +
               std::to_string(r.rounds) + "," + std::to_string(r.slots) + "\n";
    return out;
}

std::string to_csv(const std::vector<BoundsRow>& rows) {
    std::string out = "alpha,i,rho,feasible,min_rounds\n";
    for (const auto& r : rows) {
        out += num(r.alpha) + "," + std::to_string(r.node) + "," + num(r.rho) +
               "," + (r.feasible ? "1" : "0") + ",";
        out += r.min_rounds ? std::to_string(*r.min_rounds) : std::string("-");
        out += "\n";
    }
    return out;
}

std::string to_csv(const std::vector<ChainRow>& rows) {
    std::string out = "alpha,max_chain_length\n";
    for (const auto& r : rows)
        out += num(r.alpha) + "," + std::to_string(r.max_length) + "\n";
    return out;
}

std::string to_csv(const std::vector<McRow>& rows) {
    std::string out = "i,m,trials,seed,pred_residual,emp_residual,rel_err\n";
    for (const auto& r : rows)
        out += std::to_string(r.node) + "," + std::to_string(r.rounds) + "," +
               std::to_string(r.trials) + "," + std::to_string(r.seed) + "," +
               num(r.pred_residual) + "," + num(r.emp_residual) + "," +
               num(r.rel_error) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path(), ec);
    if (ec)
        throw IoError("cannot create output directory: " +
                      p.parent_path().string());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

void cmd_sinr_sweep(const ExperimentConfig& cfg) {
    write_file(cfg.output_dir + "/sinr_sweep.csv", to_csv(run_sinr_sweep(cfg)));
}

void cmd_delay_table(const ExperimentConfig& cfg) {
    write_file(cfg.output_dir + "/delay_table.csv", to_csv(run_delay_table(cfg)));
    if (cfg.m_policy.kind == RoundsPolicy::Kind::AdaptiveMin)
        write_file(cfg.output_dir + "/delay_adaptive.csv",
                   to_csv(run_adaptive_delay_table(cfg)));
}

void cmd_bounds_report(const ExperimentConfig& cfg) {
    write_file(cfg.output_dir + "/bounds_report.csv",
               to_csv(run_bounds_report(cfg)));
    write_file(cfg.output_dir + "/max_chain_length.csv",
               to_csv(run_chain_lengths(cfg)));
}

void cmd_example_n5(const ExperimentConfig& cfg) {
    write_file(cfg.output_dir + "/trace_n5.csv", run_example_n5().to_csv());
}

void cmd_monte_carlo(const ExperimentConfig& cfg) {
    write_file(cfg.output_dir + "/monte_carlo.csv",
               to_csv(run_monte_carlo_grid(cfg)));
}

} // namespace e2ekic
