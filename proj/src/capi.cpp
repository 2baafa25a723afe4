#include "e2ekic/e2ekic.h"

#include <cstring>
#include <exception>
#include <string>

#include "e2ekic/analysis.hpp"
#include "e2ekic/channel_model.hpp"
#include "e2ekic/errors.hpp"
#include "e2ekic/experiment.hpp"
#include "e2ekic/kic_engine.hpp"
#include "e2ekic/monte_carlo.hpp"

struct e2ekic_model {
    e2ekic::ChannelModel impl;
};
struct e2ekic_schedule {
    e2ekic::Schedule impl;
};
struct e2ekic_expr {
    e2ekic::SignalExpr impl;
};
struct e2ekic_config {
    e2ekic::ExperimentConfig impl;
};

namespace {

thread_local std::string g_last_error;
thread_local int g_last_infeasible_node = 0;

void clear_error() {
    g_last_error.clear();
    g_last_infeasible_node = 0;
}

// Runs the body and translates exceptions into status codes.
template <typename F>
e2ekic_status guarded(F&& body) {
    clear_error();
    try {
        body();
        return E2EKIC_OK;
    } catch (const e2ekic::FeasibilityError& e) {
        g_last_error = e.what();
        g_last_infeasible_node = e.node;
        return E2EKIC_ERR_INFEASIBLE;
    } catch (const e2ekic::TermBudgetError& e) {
        g_last_error = e.what();
        return E2EKIC_ERR_TERM_BUDGET;
    } catch (const e2ekic::IoError& e) {
        g_last_error = e.what();
        return E2EKIC_ERR_IO;
    } catch (const e2ekic::ConfigError& e) {
        g_last_error = e.what();
        return E2EKIC_ERR_CONFIG;
    } catch (const e2ekic::InternalError& e) {
        g_last_error = e.what();
        return E2EKIC_ERR_INTERNAL;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return E2EKIC_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return E2EKIC_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return E2EKIC_ERR_INTERNAL;
    }
}

e2ekic_status fail_null(const char* what) {
    clear_error();
    g_last_error = std::string("null pointer argument: ") + what;
    return E2EKIC_ERR_INVALID_ARGUMENT;
}

e2ekic::Term data_term(int64_t slot) { return e2ekic::Term::data(slot); }

} // namespace

extern "C" {

const char* e2ekic_last_error(void) { return g_last_error.c_str(); }

int e2ekic_last_infeasible_node(void) { return g_last_infeasible_node; }

/* ------------------------------------------------------------------ */
/* Channel model                                                      */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_model_create(int n, double alpha, double spacing,
                                  double tx_power, double single_hop_snr_db,
                                  e2ekic_model** out) {
    if (!out) return fail_null("out");
    return guarded([&] {
        *out = new e2ekic_model{e2ekic::ChannelModel::equally_spaced(
            n, alpha, spacing, tx_power, single_hop_snr_db)};
    });
}

e2ekic_status e2ekic_model_create_sigma(int n, double alpha, double spacing,
                                        double tx_power, double noise_power,
                                        e2ekic_model** out) {
    if (!out) return fail_null("out");
    return guarded([&] {
        *out = new e2ekic_model{e2ekic::ChannelModel::equally_spaced_sigma(
            n, alpha, spacing, tx_power, noise_power)};
    });
}

void e2ekic_model_free(e2ekic_model* model) { delete model; }

e2ekic_status e2ekic_model_gain(const e2ekic_model* model, int j, int i,
                                double* re, double* im) {
    if (!model) return fail_null("model");
    if (!re || !im) return fail_null("re/im");
    return guarded([&] {
        const auto g = model->impl.gain(j, i);
        *re = g.real();
        *im = g.imag();
    });
}

e2ekic_status e2ekic_model_noise_power(const e2ekic_model* model, double* out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] { *out = model->impl.noise_power(); });
}

e2ekic_status e2ekic_model_snr_single_hop_db(const e2ekic_model* model, int i,
                                             double* out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] { *out = model->impl.single_hop_snr_db(i); });
}

/* ------------------------------------------------------------------ */
/* Schedules and delays                                               */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_schedule_uniform(const e2ekic_model* model, int m,
                                      e2ekic_schedule** out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] {
        e2ekic::ScenarioConfig sc;
        sc.rounds = {e2ekic::RoundsPolicy::Kind::Uniform, m};
        *out = new e2ekic_schedule{e2ekic::build_schedule(model->impl, sc)};
    });
}

e2ekic_status e2ekic_schedule_adaptive(const e2ekic_model* model,
                                       double gamma_linear,
                                       e2ekic_schedule** out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] {
        e2ekic::ScenarioConfig sc;
        sc.gamma = gamma_linear;
        sc.rounds = {e2ekic::RoundsPolicy::Kind::AdaptiveMin, 0};
        *out = new e2ekic_schedule{e2ekic::build_schedule(model->impl, sc)};
    });
}

void e2ekic_schedule_free(e2ekic_schedule* schedule) { delete schedule; }

e2ekic_status e2ekic_schedule_delay(const e2ekic_schedule* schedule, int i,
                                    int64_t* out) {
    if (!schedule) return fail_null("schedule");
    if (!out) return fail_null("out");
    return guarded([&] { *out = schedule->impl.delay(i); });
}

e2ekic_status e2ekic_schedule_rounds(const e2ekic_schedule* schedule, int i,
                                     int* out) {
    if (!schedule) return fail_null("schedule");
    if (!out) return fail_null("out");
    return guarded([&] { *out = schedule->impl.rounds(i); });
}

e2ekic_status e2ekic_delay_closed_form(int i, int m, int64_t* out) {
    if (!out) return fail_null("out");
    return guarded([&] { *out = e2ekic::delay_closed_form(i, m); });
}

/* ------------------------------------------------------------------ */
/* Received signals and cancellation                                  */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_received_signal(const e2ekic_model* model,
                                     const e2ekic_schedule* schedule, int i,
                                     int64_t t, e2ekic_expr** out) {
    if (!model) return fail_null("model");
    if (!schedule) return fail_null("schedule");
    if (!out) return fail_null("out");
    return guarded([&] {
        *out = new e2ekic_expr{
            e2ekic::received_signal(model->impl, schedule->impl, i, t)};
    });
}

e2ekic_status e2ekic_cancel_recursive(const e2ekic_model* model,
                                      const e2ekic_schedule* schedule, int i,
                                      int m, e2ekic_expr** expr_out,
                                      double* sinr_db, int64_t* slots_waited) {
    if (!model) return fail_null("model");
    if (!schedule) return fail_null("schedule");
    return guarded([&] {
        auto res =
            e2ekic::cancel_rounds_recursive(model->impl, schedule->impl, i, m);
        if (sinr_db) *sinr_db = res.sinr_db;
        if (slots_waited) *slots_waited = res.slots_waited;
        if (expr_out) *expr_out = new e2ekic_expr{std::move(res.expr)};
    });
}

e2ekic_status e2ekic_cancel_expanded(const e2ekic_model* model,
                                     const e2ekic_schedule* schedule, int i,
                                     int m, uint64_t term_budget,
                                     e2ekic_expr** out) {
    if (!model) return fail_null("model");
    if (!schedule) return fail_null("schedule");
    if (!out) return fail_null("out");
    return guarded([&] {
        *out = new e2ekic_expr{e2ekic::cancel_rounds_expanded(
            model->impl, schedule->impl, i, m, {}, term_budget)};
    });
}

void e2ekic_expr_free(e2ekic_expr* expr) { delete expr; }

e2ekic_status e2ekic_expr_term_count(const e2ekic_expr* expr, size_t* out) {
    if (!expr) return fail_null("expr");
    if (!out) return fail_null("out");
    return guarded([&] { *out = expr->impl.size(); });
}

e2ekic_status e2ekic_expr_data_coef(const e2ekic_expr* expr, int64_t slot,
                                    double* re, double* im) {
    if (!expr) return fail_null("expr");
    if (!re || !im) return fail_null("re/im");
    return guarded([&] {
        const auto c = expr->impl.coef(data_term(slot));
        *re = c.real();
        *im = c.imag();
    });
}

e2ekic_status e2ekic_expr_noise_coef(const e2ekic_expr* expr, int node,
                                     int64_t slot, double* re, double* im) {
    if (!expr) return fail_null("expr");
    if (!re || !im) return fail_null("re/im");
    return guarded([&] {
        const auto c = expr->impl.coef(e2ekic::Term::noise(node, slot));
        *re = c.real();
        *im = c.imag();
    });
}

e2ekic_status e2ekic_expr_dump(const e2ekic_expr* expr, char* buf, size_t cap,
                               size_t* needed) {
    if (!expr) return fail_null("expr");
    if (!buf && cap > 0) return fail_null("buf");
    return guarded([&] {
        const std::string s = expr->impl.debug_dump();
        if (needed) *needed = s.size();
        if (cap > 0) {
            const size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
            std::memcpy(buf, s.data(), n);
            buf[n] = '\0';
        }
    });
}

e2ekic_status e2ekic_power_split(const e2ekic_expr* expr, int64_t useful_slot,
                                 double tx_power, double noise_power,
                                 double* useful, double* interference,
                                 double* noise) {
    if (!expr) return fail_null("expr");
    if (!useful || !interference || !noise)
        return fail_null("useful/interference/noise");
    return guarded([&] {
        const auto ps = e2ekic::power_split(expr->impl, data_term(useful_slot),
                                            tx_power, noise_power);
        *useful = ps.useful;
        *interference = ps.interference;
        *noise = ps.noise;
    });
}

e2ekic_status e2ekic_decode(double sinr_db, double gamma_linear, int* out) {
    if (!out) return fail_null("out");
    return guarded([&] { *out = e2ekic::decode(sinr_db, gamma_linear) ? 1 : 0; });
}

/* ------------------------------------------------------------------ */
/* Closed-form analysis                                               */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_rho(const e2ekic_model* model, int i, double* out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] { *out = e2ekic::rho(model->impl, i); });
}

e2ekic_status e2ekic_interference_bound(const e2ekic_model* model, int i, int m,
                                        double* out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] { *out = e2ekic::interference_bound(model->impl, i, m); });
}

e2ekic_status e2ekic_sinr_lower_bound_db(const e2ekic_model* model, int i,
                                         int m, double* out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] { *out = e2ekic::sinr_lower_bound_db(model->impl, i, m); });
}

e2ekic_status e2ekic_feasible(const e2ekic_model* model, int i,
                              double gamma_linear, int* out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] {
        *out = e2ekic::feasibility_condition(model->impl, i, gamma_linear) ? 1 : 0;
    });
}

e2ekic_status e2ekic_min_rounds(const e2ekic_model* model, int i,
                                double gamma_linear, int* out) {
    if (!model) return fail_null("model");
    if (!out) return fail_null("out");
    return guarded([&] {
        const auto m = e2ekic::min_rounds(model->impl, i, gamma_linear);
        *out = m ? *m : -1;
    });
}

e2ekic_status e2ekic_max_chain_length(double alpha, double epsilon, long* out) {
    if (!out) return fail_null("out");
    return guarded([&] { *out = e2ekic::max_chain_length(alpha, epsilon); });
}

/* ------------------------------------------------------------------ */
/* Monte Carlo validation                                             */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_monte_carlo(const e2ekic_model* model,
                                 const e2ekic_schedule* schedule, int i, int m,
                                 uint64_t trials, uint64_t seed,
                                 e2ekic_symbol_model symbol_model,
                                 double* pred_residual, double* emp_residual,
                                 double* rel_error) {
    if (!model) return fail_null("model");
    if (!schedule) return fail_null("schedule");
    return guarded([&] {
        e2ekic::McConfig mc;
        mc.trials = trials;
        mc.seed = seed;
        switch (symbol_model) {
            case E2EKIC_SYMBOL_CIRCULAR_GAUSSIAN:
                mc.symbol_model = e2ekic::SymbolModel::CircularGaussian;
                break;
            case E2EKIC_SYMBOL_QPSK:
                mc.symbol_model = e2ekic::SymbolModel::Qpsk;
                break;
            default:
                throw std::invalid_argument("unknown symbol model");
        }
        const auto rep =
            e2ekic::run_monte_carlo(model->impl, schedule->impl, i, m, mc);
        if (pred_residual) *pred_residual = rep.predicted_residual;
        if (emp_residual) *emp_residual = rep.empirical_residual;
        if (rel_error) *rel_error = rep.rel_error;
    });
}

/* ------------------------------------------------------------------ */
/* Experiment configuration and figure datasets                       */
/* ------------------------------------------------------------------ */

e2ekic_status e2ekic_config_default(e2ekic_config** out) {
    if (!out) return fail_null("out");
    return guarded([&] { *out = new e2ekic_config{}; });
}

e2ekic_status e2ekic_config_load(const char* path, e2ekic_config** out) {
    if (!path) return fail_null("path");
    if (!out) return fail_null("out");
    return guarded([&] {
        *out = new e2ekic_config{e2ekic::parse_config(path)};
    });
}

void e2ekic_config_free(e2ekic_config* config) { delete config; }

e2ekic_status e2ekic_config_set_output_dir(e2ekic_config* config,
                                           const char* dir) {
    if (!config) return fail_null("config");
    if (!dir) return fail_null("dir");
    return guarded([&] {
        config->impl.output_dir = dir;
        e2ekic::validate(config->impl);
    });
}

e2ekic_status e2ekic_config_set_seed(e2ekic_config* config, uint64_t seed) {
    if (!config) return fail_null("config");
    return guarded([&] { config->impl.mc.seed = seed; });
}

e2ekic_status e2ekic_config_output_dir(const e2ekic_config* config, char* buf,
                                       size_t cap, size_t* needed) {
    if (!config) return fail_null("config");
    if (!buf && cap > 0) return fail_null("buf");
    return guarded([&] {
        const std::string& s = config->impl.output_dir;
        if (needed) *needed = s.size();
        if (cap > 0) {
            const size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
            std::memcpy(buf, s.data(), n);
            buf[n] = '\0';
        }
    });
}

e2ekic_status e2ekic_run_sinr_sweep(const e2ekic_config* config) {
    if (!config) return fail_null("config");
    return guarded([&] { e2ekic::cmd_sinr_sweep(config->impl); });
}

e2ekic_status e2ekic_run_delay_table(const e2ekic_config* config) {
    if (!config) return fail_null("config");
    return guarded([&] { e2ekic::cmd_delay_table(config->impl); });
}

e2ekic_status e2ekic_run_bounds_report(const e2ekic_config* config) {
    if (!config) return fail_null("config");
    return guarded([&] { e2ekic::cmd_bounds_report(config->impl); });
}

e2ekic_status e2ekic_run_example_n5(const e2ekic_config* config) {
    if (!config) return fail_null("config");
    return guarded([&] { e2ekic::cmd_example_n5(config->impl); });
}

e2ekic_status e2ekic_run_monte_carlo(const e2ekic_config* config) {
    if (!config) return fail_null("config");
    return guarded([&] { e2ekic::cmd_monte_carlo(config->impl); });
}

} /* extern "C" */
