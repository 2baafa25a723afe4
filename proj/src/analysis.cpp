#include "e2ekic/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "e2ekic/errors.hpp"

namespace e2ekic {

namespace {

void check_node(const ChannelModel& model, int i) {
    if (i < 3 || i > model.size())
        throw std::invalid_argument("analysis applies to nodes 3..N");
}

} // namespace

double rho(const ChannelModel& model, int i) {
    check_node(model, i);
    return model.gain_sq(i - 2, i) * (i - 2) / model.gain_sq(i - 1, i);
}

double interference_bound(const ChannelModel& model, int i, int m) {
    check_node(model, i);
    if (m < 0) throw std::invalid_argument("rounds must be >= 0");

    const double r = rho(model, i);
    const double b2 = model.gain_sq(i - 2, i);
    const double data_part =
        b2 * (i - 2) * std::pow(r, m) * model.tx_power();
    const double noise_part =
        r == 1.0 ? model.noise_power() * (m + 1)
                 : model.noise_power() * (1.0 - std::pow(r, m + 1)) / (1.0 - r);
    return data_part + noise_part;
}

double sinr_lower_bound_db(const ChannelModel& model, int i, int m) {
    return to_db(model.gain_sq(i - 1, i) * model.tx_power() /
                 interference_bound(model, i, m));
}

bool feasibility_condition(const ChannelModel& model, int i, double gamma) {
    check_node(model, i);
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    const double h2 = model.gain_sq(i - 1, i);
    const double b2 = model.gain_sq(i - 2, i);
    return i < h2 / b2 - gamma * model.noise_power() / (b2 * model.tx_power()) + 2.0;
}

std::optional<int> min_rounds(const ChannelModel& model, int i, double gamma) {
    if (!feasibility_condition(model, i, gamma)) return std::nullopt;

    const double h2 = model.gain_sq(i - 1, i);
    const double b2 = model.gain_sq(i - 2, i);
    const double r = rho(model, i);  // < 1 whenever the condition holds
    const double tx = model.tx_power();

    // Invert the bound: rounds m meet gamma iff
    //   rho^(m+1) <= (tx/gamma - sigma^2/D) / (tx - sigma^2/D),
    // D = h^2 - b^2 (i-2).  Feasibility makes the numerator positive.
    const double d = h2 - b2 * (i - 2);
    const double num = tx / gamma - model.noise_power() / d;
    const double den = tx - model.noise_power() / d;
    const double rhs = std::log(num / den) / std::log(r) - 1.0;

    // Small slack so values that are analytically integral do not round up.
    const int m = static_cast<int>(std::ceil(rhs - 1e-12));
    return std::max(0, m);
}

long max_chain_length(double alpha, double epsilon) {
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("epsilon must be non-negative");
    return max_chain_length_general(alpha, 2.0 - epsilon);
}

long max_chain_length_general(double alpha, double B) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (B <= 1.0)
        std::fprintf(stderr,
                     "warning: chain length margin B = %g <= 1 leaves no room "
                     "for the decode threshold; result is formal only\n", B);
    const double bound = std::pow(2.0, alpha) - B + 2.0;
    const double fl = std::floor(bound);
    // Strict inequality: an exactly integral bound excludes itself.
    return static_cast<long>(bound == fl ? fl - 1.0 : fl);
}

BoundReport make_bound_report(const ChannelModel& model, int i, int m,
                              double gamma) {
    BoundReport rep;
    rep.node = i;
    rep.rounds = m;
    rep.rho = rho(model, i);
    rep.interference_bound = interference_bound(model, i, m);
    rep.sinr_lb_db = sinr_lower_bound_db(model, i, m);
    rep.feasible = feasibility_condition(model, i, gamma);
    rep.min_rounds = min_rounds(model, i, gamma);
    return rep;
}

} // namespace e2ekic
