#include "e2ekic/signal_expr.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace e2ekic {

void SignalExpr::add_term(const Term& t, cplx coef) {
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        if (coef != cplx{0.0, 0.0}) terms_.emplace(t, coef);
        return;
    }
    it->second += coef;
    if (it->second == cplx{0.0, 0.0}) terms_.erase(it);
}

void SignalExpr::add_scaled(const SignalExpr& other, cplx scale) {
    for (const auto& [t, c] : other.terms_) add_term(t, c * scale);
}

void SignalExpr::scale(cplx factor) {
    if (factor == cplx{0.0, 0.0}) {
        terms_.clear();
        return;
    }
    for (auto& [t, c] : terms_) c *= factor;
}

SignalExpr& SignalExpr::operator+=(const SignalExpr& other) {
    add_scaled(other, {1.0, 0.0});
    return *this;
}

SignalExpr& SignalExpr::operator-=(const SignalExpr& other) {
    add_scaled(other, {-1.0, 0.0});
    return *this;
}

void SignalExpr::prune(double eps) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= eps)
            it = terms_.erase(it);
        else
            ++it;
    }
}

cplx SignalExpr::coef(const Term& t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
}

std::string SignalExpr::debug_dump() const {
    std::string out;
    char buf[160];
    for (const auto& [t, c] : terms_) {
        // Adding +0.0 folds negative zeros so equal expressions built along
        // different arithmetic paths dump identically.
        const double re = c.real() + 0.0;
        const double im = c.imag() + 0.0;
        if (t.kind == Term::Kind::Data) {
            std::snprintf(buf, sizeof buf, "x,%lld,%.17g,%.17g\n",
                          static_cast<long long>(t.slot), re, im);
        } else {
            std::snprintf(buf, sizeof buf, "z,%d,%lld,%.17g,%.17g\n", t.node,
                          static_cast<long long>(t.slot), re, im);
        }
        out += buf;
    }
    return out;
}

PowerSplit power_split(const SignalExpr& e, const Term& useful,
                       double tx_power, double noise_power) {
    if (useful.kind != Term::Kind::Data)
        throw std::invalid_argument("power_split: useful term must be a data symbol");

    PowerSplit ps;
    for (const auto& [t, c] : e.terms()) {
        const double p = std::norm(c);
        if (t.kind == Term::Kind::Data) {
            if (t == useful)
                ps.useful = p * tx_power;
            else
                ps.interference += p * tx_power;
        } else {
            ps.noise += p * noise_power;
        }
    }
    return ps;
}

double sinr_linear(const PowerSplit& ps) {
    const double denom = ps.interference + ps.noise;
    if (denom == 0.0)
        return ps.useful == 0.0 ? 0.0
                                : std::numeric_limits<double>::infinity();
    return ps.useful / denom;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace e2ekic
