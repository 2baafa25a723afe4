#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace e2ekic {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Symbolic terms
//
// Everything a node ever receives is a finite linear combination of
//   x(slot)        data symbols from the shared source stream
//   z(node, slot)  thermal noise samples, independent per node and slot
// A Term names one of those basis elements; slot indices are absolute.
// ---------------------------------------------------------------------------

struct Term {
    enum class Kind : std::uint8_t { Data, Noise };

    Kind kind = Kind::Data;
    std::int32_t node = 0;  // receiving node for noise terms, 0 for data
    std::int64_t slot = 0;

    static Term data(std::int64_t slot) { return {Kind::Data, 0, slot}; }
    static Term noise(std::int32_t node, std::int64_t slot) {
        return {Kind::Noise, node, slot};
    }

    friend auto operator<=>(const Term&, const Term&) = default;
};

// ---------------------------------------------------------------------------
// SignalExpr: sparse complex-linear combination of Terms
//
// Coefficients of structurally identical terms always merge (complex
// addition); a merge that lands exactly on zero drops the term, so the
// representation is canonical and comparisons are plain map equality.
// ---------------------------------------------------------------------------

class SignalExpr {
public:
    using Map = std::map<Term, cplx>;

    SignalExpr() = default;

    void add_term(const Term& t, cplx coef);
    void add_scaled(const SignalExpr& other, cplx scale);
    void scale(cplx factor);

    SignalExpr& operator+=(const SignalExpr& other);
    SignalExpr& operator-=(const SignalExpr& other);

    // Drops terms with |coef| <= eps.  Exact zeros are removed eagerly by
    // add_term, so this is only needed to clear floating-point dust after
    // cancellation with non-unit channel gains.
    void prune(double eps);

    cplx coef(const Term& t) const;
    bool contains(const Term& t) const { return terms_.count(t) != 0; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    const Map& terms() const { return terms_; }

    // Deterministic text form, one term per line, sorted by Term ordering:
    //   x,<slot>,<re>,<im>
    //   z,<node>,<slot>,<re>,<im>
    std::string debug_dump() const;

    friend bool operator==(const SignalExpr&, const SignalExpr&) = default;

private:
    Map terms_;
};

// Power accounting for a candidate decode of `useful` (must be a data term):
//   useful        |coef(useful)|^2 * tx_power
//   interference  sum over all other data terms of |coef|^2 * tx_power
//   noise         sum over noise terms of |coef|^2 * noise_power
struct PowerSplit {
    double useful = 0.0;
    double interference = 0.0;
    double noise = 0.0;
};

PowerSplit power_split(const SignalExpr& e, const Term& useful,
                       double tx_power, double noise_power);

double sinr_linear(const PowerSplit& ps);

double to_db(double linear);
double from_db(double db);

} // namespace e2ekic
