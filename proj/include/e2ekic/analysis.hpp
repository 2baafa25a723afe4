#pragma once

#include <optional>

#include "e2ekic/channel_model.hpp"

namespace e2ekic {

// ---------------------------------------------------------------------------
// Closed-form residual-interference analysis
//
// After m cancellation rounds at node i the leftover unknown interference and
// accumulated noise admit a geometric-series upper bound governed by
//     rho(i) = |h_{i-2,i}|^2 (i-2) / |h_{i-1,i}|^2
// the worst-case power ratio between consecutive rounds.  rho < 1 means each
// round shrinks the residual; the bound then converges and a finite number of
// rounds reaches any achievable SINR target.
//
// The bound adds the per-tuple contributions as if they were independent.
// The exact residual tracked by the engine merges contributions that land on
// the same source slot coherently, so at small path-loss exponents the exact
// value can exceed this bound slightly; see the acceptance suite output.
// ---------------------------------------------------------------------------

double rho(const ChannelModel& model, int i);

// Upper bound on residual interference-plus-noise power after m rounds:
//   |h_{i-2,i}|^2 (i-2) rho^m P_T  +  sigma^2 (1 - rho^{m+1}) / (1 - rho)
// with the rho = 1 limit sigma^2 (m+1) handled exactly.
double interference_bound(const ChannelModel& model, int i, int m);

// 10 log10( |h_{i-1,i}|^2 P_T / interference_bound ).
double sinr_lower_bound_db(const ChannelModel& model, int i, int m);

// True when node i can reach decoding threshold gamma (linear) for some
// finite number of rounds:  i < h^2/b^2 - gamma sigma^2 / (b^2 P_T) + 2,
// where h = h_{i-1,i} and b = h_{i-2,i}.  Implies rho < 1.
bool feasibility_condition(const ChannelModel& model, int i, double gamma);

// Smallest m whose SINR lower bound meets gamma, or nullopt if infeasible.
std::optional<int> min_rounds(const ChannelModel& model, int i, double gamma);

// Largest chain length supported under equal spacing when every node needs
// residual factor rho < 1 with decode margin B: largest integer i with
// i < 2^alpha - B + 2.  The margin-free variant uses B = 2 - epsilon.
long max_chain_length(double alpha, double epsilon = 1e-9);
long max_chain_length_general(double alpha, double B);

struct BoundReport {
    int node = 0;
    int rounds = 0;
    double rho = 0.0;
    double interference_bound = 0.0;
    double sinr_lb_db = 0.0;
    bool feasible = false;
    std::optional<int> min_rounds;
};

BoundReport make_bound_report(const ChannelModel& model, int i, int m,
                              double gamma);

} // namespace e2ekic
