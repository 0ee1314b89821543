#pragma once

#include <string>
#include <vector>

#include "core/model.hpp"
#include "quant/grids.hpp"

namespace pdmpstop {

// Lipschitz-type operator constants derived from the model bundle.
struct DerivedConstants {
    double E1 = 0.0, E2 = 0.0, E3 = 0.0, E4 = 0.0, E5 = 0.0, E6 = 0.0;
};

DerivedConstants derive_constants(const ModelConstants& mc);

enum class FlowCase { kInterior, kBoundary, kMixed };

// (D1, D2) pairs for the survival-weighted flow composition, per case.
struct DPair {
    double d1 = 0.0, d2 = 0.0;
};
DPair d_constants(FlowCase c, double C_h, double h1, double h2, double hstar, const ModelConstants& mc);

// Per-stage Lipschitz constants of the value functions, the recursion's
// upper bounds stored as working values. Index n runs 0..N; stage N is
// seeded with the reward constants.
struct LipschitzLedger {
    std::vector<double> lip1, lip2, lipstar, lip;
    int horizon() const { return static_cast<int>(lip1.size()) - 1; }
};

LipschitzLedger lipschitz_ledger(const ModelConstants& mc, const DerivedConstants& dc, int N);

// Value-approximation bound (B2) and stopping-rule bound (B3) with all
// per-stage data, plus echoes of every input that produced them.
struct BoundReport {
    DerivedConstants dc;
    LipschitzLedger ledger;

    // B2: one increment per stage n = 0..N-1 plus the terminal [g] e_Z(N)
    std::vector<double> b2_increments;
    std::vector<double> b2_eta;        // optimal eta per stage (clamped when infeasible)
    std::vector<char> b2_feasible;
    double b2_terminal = 0.0;
    double b2_total = 0.0;
    std::vector<double> b2_partials;   // bound on ||V_n - V_hat_n||, n = 0..N-1

    // B3: increments ordered n = N-1 (initial term) down to 0
    std::vector<double> b3_increments;     // indexed by stage n = 0..N-1
    std::vector<double> b3_beta_over_a;    // stage-wise beta_n / a
    std::vector<char> b3_feasible;
    double b3_total = 0.0;
    double a = 0.0;

    // echoed inputs
    ModelConstants mc;
    ErrorTable errors;
    std::vector<double> delta_norms;
    std::vector<double> min_deltas;
};

// Telescoped value-approximation bound (B2): fills the b2_* part of the
// report. delta_norms and min_deltas hold per-stage ||Delta(Z_hat_n)||_p and
// min Delta(z) for n = 0..N-1.
BoundReport value_approximation_bound(const LipschitzLedger& ledger, const ModelConstants& mc,
                                      const DerivedConstants& dc, const ErrorTable& errors,
                                      const std::vector<double>& delta_norms,
                                      const std::vector<double>& min_deltas);

// Stopping-rule error bound (B3): fills the b3_* part on top of an existing
// report carrying b2_partials.
void stopping_bound(BoundReport& report, double a);

std::string bound_report_to_json(const BoundReport& report);

}  // namespace pdmpstop
