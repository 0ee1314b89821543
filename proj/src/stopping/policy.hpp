#pragma once

#include <memory>
#include <vector>

#include "core/model.hpp"
#include "dp/solver.hpp"
#include "quant/grids.hpp"
#include "support/rng.hpp"

namespace pdmpstop {

// Materialized stopping rule: per stage n and stage-n z-class, the strict
// continuation flag and smallest argmax node copied from the value table's
// stage-(n+1) comparison, plus the time offset beta that keeps the stop epoch
// strictly before a forced boundary jump.
struct StoppingPolicy {
    int N = 0;
    double beta = 0.0;
    bool feasible_for_bounds = true;  // beta < every reachable Delta(z)

    std::shared_ptr<const QuantizationGridSet> grids;
    std::function<double(double)> exit_time;

    std::vector<std::vector<double>> s_star;   // [n][class], n = 0..N-1
    std::vector<std::vector<char>> cont_flag;  // [n][class]
    std::vector<std::vector<char>> defined;    // [n][class]
};

struct StoppingOutcome {
    double tau = 0.0;
    int stage = 0;  // stage index at which the rule stopped
    enum class Reason { kThresholdBeforeJump, kExhaustedHorizon } reason = Reason::kExhaustedHorizon;
    double reward = 0.0;
};

struct EvalReport {
    std::int64_t n_mc = 0;
    double v_bar = 0.0;        // mean reward of the rule
    double stderr_v = 0.0;
    double e_sup = 0.0;        // independent estimate of E[sup g(X(t))]
    double stderr_sup = 0.0;
    double b1 = 0.0;           // e_sup - v_bar
    std::vector<StoppingOutcome> outcomes;  // filled only when keep_outcomes
};

struct BetaChoice {
    double beta = 0.0;
    bool feasible = false;
    std::vector<double> per_stage;  // beta_n, n = 0..N-1
};

// Copies flags and argmax nodes out of the solved table and validates the
// beta feasibility invariant against all reachable Delta(z).
StoppingPolicy build_policy(const ValueTable& values, std::shared_ptr<const QuantizationGridSet> grids,
                            const PdmpModel& model, double beta);

// The threshold r_{n+1,beta}(z, s) of the rule at forward stage n: t*(z) on
// the continuation branch, else the stored argmax guarded by t*(z) - beta.
double r_threshold(const StoppingPolicy& policy, int n, double z, double s);

// Forward simulation of the rule from x0 under the stream.
StoppingOutcome run_rule(const PdmpModel& model, const StoppingPolicy& policy, double x0,
                         const RngStream& stream);

// Monte-Carlo evaluation: mean rule reward with standard error and the
// empirical optimality gap B1 against an independent sup estimate.
EvalReport evaluate_rule(const PdmpModel& model, const StoppingPolicy& policy, double x0,
                         std::int64_t n_mc, const RngStream& stream, bool keep_outcomes = false);

// Feasibility-driven rule offset: per stage n, beta_n = a (2 C_lambda)^{-1/2}
// ([t*]/(1-a) e_Z(n) + e_S(n+1))^{1/2}; returns max_n beta_n and the
// feasibility of beta/a < min_delta.
BetaChoice choose_beta(const ModelConstants& constants, const ErrorTable& errors, double a,
                       double min_delta);

}  // namespace pdmpstop
