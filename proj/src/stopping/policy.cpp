#include "stopping/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "support/error.hpp"
#include "support/parallel.hpp"

namespace pdmpstop {

StoppingPolicy build_policy(const ValueTable& values, std::shared_ptr<const QuantizationGridSet> grids,
                            const PdmpModel& model, double beta) {
    if (!(beta >= 0.0)) throw ConfigError("build_policy: beta must be nonnegative");
    if (values.N != grids->N) throw NumericError("build_policy: value table and grids disagree on horizon");
    StoppingPolicy p;
    p.N = values.N;
    p.beta = beta;
    p.grids = std::move(grids);
    p.exit_time = model.exit_time;
    p.s_star = values.s_star;
    p.cont_flag = values.cont_flag;
    p.defined = values.defined;
    p.defined.resize(p.N);  // stage-N values are not rule data

    double min_delta = std::numeric_limits<double>::infinity();
    for (double d : values.min_delta)
        if (d > 0.0) min_delta = std::min(min_delta, d);
    p.feasible_for_bounds = beta < min_delta;
    return p;
}

double r_threshold(const StoppingPolicy& policy, int n, double z, double s) {
    if (n < 0 || n >= policy.N) throw NumericError("r_threshold: stage out of range");
    const QuantizationGridSet& gs = *policy.grids;
    int idx = gs.project(n, {z, s});
    int cls = gs.stages[n].z_class[idx];
    if (!policy.defined[n][cls])
        throw AbsentRowError("r_threshold: projection hit unreachable z-class " + std::to_string(cls) +
                             " at stage " + std::to_string(n));
    double ts = policy.exit_time(z);
    if (policy.cont_flag[n][cls]) return ts;
    double sstar = policy.s_star[n][cls];
    return sstar < ts ? sstar : ts - policy.beta;
}

StoppingOutcome run_rule(const PdmpModel& model, const StoppingPolicy& policy, double x0,
                         const RngStream& stream) {
    Rng rng(stream);
    double z = x0, s_prev = 0.0, t_accum = 0.0;
    for (int n = 0; n < policy.N; ++n) {
        double r = r_threshold(policy, n, z, s_prev);
        InterjumpDraw d = sample_interjump(model, z, rng.exponential());
        if (d.s > r) {
            StoppingOutcome out;
            out.tau = t_accum + r;
            out.stage = n;
            out.reason = StoppingOutcome::Reason::kThresholdBeforeJump;
            out.reward = model.reward(model.flow(z, r));
            return out;
        }
        double pre = model.flow(z, d.s);
        z = model.kernel_sample(pre, rng.uniform());
        s_prev = d.s;
        t_accum += d.s;
    }
    StoppingOutcome out;
    out.tau = t_accum;
    out.stage = policy.N;
    out.reason = StoppingOutcome::Reason::kExhaustedHorizon;
    out.reward = model.reward(z);
    return out;
}

EvalReport evaluate_rule(const PdmpModel& model, const StoppingPolicy& policy, double x0,
                         std::int64_t n_mc, const RngStream& stream, bool keep_outcomes) {
    if (n_mc < 1) throw ConfigError("evaluate_rule: n_mc must be positive");
    EvalReport rep;
    rep.n_mc = n_mc;
    if (keep_outcomes) rep.outcomes.resize(n_mc);

    RngStream rule_stream = stream.sub("mc-eval");
    RngStream sup_stream = stream.sub("mc-sup");

    std::vector<double> sum_r(kReductionChunks, 0.0), sum_r2(kReductionChunks, 0.0);
    std::vector<double> sum_s(kReductionChunks, 0.0), sum_s2(kReductionChunks, 0.0);
    parallel_chunks(static_cast<std::size_t>(n_mc), [&](std::size_t chunk, std::size_t b, std::size_t e) {
        double sr = 0.0, sr2 = 0.0, ss = 0.0, ss2 = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            StoppingOutcome out = run_rule(model, policy, x0, rule_stream.with_index(i));
            sr += out.reward;
            sr2 += out.reward * out.reward;
            if (keep_outcomes) rep.outcomes[i] = out;
            Trajectory tr = simulate_chain(model, x0, policy.N, sup_stream.with_index(i));
            double sup = sup_reward_along_path(model, tr);
            ss += sup;
            ss2 += sup * sup;
        }
        sum_r[chunk] = sr;
        sum_r2[chunk] = sr2;
        sum_s[chunk] = ss;
        sum_s2[chunk] = ss2;
    });

    double sr = 0.0, sr2 = 0.0, ss = 0.0, ss2 = 0.0;
    for (std::size_t c = 0; c < kReductionChunks; ++c) {
        sr += sum_r[c];
        sr2 += sum_r2[c];
        ss += sum_s[c];
        ss2 += sum_s2[c];
    }
    double n = static_cast<double>(n_mc);
    rep.v_bar = sr / n;
    rep.e_sup = ss / n;
    double var_r = std::max(0.0, sr2 / n - rep.v_bar * rep.v_bar);
    double var_s = std::max(0.0, ss2 / n - rep.e_sup * rep.e_sup);
    rep.stderr_v = std::sqrt(var_r / n);
    rep.stderr_sup = std::sqrt(var_s / n);
    rep.b1 = rep.e_sup - rep.v_bar;
    return rep;
}

BetaChoice choose_beta(const ModelConstants& constants, const ErrorTable& errors, double a,
                       double min_delta) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("choose_beta: a must be in (0,1)");
    if (errors.empty()) throw NumericError("choose_beta: error table not estimated");
    BetaChoice choice;
    int N = static_cast<int>(errors.e_Theta.size()) - 1;
    double scale = a / std::sqrt(2.0 * constants.C_lambda);
    for (int n = 0; n < N; ++n) {
        double x = constants.lip_tstar / (1.0 - a) * errors.e_Z[n] + errors.e_S[n + 1];
        double beta_n = scale * std::sqrt(x);
        choice.per_stage.push_back(beta_n);
        choice.beta = std::max(choice.beta, beta_n);
    }
    choice.feasible = (choice.beta / a) < min_delta;
    return choice;
}

}  // namespace pdmpstop
