#include "bounds/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "support/error.hpp"
#include "support/json_writer.hpp"

namespace pdmpstop {

DerivedConstants derive_constants(const ModelConstants& mc) {
    DerivedConstants d;
    const double cl = mc.C_lambda, l1 = mc.lip_lambda, ct = mc.C_tstar, lt = mc.lip_tstar;
    d.E1 = cl * lt + ct * l1 * (1.0 + ct * cl);
    d.E2 = ct * cl * mc.lip_Q;
    d.E3 = mc.lip_g_1 + mc.lip_g_2 * lt + mc.C_g * (ct * l1 + cl * lt);
    d.E4 = 2.0 * cl * lt + ct * l1 * (2.0 + ct * cl);
    d.E5 = d.E1 + cl * lt;
    d.E6 = d.E3 + (mc.lip_g_2 + mc.C_g * cl) * lt;
    return d;
}

DPair d_constants(FlowCase c, double C_h, double h1, double h2, double hstar, const ModelConstants& mc) {
    DPair p;
    switch (c) {
        case FlowCase::kInterior:
            p.d1 = h1 + C_h * mc.C_tstar * mc.lip_lambda;
            p.d2 = h2 + C_h * mc.C_lambda;
            break;
        case FlowCase::kBoundary:
            p.d1 = hstar + C_h * mc.C_tstar * mc.lip_lambda + C_h * mc.C_lambda * mc.lip_tstar;
            p.d2 = 0.0;
            break;
        case FlowCase::kMixed:
            p.d1 = h1 + C_h * mc.C_tstar * mc.lip_lambda + h2 * mc.lip_tstar + C_h * mc.C_lambda * mc.lip_tstar;
            p.d2 = h2 + C_h * mc.C_lambda;
            break;
    }
    return p;
}

LipschitzLedger lipschitz_ledger(const ModelConstants& mc, const DerivedConstants& dc, int N) {
    if (N < 1) throw NumericError("lipschitz_ledger: N must be >= 1");
    LipschitzLedger led;
    led.lip1.assign(N + 1, 0.0);
    led.lip2.assign(N + 1, 0.0);
    led.lipstar.assign(N + 1, 0.0);
    led.lip.assign(N + 1, 0.0);

    led.lip1[N] = mc.lip_g_1;
    led.lip2[N] = mc.lip_g_2;
    led.lipstar[N] = mc.lip_g_star;
    led.lip[N] = mc.g_lip();

    const double ecc = std::exp(mc.C_lambda * mc.C_tstar);
    const double g_line = mc.lip_g_1 + mc.lip_g_2 * mc.lip_tstar;
    for (int n = N - 1; n >= 0; --n) {
        led.lip1[n] = ecc * (2.0 * led.lip1[n + 1] * dc.E2 + mc.C_g * dc.E1 + mc.C_g * dc.E4 +
                             mc.C_g * mc.C_tstar * mc.lip_lambda * (1.0 + mc.C_lambda * mc.C_tstar)) +
                      ecc * std::max(g_line, led.lipstar[n + 1] * mc.lip_Q);
        led.lip2[n] = ecc * (mc.C_g * mc.C_lambda * (4.0 + mc.C_lambda * mc.C_tstar) + mc.lip_g_2);
        led.lipstar[n] = led.lip1[n] + led.lip2[n] * mc.lip_tstar;
        led.lip[n] = led.lip1[n + 1] * dc.E2 + mc.C_g * dc.E5 +
                     std::max(dc.E6, led.lipstar[n + 1] * mc.lip_Q + mc.C_g * mc.C_tstar * mc.lip_lambda);
    }
    return led;
}

BoundReport value_approximation_bound(const LipschitzLedger& ledger, const ModelConstants& mc,
                           const DerivedConstants& dc, const ErrorTable& errors,
                           const std::vector<double>& delta_norms, const std::vector<double>& min_deltas) {
    const int N = ledger.horizon();
    if (errors.empty() || static_cast<int>(errors.e_Theta.size()) != N + 1)
        throw NumericError("value_approximation_bound: error table does not match the ledger horizon");
    if (static_cast<int>(delta_norms.size()) != N || static_cast<int>(min_deltas.size()) != N)
        throw NumericError("value_approximation_bound: need per-stage delta data for stages 0..N-1");

    BoundReport rep;
    rep.dc = dc;
    rep.ledger = ledger;
    rep.mc = mc;
    rep.errors = errors;
    rep.delta_norms = delta_norms;
    rep.min_deltas = min_deltas;

    const double alpha = mc.lip_g_2 + 2.0 * mc.C_g * mc.C_lambda;
    const double gamma = 4.0 * mc.C_g * std::sqrt(2.0 * mc.C_lambda);
    const double g_line = mc.lip_g_1 + mc.lip_g_2 * mc.lip_tstar;

    rep.b2_increments.assign(N, 0.0);
    rep.b2_eta.assign(N, 0.0);
    rep.b2_feasible.assign(N, 0);
    for (int n = 0; n < N; ++n) {
        double beta_n = ledger.lip[n] + ledger.lip1[n + 1] * dc.E2 + mc.C_g * dc.E4 +
                        std::max(g_line, ledger.lipstar[n + 1] * mc.lip_Q);
        double x = mc.lip_tstar * errors.e_Z[n] + errors.e_S[n + 1];
        double eta = std::sqrt(x / (2.0 * mc.C_lambda));
        bool feasible = eta < min_deltas[n];
        double sq_term;
        if (feasible || x == 0.0) {
            sq_term = gamma * std::sqrt(x);
        } else {
            // feasibility condition fails: clamp eta below the grid step and
            // evaluate the pre-optimization expression; reported, not certified
            eta = min_deltas[n] * (1.0 - 1e-6);
            sq_term = 2.0 * mc.C_g * (2.0 * mc.C_lambda * eta + x / eta);
        }
        rep.b2_eta[n] = eta;
        rep.b2_feasible[n] = feasible ? 1 : 0;
        rep.b2_increments[n] = alpha * delta_norms[n] + beta_n * errors.e_Z[n] +
                               2.0 * ledger.lip[n + 1] * errors.e_Z[n + 1] + sq_term;
    }
    rep.b2_terminal = mc.g_lip() * errors.e_Z[N];
    rep.b2_partials.assign(N, 0.0);
    double tail = rep.b2_terminal;
    for (int n = N - 1; n >= 0; --n) {
        tail += rep.b2_increments[n];
        rep.b2_partials[n] = tail;
    }
    rep.b2_total = rep.b2_partials[0];
    return rep;
}

void stopping_bound(BoundReport& rep, double a) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("stopping_bound: a must be in (0,1)");
    const int N = rep.ledger.horizon();
    const ModelConstants& mc = rep.mc;
    const DerivedConstants& dc = rep.dc;
    const LipschitzLedger& led = rep.ledger;
    const ErrorTable& errors = rep.errors;
    const double gamma = 4.0 * mc.C_g * std::sqrt(2.0 * mc.C_lambda);
    const double common = 2.0 * mc.C_g * mc.C_tstar * mc.lip_lambda * (2.0 + mc.C_tstar * mc.C_lambda);

    rep.a = a;
    rep.b3_increments.assign(N, 0.0);
    rep.b3_beta_over_a.assign(N, 0.0);
    rep.b3_feasible.assign(N, 0);

    auto sq_arg = [&](int n) { return mc.lip_tstar / (1.0 - a) * errors.e_Z[n] + errors.e_S[n + 1]; };
    auto a_coef = [&](double lip1_next, double lipstar_next) {
        return 2.0 * lip1_next * dc.E2 + common +
               std::max(4.0 * mc.C_g * mc.C_lambda * mc.lip_tstar + 2.0 * lipstar_next * mc.lip_Q,
                        3.0 * mc.lip_g_1);
    };

    // initializing step at n = N-1 (value-table tail, reward-seeded a_{N-1})
    {
        int n = N - 1;
        double x = sq_arg(n);
        rep.b3_beta_over_a[n] = std::sqrt(x / (2.0 * mc.C_lambda));
        rep.b3_feasible[n] = rep.b3_beta_over_a[n] < rep.min_deltas[n] ? 1 : 0;
        double a_coef_last = a_coef(mc.lip_g_1, mc.lip_g_star);
        rep.b3_increments[n] = rep.b2_partials[n] + 3.0 * mc.g_lip() * errors.e_Z[N] +
                               a_coef_last * errors.e_Z[n] + gamma * std::sqrt(x);
    }
    for (int n = N - 2; n >= 0; --n) {
        double x = sq_arg(n);
        rep.b3_beta_over_a[n] = std::sqrt(x / (2.0 * mc.C_lambda));
        rep.b3_feasible[n] = rep.b3_beta_over_a[n] < rep.min_deltas[n] ? 1 : 0;
        rep.b3_increments[n] = rep.b2_partials[n + 1] + rep.b2_partials[n] +
                               2.0 * led.lip[n + 1] * errors.e_Z[n + 1] +
                               a_coef(led.lip1[n + 1], led.lipstar[n + 1]) * errors.e_Z[n] +
                               gamma * std::sqrt(x);
    }
    rep.b3_total = 0.0;
    for (double inc : rep.b3_increments) rep.b3_total += inc;
}

std::string bound_report_to_json(const BoundReport& rep) {
    JsonWriter w;
    w.begin_object();
    w.key("constants");
    w.begin_object();
    w.kv("E1", rep.dc.E1);
    w.kv("E2", rep.dc.E2);
    w.kv("E3", rep.dc.E3);
    w.kv("E4", rep.dc.E4);
    w.kv("E5", rep.dc.E5);
    w.kv("E6", rep.dc.E6);
    w.end_object();

    w.key("ledger");
    w.begin_array();
    for (int n = 0; n <= rep.ledger.horizon(); ++n) {
        w.begin_object();
        w.kv("n", n);
        w.kv("lip1", rep.ledger.lip1[n]);
        w.kv("lip2", rep.ledger.lip2[n]);
        w.kv("lipstar", rep.ledger.lipstar[n]);
        w.kv("lip", rep.ledger.lip[n]);
        w.end_object();
    }
    w.end_array();

    w.key("b2");
    w.begin_object();
    w.key("per_stage");
    w.array(rep.b2_increments);
    w.kv("terminal", rep.b2_terminal);
    w.key("eta");
    w.array(rep.b2_eta);
    w.key("feasible");
    w.array(rep.b2_feasible);
    w.key("partials");
    w.array(rep.b2_partials);
    w.kv("total", rep.b2_total);
    w.end_object();

    w.key("b3");
    w.begin_object();
    w.key("per_stage");
    w.array(rep.b3_increments);
    w.key("beta_over_a");
    w.array(rep.b3_beta_over_a);
    w.key("feasible");
    w.array(rep.b3_feasible);
    w.kv("a", rep.a);
    w.kv("total", rep.b3_total);
    w.end_object();

    w.key("inputs");
    w.begin_object();
    w.key("e_Z");
    w.array(rep.errors.e_Z);
    w.key("e_S");
    w.array(rep.errors.e_S);
    w.key("e_Theta");
    w.array(rep.errors.e_Theta);
    w.kv("qe", rep.errors.qe);
    w.kv("error_samples", rep.errors.samples);
    w.key("delta_norms");
    w.array(rep.delta_norms);
    w.key("min_deltas");
    w.array(rep.min_deltas);
    w.key("model_constants");
    w.begin_object();
    w.kv("C_lambda", rep.mc.C_lambda);
    w.kv("lip_lambda", rep.mc.lip_lambda);
    w.kv("C_tstar", rep.mc.C_tstar);
    w.kv("lip_tstar", rep.mc.lip_tstar);
    w.kv("lip_Q", rep.mc.lip_Q);
    w.kv("C_g", rep.mc.C_g);
    w.kv("lip_g_1", rep.mc.lip_g_1);
    w.kv("lip_g_2", rep.mc.lip_g_2);
    w.kv("lip_g_star", rep.mc.lip_g_star);
    w.kv("lip_g", rep.mc.g_lip());
    w.end_object();
    w.end_object();

    w.end_object();
    std::string out = w.take();
    out += '\n';
    return out;
}

}  // namespace pdmpstop
