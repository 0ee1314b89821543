// Acceptance suite: reproduction targets and structural guarantees for the
// reference configuration (example model v=1, alpha=1, beta=3, x0=0, N=10,
// p=2). Each criterion prints exactly one PASS/FAIL line; the process exits
// nonzero if any criterion fails. Detail lines prefixed "  -" explain every
// cell-level comparison.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "bounds/bounds.hpp"
#include "dp/oracle.hpp"
#include "report/config.hpp"
#include "report/pipeline.hpp"
#include "stopping/policy.hpp"
#include "support/numeric.hpp"
#include "support/parallel.hpp"

using namespace pdmpstop;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20260809;

// frozen reference value of the continuous recursion at default oracle
// options (independently cross-checked; see tests/test_dp.cpp)
constexpr double kOracleV0 = 0.963568852034;

int g_failures = 0;

void criterion(int id, const char* name, bool pass, const std::string& note = "") {
    std::string suffix = note.empty() ? "" : "  [" + note + "]";
    std::printf("CRITERION %d (%s): %s%s\n", id, name, pass ? "PASS" : "FAIL", suffix.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

bool cell(const char* label, double measured, double target, double tol_abs) {
    bool ok = std::abs(measured - target) <= tol_abs;
    std::printf("  - %-14s measured=%9.4f  target=%9.4f +- %.4f  %s\n", label, measured, target, tol_abs,
                ok ? "ok" : "OUT");
    return ok;
}

bool cell_rel(const char* label, double measured, double target, double tol_rel) {
    bool ok = std::abs(measured - target) <= tol_rel * target;
    std::printf("  - %-14s measured=%9.4f  target=%9.4f +-%3.0f%%   %s\n", label, measured, target,
                100.0 * tol_rel, ok ? "ok" : "OUT");
    return ok;
}

RunConfig reference_config(const fs::path& out, int pts, double delta, std::uint64_t seed) {
    RunConfig cfg;
    cfg.model = {"example", 1.0, 1.0, 3.0, 0.0};
    cfg.horizon = 10;
    cfg.quantization.points_per_stage = pts;
    cfg.quantization.train_samples = 100000;
    cfg.quantization.weight_samples = 100000;
    cfg.quantization.eval_samples = 100000;
    cfg.quantization.p = 2.0;
    cfg.dp.delta = delta;
    cfg.stopping.a = 0.5;
    cfg.stopping.n_mc = 100000;
    cfg.seed = seed;
    cfg.output_dir = out.string();
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// exact E[sup_{t<=T_10} g(X(t))] by quadrature of the closed-form sup law:
// the path peaks are Z_k + S_{k+1} with conditional CDF 1 - e^{-1.5(y^2-z^2)}
// and Z_k uniform on [0,1/2], so
//   P(sup <= y) = (1 - e^{-1.5 y^2}) * G(y)^9 * min(2y, 1),
//   G(y) = 2 int_0^{min(y,1/2)} (1 - e^{-1.5(y^2 - z^2)}) dz.
double exact_e_sup() {
    auto big_g = [](double y) {
        double hi = std::min(y, 0.5);
        if (hi <= 0.0) return 0.0;
        return 2.0 * integrate_simpson([y](double z) { return 1.0 - std::exp(-1.5 * (y * y - z * z)); },
                                       0.0, hi, 1e-12);
    };
    auto cdf = [&](double y) {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        return (1.0 - std::exp(-1.5 * y * y)) * std::pow(big_g(y), 9) * std::min(2.0 * y, 1.0);
    };
    return integrate_simpson([&](double y) { return 1.0 - cdf(y); }, 0.0, 1.0, 1e-10);
}

double train_and_solve_v0(int pts, double delta, std::uint64_t seed) {
    PdmpModel model = make_example_model(1.0, 1.0, 3.0);
    RngStream root(seed, "pdmpstop");
    QuantizationGridSet gs = train_grids(model, 0.0, 10, pts, 100000, 2.0, root);
    estimate_transition_weights(model, gs, 100000, root);
    ValueTable vt = backward_solve(model, gs, delta);
    return vt.V0;
}

}  // namespace

int main() {
    fs::path work = fs::temp_directory_path() / "pdmpstop_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    PdmpModel model = make_example_model(1.0, 1.0, 3.0);

    // ---- criterion 1: benchmark-table reproduction across the grid ladder ----
    struct Row {
        int pts;
        double delta, qe, v0h, v0b, b1, b2, b3;
    };
    const Row targets[] = {
        {10, 0.151, 0.0943, 0.7760, 0.8173, 0.1705, 74.64, 897.0},
        {100, 0.083, 0.0289, 0.8242, 0.8850, 0.1028, 34.15, 400.3},
        {900, 0.049, 0.0102, 0.8514, 0.8968, 0.0910, 17.98, 206.9},
    };
    bool c1 = true;
    int c1_out = 0;
    std::vector<PipelineResult> runs;
    for (const Row& row : targets) {
        std::printf("  Pt=%d (delta=%.3f):\n", row.pts, row.delta);
        RunConfig cfg = reference_config(work / ("pt" + std::to_string(row.pts)), row.pts, row.delta, kSeed);
        runs.push_back(cmd_pipeline(cfg));
        const PipelineResult& r = runs.back();
        bool cells[] = {
            cell_rel("QE", r.grids.errors.qe, row.qe, 0.35),
            cell("V0_hat", r.values.V0, row.v0h, 0.03),
            cell("V0_bar", r.eval.v_bar, row.v0b, 0.03),
            cell("B1", r.eval.b1, row.b1, 0.03),
            cell_rel("B2", r.bounds.b2_total, row.b2, 0.25),
            cell_rel("B3", r.bounds.b3_total, row.b3, 0.30),
        };
        for (bool ok : cells)
            if (!ok) {
                c1 = false;
                ++c1_out;
            }
    }
    criterion(1, "benchmark table reproduction, Pt in {10,100,900}", c1,
              c1 ? "18/18 cells in tolerance" : std::to_string(c1_out) + "/18 cells outside tolerance");

    // ---- criterion 2: Monte-Carlo upper bound over 1e6 trajectories ----
    double e_sup_mc, e_sup_se;
    {
        const std::int64_t n = 1000000;
        RngStream stream(kSeed, "pdmpstop/acc-sup");
        std::vector<double> partial(kReductionChunks, 0.0), partial_sq(kReductionChunks, 0.0);
        parallel_chunks(static_cast<std::size_t>(n), [&](std::size_t c, std::size_t b, std::size_t e) {
            double acc = 0.0, acc2 = 0.0;
            for (std::size_t i = b; i < e; ++i) {
                Trajectory tr = simulate_chain(model, 0.0, 10, stream.with_index(i));
                double sup = sup_reward_along_path(model, tr);
                acc += sup;
                acc2 += sup * sup;
            }
            partial[c] = acc;
            partial_sq[c] = acc2;
        });
        double total = 0.0, total_sq = 0.0;
        for (std::size_t c = 0; c < kReductionChunks; ++c) {
            total += partial[c];
            total_sq += partial_sq[c];
        }
        e_sup_mc = total / static_cast<double>(n);
        double var = std::max(0.0, total_sq / static_cast<double>(n) - e_sup_mc * e_sup_mc);
        e_sup_se = std::sqrt(var / static_cast<double>(n));
        double exact = exact_e_sup();
        std::printf("  - E[sup] over 1e6 paths = %.6f (se %.6f); exact value by quadrature of the sup law "
                    "= %.6f\n",
                    e_sup_mc, e_sup_se, exact);
        std::printf("  - stated target 0.9878 +- 0.005; measured-vs-exact gap = %.2e\n",
                    std::abs(e_sup_mc - exact));
        criterion(2, "E[sup g(X(t))] = 0.9878 +- 0.005 over 1e6 paths",
                  std::abs(e_sup_mc - 0.9878) <= 0.005, "measured " + std::to_string(e_sup_mc));
    }

    // ---- criterion 3: bracketing with the frozen oracle value ----
    {
        OracleResult oracle = continuous_oracle(model, 0.0, 10);
        bool frozen_ok = std::abs(oracle.V0 - kOracleV0) < 1e-9;
        const PipelineResult& r900 = runs.back();
        double lo = r900.eval.v_bar - 2.0 * r900.eval.stderr_v;
        double hi = e_sup_mc + 2.0 * e_sup_se;
        bool bracket = lo <= kOracleV0 && kOracleV0 <= hi;
        bool range = kOracleV0 >= 0.8968 - 0.01 && kOracleV0 <= 0.9878 + 0.01;
        std::printf("  - oracle V0 = %.9f (frozen %.9f), bracket [%.4f, %.4f], range ok=%d\n", oracle.V0,
                    kOracleV0, lo, hi, int(range));
        criterion(3, "bracketing V0_bar - 2se <= V0 <= E[sup] + 2se and V0 in range",
                  frozen_ok && bracket && range);
    }

    // ---- criterion 4: convergence in the codebook size across 3 seeds ----
    {
        bool c4 = true;
        for (std::uint64_t seed : {kSeed, kSeed + 101, kSeed + 202}) {
            double v900, v10;
            if (seed == kSeed) {
                v10 = runs[0].values.V0;
                v900 = runs[2].values.V0;
            } else {
                v10 = train_and_solve_v0(10, 0.151, seed);
                v900 = train_and_solve_v0(900, 0.049, seed);
            }
            double e10 = std::abs(v10 - kOracleV0), e900 = std::abs(v900 - kOracleV0);
            std::printf("  - seed %llu: |V0_hat-V0| at Pt=900 %.4f < at Pt=10 %.4f: %s\n",
                        static_cast<unsigned long long>(seed), e900, e10, e900 < e10 ? "ok" : "OUT");
            if (!(e900 < e10)) c4 = false;
        }
        criterion(4, "strict error decrease Pt=10 -> Pt=900 for 3 seeds", c4);
    }

    // ---- criterion 5: bound validity whenever the feasibility flags hold ----
    {
        bool c5 = true;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const PipelineResult& r = runs[i];
            bool b2_all = true, b3_all = true;
            for (char f : r.bounds.b2_feasible) b2_all = b2_all && f;
            for (char f : r.bounds.b3_feasible) b3_all = b3_all && f;
            double gap_hat = std::abs(r.values.V0 - kOracleV0);
            double gap_bar = std::abs(r.eval.v_bar - kOracleV0) - 2.0 * r.eval.stderr_v;
            std::printf("  - Pt=%d: b2 certified=%d (B2=%.2f vs |V0_hat-V0|=%.4f), b3 certified=%d "
                        "(B3=%.1f vs gap=%.4f)\n",
                        targets[i].pts, int(b2_all), r.bounds.b2_total, gap_hat, int(b3_all),
                        r.bounds.b3_total, gap_bar);
            if (b2_all && !(r.bounds.b2_total >= gap_hat)) c5 = false;
            if (b3_all && !(r.bounds.b3_total >= gap_bar)) c5 = false;
        }
        criterion(5, "B2/B3 dominate the observed gaps when certified", c5);
    }

    // ---- criterion 6: constant arithmetic ----
    {
        DerivedConstants dc = derive_constants(model.constants);
        bool exact = dc.E1 == 15.0 && dc.E2 == 0.0 && dc.E3 == 8.0 && dc.E4 == 21.0 && dc.E5 == 18.0 &&
                     dc.E6 == 12.0;
        LipschitzLedger led = lipschitz_ledger(model.constants, dc, 10);
        bool identities = true;
        // recursion rows satisfy the identity exactly; the seed row carries
        // the reward constant [g]_* and only the <= relation
        for (int n = 0; n < 10; ++n)
            identities =
                identities && std::abs(led.lipstar[n] - (led.lip1[n] + led.lip2[n] * 1.0)) <= 1e-10;
        identities = identities && led.lipstar[10] <= led.lip1[10] + led.lip2[10] * 1.0 + 1e-12;
        for (int n = 0; n < 10; ++n)
            identities = identities && std::abs(led.lip2[n] - 22.0 * std::exp(3.0)) <= 1e-10;
        std::printf("  - E = (%g, %g, %g, %g, %g, %g); lip2 = %.10f (22e^3 = %.10f)\n", dc.E1, dc.E2, dc.E3,
                    dc.E4, dc.E5, dc.E6, led.lip2[0], 22.0 * std::exp(3.0));
        criterion(6, "derived constants (15,0,8,21,18,12) and ledger identities", exact && identities);
    }

    // ---- criterion 7: sampling law of S_1 ----
    {
        const int n = 100000;
        RngStream stream(kSeed, "pdmpstop/acc-ks");
        std::vector<double> spont;
        int forced = 0;
        for (int i = 0; i < n; ++i) {
            Trajectory tr = simulate_chain(model, 0.0, 1, stream.with_index(i));
            if (tr.forced[1])
                ++forced;
            else
                spont.push_back(tr.s[1]);
        }
        std::sort(spont.begin(), spont.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < spont.size(); ++i) {
            double f = 1.0 - std::exp(-1.5 * spont[i] * spont[i]);
            ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
            ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
        }
        double atom = static_cast<double>(forced) / n;
        std::printf("  - KS distance %.4f (< 0.01), boundary atom %.4f vs e^{-1.5} = %.4f (+- 0.005)\n", ks,
                    atom, std::exp(-1.5));
        criterion(7, "law of S_1: KS < 0.01 and boundary atom within 0.005",
                  ks < 0.01 && std::abs(atom - std::exp(-1.5)) < 0.005);
    }

    // ---- criterion 8: operator property suite, zero violations ----
    {
        long long cases = 0, violations = 0;
        Rng rng(RngStream(kSeed, "pdmpstop/acc-prop"));
        for (int rep = 0; rep < 600; ++rep) {
            // random two-stage fixture
            int npts = 2 + static_cast<int>(rng.uniform() * 10);
            std::vector<Point2> pts;
            for (int i = 0; i < npts; ++i) pts.push_back({0.5 * rng.uniform(), rng.uniform()});
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            npts = static_cast<int>(pts.size());
            std::vector<double> row(npts);
            double total = 0.0;
            for (double& x : row) {
                x = 0.01 + rng.uniform();
                total += x;
            }
            for (double& x : row) x /= total;
            double z0 = 0.45 * rng.uniform();

            QuantizationGridSet gs;
            gs.N = 1;
            gs.p = 2.0;
            gs.x0 = z0;
            StageGrid g0;
            g0.stage = 0;
            g0.codebook = {{z0, 0.0}};
            g0.weights = {1.0};
            g0.rebuild_index();
            StageGrid g1;
            g1.stage = 1;
            g1.codebook = pts;
            g1.weights.assign(npts, 1.0 / npts);
            g1.rebuild_index();
            gs.stages = {g0, g1};
            gs.transitions.assign(2, {});
            gs.row_counts.assign(2, {});
            gs.transitions[1] = {row};
            gs.row_counts[1] = {1000};

            // weight normalization
            double rs = 0.0;
            for (double x : row) rs += x;
            ++cases;
            if (std::abs(rs - 1.0) > 1e-12) ++violations;

            // K-hat constant preservation
            int ncls = gs.stages[1].classes();
            std::vector<double> cw(ncls, 0.777);
            ++cases;
            if (std::abs(op_K_hat(gs, 1, cw, 0) - 0.777) > 1e-12) ++violations;

            // monotonicity of J/K/L in w
            std::vector<double> w(ncls), wp(ncls);
            for (int i = 0; i < ncls; ++i) {
                w[i] = rng.uniform();
                wp[i] = w[i] + rng.uniform();
            }
            double ts = model.exit_time(z0);
            double s = ts * rng.uniform();
            TimeGrid tg = build_time_grid(z0, ts, 0.03 + 0.4 * rng.uniform());
            ++cases;
            if (op_J_hat(model, gs, 1, w, 0, s) > op_J_hat(model, gs, 1, wp, 0, s) + 1e-12) ++violations;
            ++cases;
            if (op_K_hat(gs, 1, w, 0) > op_K_hat(gs, 1, wp, 0) + 1e-12) ++violations;
            ++cases;
            if (op_L_hat(model, gs, 1, w, 0, tg).value > op_L_hat(model, gs, 1, wp, 0, tg).value + 1e-12)
                ++violations;

            // grid margin invariant and projection idempotence / tie-break
            ++cases;
            if (tg.max_node() > ts - tg.delta + 1e-12) ++violations;
            int pick = static_cast<int>(rng.uniform() * npts);
            ++cases;
            if (gs.project(1, gs.stages[1].codebook[pick]) != pick) ++violations;
            Point2 q{0.5 * rng.uniform(), rng.uniform()};
            int via_index = gs.project(1, q);
            int brute = 0;
            double bd = dist_pow(gs.stages[1].codebook[0], q, 2.0, {1, 1});
            for (int i = 1; i < npts; ++i) {
                double d = dist_pow(gs.stages[1].codebook[i], q, 2.0, {1, 1});
                if (d < bd) {
                    bd = d;
                    brute = i;
                }
            }
            ++cases;
            if (via_index != brute) ++violations;
        }

        // node-0 floor, |v_hat| <= C_g and tau <= T_N on small trained runs
        for (int rep = 0; rep < 4; ++rep) {
            QuantizationGridSet gs =
                train_grids(model, 0.0, 3, 10, 1000, 2.0, RngStream(kSeed, "acc-prop-train", rep));
            estimate_transition_weights(model, gs, 4000, RngStream(kSeed, "acc-prop-w", rep));
            estimate_errors(model, gs, 4000, 2.0, RngStream(kSeed, "acc-prop-e", rep));
            ValueTable vt = backward_solve(model, gs, 0.11);
            for (int k = 0; k <= 3; ++k)
                for (int c = 0; c < gs.stages[k].classes(); ++c) {
                    if (!vt.defined[k][c]) continue;
                    ++cases;
                    if (std::abs(vt.v[k][c]) > model.constants.C_g + 1e-12) ++violations;
                    if (k < 3) {
                        ++cases;
                        if (vt.v[k][c] < model.reward(gs.stages[k].z_values[c]) - 1e-12) ++violations;
                    }
                }
            auto gp = std::make_shared<const QuantizationGridSet>(std::move(gs));
            StoppingPolicy pol = build_policy(vt, gp, model, 0.01);
            for (int i = 0; i < 50; ++i) {
                StoppingOutcome out =
                    run_rule(model, pol, 0.0, RngStream(kSeed, "acc-prop-run", rep * 50 + i));
                ++cases;
                if (out.tau > 3.0 * model.constants.C_tstar + 1e-12) ++violations;
            }
        }
        std::printf("  - randomized property cases: %lld, violations: %lld\n", cases, violations);
        criterion(8, "operator property suite over randomized fixtures", violations == 0 && cases >= 1000);
    }

    // ---- criterion 9: byte-identical outputs for identical config+seed ----
    {
        RunConfig a = reference_config(work / "det_a", 20, 0.12, 4321);
        a.quantization.train_samples = 20000;
        a.quantization.weight_samples = 20000;
        a.quantization.eval_samples = 20000;
        a.stopping.n_mc = 10000;
        a.horizon = 5;
        RunConfig b = a;
        b.output_dir = (work / "det_b").string();
        cmd_pipeline(a);
        cmd_pipeline(b);
        bool same = true;
        // every result artifact must match; the manifest carries wall-clock
        // timings and is exempt by design
        for (const char* f : {"grids.json", "values.json", "evaluation.csv", "bounds.json", "oracle.json",
                              "oracle_mesh.csv", "result_row.csv"}) {
            bool eq = slurp(work / "det_a" / f) == slurp(work / "det_b" / f);
            if (!eq) {
                std::printf("  - %s differs between identical runs\n", f);
                same = false;
            }
        }
        criterion(9, "deterministic artifacts for identical config and seed", same);
    }

    std::printf("ACCEPTANCE: %d/9 criteria passed\n", 9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
