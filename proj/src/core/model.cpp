#include "core/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "support/error.hpp"
#include "support/fmt.hpp"
#include "support/numeric.hpp"

namespace pdmpstop {

namespace {
constexpr double kHazardQuadTol = 1e-8;
constexpr double kInvertTimeTol = 1e-10;
constexpr int kSupScanPoints = 1000;
constexpr double kSupRefineTol = 1e-8;
}  // namespace

void ModelConstants::validate() const {
    const double vals[] = {C_lambda, lip_lambda, C_tstar, lip_tstar, lip_Q,
                           C_g,      lip_g_1,    lip_g_2, lip_g_star};
    for (double v : vals)
        if (!(v >= 0.0)) throw ConfigError("model constants must be nonnegative");
    if (!(C_lambda > 0.0) || !(C_tstar > 0.0))
        throw ConfigError("C_lambda and C_tstar must be positive");
}

double cumulative_hazard(const PdmpModel& model, double x, double t) {
    double ts = model.exit_time(x);
    if (t < 0.0 || t > ts * (1.0 + 1e-12))
        throw NumericError("cumulative_hazard: t outside [0, t*(x)]");
    if (t > ts) t = ts;
    if (t == 0.0) return 0.0;
    if (model.hazard) return model.hazard(x, t);
    return integrate_simpson([&](double s) { return model.jump_rate(model.flow(x, s)); }, 0.0, t,
                             kHazardQuadTol);
}

InterjumpDraw sample_interjump(const PdmpModel& model, double x, double exp_draw) {
    if (!(exp_draw > 0.0)) throw NumericError("sample_interjump: draw must be positive");
    double ts = model.exit_time(x);
    double total = cumulative_hazard(model, x, ts);
    if (exp_draw >= total) return {ts, true};
    if (model.hazard_inverse) return {model.hazard_inverse(x, exp_draw), false};
    double s = invert_nondecreasing([&](double t) { return cumulative_hazard(model, x, t); }, 0.0, ts,
                                    exp_draw, kInvertTimeTol);
    return {s, false};
}

Trajectory simulate_chain(const PdmpModel& model, double x0, int n_jumps, const RngStream& stream) {
    if (n_jumps < 1) throw NumericError("simulate_chain: need at least one jump");
    Rng rng(stream);
    Trajectory traj;
    traj.z.reserve(n_jumps + 1);
    traj.s.reserve(n_jumps + 1);
    traj.t.reserve(n_jumps + 1);
    traj.forced.reserve(n_jumps + 1);
    traj.z.push_back(x0);
    traj.s.push_back(0.0);
    traj.t.push_back(0.0);
    traj.forced.push_back(0);
    double x = x0, time = 0.0;
    for (int k = 1; k <= n_jumps; ++k) {
        InterjumpDraw d = sample_interjump(model, x, rng.exponential());
        double pre = model.flow(x, d.s);
        double znext = model.kernel_sample(pre, rng.uniform());
        time += d.s;
        traj.z.push_back(znext);
        traj.s.push_back(d.s);
        traj.t.push_back(time);
        traj.forced.push_back(d.forced ? 1 : 0);
        x = znext;
    }
    return traj;
}

double sup_reward_along_path(const PdmpModel& model, const Trajectory& traj) {
    std::size_t n = traj.horizon();
    double best = model.reward(traj.z[n]);
    for (std::size_t k = 0; k < n; ++k) {
        double z = traj.z[k];
        double slen = traj.s[k + 1];
        double seg;
        if (model.reward_monotone_along_flow) {
            seg = model.reward(model.flow(z, slen));
        } else {
            auto g_along = [&](double u) { return model.reward(model.flow(z, u)); };
            double u = maximize_scan_golden(g_along, 0.0, slen, kSupScanPoints, kSupRefineTol);
            seg = g_along(u);
        }
        best = std::max(best, seg);
    }
    return best;
}

PdmpModel make_example_model(double v, double alpha, double rate_beta) {
    if (!(v > 0.0)) throw ConfigError("example model: v must be positive");
    if (!(alpha >= 1.0)) throw ConfigError("example model: alpha must be >= 1");
    if (!(rate_beta > 0.0)) throw ConfigError("example model: rate_beta must be positive");

    PdmpModel m;
    m.state_dim = 1;
    {
        std::ostringstream tag;
        tag << "example(v=" << v << ",alpha=" << alpha << ",beta=" << rate_beta << ")";
        m.tag = tag.str();
    }
    m.flow = [v](double x, double t) { return x + v * t; };
    m.jump_rate = [rate_beta, alpha](double x) { return rate_beta * std::pow(x, alpha); };
    m.exit_time = [v](double x) { return (1.0 - x) / v; };
    m.kernel_sample = [](double, double u) { return 0.5 * u; };
    m.reward = [](double x) { return x; };
    m.kernel_state_independent = true;
    m.kernel_expectation = [](const std::function<double(double)>& w, double tol) {
        return 2.0 * integrate_simpson(w, 0.0, 0.5, tol);
    };
    // Lambda(x,t) = rate_beta * ((x+vt)^{a+1} - x^{a+1}) / (v (a+1))
    m.hazard = [v, alpha, rate_beta](double x, double t) {
        double a1 = alpha + 1.0;
        return rate_beta * (std::pow(x + v * t, a1) - std::pow(x, a1)) / (v * a1);
    };
    m.hazard_inverse = [v, alpha, rate_beta](double x, double e) {
        double a1 = alpha + 1.0;
        double y = std::pow(std::pow(x, a1) + v * a1 * e / rate_beta, 1.0 / a1);
        return (y - x) / v;
    };
    m.reward_monotone_along_flow = true;
    m.domain = {0.0, 1.0};

    ModelConstants c;
    c.C_lambda = rate_beta;
    c.lip_lambda = rate_beta * alpha;  // valid on [0,1] for alpha >= 1
    c.C_tstar = 1.0 / v;
    c.lip_tstar = 1.0 / v;
    c.lip_Q = 0.0;  // Qw is constant in x
    c.C_g = 1.0;
    c.lip_g_1 = 1.0;
    c.lip_g_2 = v;
    c.lip_g_star = 0.0;  // phi(x, t*(x)) = 1 for every x
    c.lip_g = 1.0;
    m.constants = c;
    return m;
}

std::string trajectories_to_csv(const std::vector<Trajectory>& trajs) {
    std::string out = "traj_id,k,Z,S,T,boundary_forced\n";
    for (std::size_t id = 0; id < trajs.size(); ++id) {
        const Trajectory& tr = trajs[id];
        for (std::size_t k = 0; k < tr.z.size(); ++k) {
            out += std::to_string(id);
            out += ',';
            out += std::to_string(k);
            out += ',';
            out += format_shortest(tr.z[k]);
            out += ',';
            out += format_shortest(tr.s[k]);
            out += ',';
            out += format_shortest(tr.t[k]);
            out += ',';
            out += tr.forced[k] ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

}  // namespace pdmpstop
