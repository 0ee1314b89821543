#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "support/rng.hpp"

namespace pdmpstop {

// Lipschitz/bound constant bundle of the model, user-supplied. Names follow
// the usual PDMP conventions: C_* are sup bounds, lip_* are Lipschitz
// constants along flows (index 1: in the state, index 2: in time, star: at
// the boundary exit point).
struct ModelConstants {
    double C_lambda = 0.0;    // sup of the jump rate
    double lip_lambda = 0.0;  // [lambda]_1
    double C_tstar = 0.0;     // sup of the exit time
    double lip_tstar = 0.0;   // [t*]
    double lip_Q = 0.0;       // [Q]
    double C_g = 0.0;         // sup |g|
    double lip_g_1 = 0.0;     // [g]_1
    double lip_g_2 = 0.0;     // [g]_2
    double lip_g_star = 0.0;  // [g]_*
    double lip_g = -1.0;      // [g] on the closure; negative = use lip_g_1

    double g_lip() const { return lip_g >= 0.0 ? lip_g : lip_g_1; }
    void validate() const;  // throws ConfigError on bad signs
};

// A piecewise deterministic Markov process through its local characteristics
// (flow, jump rate, kernel, exit time) plus the reward and constant bundle.
// One-dimensional state spaces; immutable after construction and freely
// shareable across threads (all closures must be pure).
struct PdmpModel {
    int state_dim = 1;
    std::string tag;

    std::function<double(double, double)> flow;           // phi(x,t)
    std::function<double(double)> jump_rate;              // lambda(x) >= 0
    std::function<double(double)> exit_time;              // t*(x) > 0
    std::function<double(double, double)> kernel_sample;  // draw from Q(x,.) given u ~ U[0,1)
    std::function<double(double)> reward;                 // g(x)

    // Optional capability: w |-> Qw as a scalar functional, present when
    // Q(x,.) does not depend on x. Second argument is the quadrature
    // tolerance for models that integrate.
    std::function<double(const std::function<double(double)>&, double)> kernel_expectation;
    bool kernel_state_independent = false;

    // Optional analytic overrides for the hazard and its time-inverse.
    // hazard(x,t) = Lambda(x,t); hazard_inverse(x,e) = inf{t : Lambda >= e},
    // only queried for e < Lambda(x, t*(x)).
    std::function<double(double, double)> hazard;
    std::function<double(double, double)> hazard_inverse;

    // When true, sup_{u<=s} g(phi(x,u)) is taken at u = s instead of searched.
    bool reward_monotone_along_flow = false;

    std::pair<double, double> domain{0.0, 1.0};  // closure of E, for meshes
    ModelConstants constants;
};

// Jump skeleton of a simulated path: Theta_k = (Z_k, S_k) for k = 0..N with
// S_0 = 0, plus cumulative jump times and boundary-forced flags.
struct Trajectory {
    std::vector<double> z;       // post-jump states, z[0] = x0
    std::vector<double> s;       // inter-jump times, s[0] = 0
    std::vector<double> t;       // jump times, t[k] = sum of s[0..k]
    std::vector<char> forced;    // s[k] == t*(z[k-1])

    std::size_t horizon() const { return z.empty() ? 0 : z.size() - 1; }
};

// Lambda(x,t) = int_0^t lambda(phi(x,s)) ds for 0 <= t <= t*(x).
// Analytic override when present, else adaptive Simpson to 1e-8.
double cumulative_hazard(const PdmpModel& model, double x, double t);

struct InterjumpDraw {
    double s = 0.0;
    bool forced = false;
};

// Inverts the hazard at a unit-exponential draw: S = inf{t : Lambda(x,t) >=
// exp_draw} when that is below t*(x), else the boundary-forced (t*(x), true).
InterjumpDraw sample_interjump(const PdmpModel& model, double x, double exp_draw);

// Simulates the embedded chain (Z_k, S_k) for k = 0..n_jumps from x0.
// Deterministic given the stream identity.
Trajectory simulate_chain(const PdmpModel& model, double x0, int n_jumps, const RngStream& stream);

// max over segments k of sup_{0<=u<=S_{k+1}} g(phi(Z_k,u)), and g(Z_N).
double sup_reward_along_path(const PdmpModel& model, const Trajectory& traj);

// The reference model: E = [0,1), phi(x,t) = x + v t, lambda(x) = rate_beta *
// x^alpha, Q = uniform law on [0,1/2], g(x) = x. Constants filled
// analytically; hazard and its inverse provided in closed form.
PdmpModel make_example_model(double v, double alpha, double rate_beta);

// CSV export, header "traj_id,k,Z,S,T,boundary_forced".
std::string trajectories_to_csv(const std::vector<Trajectory>& trajs);

}  // namespace pdmpstop
