#include "dp/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "support/error.hpp"
#include "support/fmt.hpp"
#include "support/numeric.hpp"
#include "support/parallel.hpp"

namespace pdmpstop {

namespace {

// linear interpolation of mesh values over [lo,hi]
double interp(const std::vector<double>& mesh, const std::vector<double>& vals, double x) {
    if (x <= mesh.front()) return vals.front();
    if (x >= mesh.back()) return vals.back();
    auto it = std::upper_bound(mesh.begin(), mesh.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - mesh.begin());
    std::size_t lo = hi - 1;
    double t = (x - mesh[lo]) / (mesh[hi] - mesh[lo]);
    return vals[lo] + t * (vals[hi] - vals[lo]);
}

}  // namespace

OracleResult continuous_oracle(const PdmpModel& model, double x0, int N, const OracleOptions& opts) {
    if (!model.kernel_state_independent || !model.kernel_expectation)
        throw UnsupportedModelError(
            "continuous_oracle requires a state-independent kernel expectation capability");
    if (N < 0) throw NumericError("continuous_oracle: N must be >= 0");

    OracleResult res;
    const int M = opts.state_mesh;
    res.mesh.resize(M);
    double lo = model.domain.first, hi = model.domain.second;
    for (int i = 0; i < M; ++i) res.mesh[i] = lo + (hi - lo) * static_cast<double>(i) / (M - 1);

    res.v.assign(N + 1, std::vector<double>(M, 0.0));
    for (int i = 0; i < M; ++i) res.v[N][i] = model.reward(res.mesh[i]);

    for (int k = N - 1; k >= 0; --k) {
        const std::vector<double>& vnext = res.v[k + 1];
        auto v_interp = [&](double x) { return interp(res.mesh, vnext, x); };
        double c = model.kernel_expectation(v_interp, opts.quad_tol);
        res.q_values.push_back(c);

        std::vector<double>& vk = res.v[k];
        parallel_chunks(static_cast<std::size_t>(M), [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                double x = res.mesh[i];
                double ts = model.exit_time(x);
                if (!(ts > 0.0)) {
                    // boundary point of the closure: no time left, stop now
                    vk[i] = std::max(model.reward(x), c);
                    continue;
                }
                auto J = [&](double t) {
                    double lam = cumulative_hazard(model, x, t);
                    double surv = std::exp(-lam);
                    return c * (1.0 - surv) + model.reward(model.flow(x, t)) * surv;
                };
                double tbest = maximize_scan_golden(J, 0.0, ts, opts.t_search_points, opts.refine_tol);
                vk[i] = std::max(J(tbest), c);
            }
        });
    }

    res.V0 = interp(res.mesh, res.v[0], x0);
    return res;
}

std::string oracle_to_csv(const OracleResult& result) {
    std::string out = "stage,x,v\n";
    for (std::size_t k = 0; k < result.v.size(); ++k) {
        for (std::size_t i = 0; i < result.mesh.size(); ++i) {
            out += std::to_string(k);
            out += ',';
            out += format_shortest(result.mesh[i]);
            out += ',';
            out += format_shortest(result.v[k][i]);
            out += '\n';
        }
    }
    return out;
}

}  // namespace pdmpstop
