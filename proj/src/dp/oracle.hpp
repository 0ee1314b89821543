#pragma once

#include <string>
#include <vector>

#include "core/model.hpp"

namespace pdmpstop {

// Semi-analytic evaluation of the continuous recursion v_k = L(v_{k+1}, g)
// for models whose kernel expectation does not depend on the state, so that
// Kw(x) reduces to the scalar Qw. Each v_k is carried on a dense state mesh;
// this is the brute-force reference the acceptance tests compare against.
struct OracleResult {
    double V0 = 0.0;
    std::vector<double> mesh;                   // state mesh over the closure of E
    std::vector<std::vector<double>> v;         // [k][mesh index], k = 0..N
    std::vector<double> q_values;               // Q v_{k+1} used at each step, k = N-1..0 order N..1
};

struct OracleOptions {
    int state_mesh = 2048;
    int t_search_points = 1024;
    double quad_tol = 1e-9;
    double refine_tol = 1e-8;
};

OracleResult continuous_oracle(const PdmpModel& model, double x0, int N, const OracleOptions& opts = {});

// Long-format CSV mesh dump, header "stage,x,v".
std::string oracle_to_csv(const OracleResult& result);

}  // namespace pdmpstop
