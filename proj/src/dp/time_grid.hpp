#pragma once

#include <vector>

namespace pdmpstop {

// Path-adapted maximization grid for the interval [0, t*(z)): nodes i*delta
// for i = 0..n, with max node <= t*(z) - delta by construction. The requested
// step is clipped to t*(z)/2 so every anchor state admits a valid grid.
struct TimeGrid {
    double anchor_z = 0.0;
    double delta = 0.0;
    int n = 0;  // last node index; node count is n+1

    double node(int i) const { return i * delta; }
    double max_node() const { return n * delta; }
    std::vector<double> nodes() const {
        std::vector<double> out(n + 1);
        for (int i = 0; i <= n; ++i) out[i] = node(i);
        return out;
    }
};

TimeGrid build_time_grid(double z, double tstar, double delta_request);

}  // namespace pdmpstop
