#include "dp/time_grid.hpp"

#include <cmath>

#include "support/error.hpp"

namespace pdmpstop {

TimeGrid build_time_grid(double z, double tstar, double delta_request) {
    if (!(tstar > 0.0)) throw NumericError("build_time_grid: t* must be positive");
    if (!(delta_request > 0.0)) throw NumericError("build_time_grid: delta must be positive");
    TimeGrid g;
    g.anchor_z = z;
    g.delta = std::min(delta_request, 0.5 * tstar);
    g.n = static_cast<int>(std::floor(tstar / g.delta)) - 1;
    if (g.n < 1) g.n = 1;  // delta <= t*/2 guarantees n >= 1 up to rounding
    return g;
}

}  // namespace pdmpstop
