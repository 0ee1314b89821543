#pragma once

#include <array>
#include <vector>

#include "support/rng.hpp"

namespace pdmpstop {

using Point2 = std::array<double, 2>;

// (w0*|d0|)^p + (w1*|d1|)^p; argmin-equivalent to the weighted p-norm.
double dist_pow(const Point2& a, const Point2& b, double p, const Point2& w);

struct KMeansResult {
    std::vector<Point2> centroids;
    int iterations = 0;
    double distortion = 0.0;  // sum of dist_pow at the last assignment
};

// Batch Lloyd with greedy k-means++ seeding from the stream. The centroid
// update minimizes the per-component sum of |x - m|^p exactly (mean for p=2,
// median for p=1, golden-section otherwise), so the distortion is
// nonincreasing across iterations for every p >= 1; that is asserted each
// iteration. Stops after max_iter iterations or when the relative distortion
// change drops below rel_tol. Deterministic given the rng state.
KMeansResult lloyd_2d(const std::vector<Point2>& pts, int k, double p, const Point2& w, Rng& rng,
                      int max_iter = 50, double rel_tol = 1e-6);

// Nearest centroid of `point` among `sorted_codebook` (lexicographically
// sorted by (z, s)); exact distance ties resolve to the smallest index.
// `order` must hold codebook indices sorted ascending by z-component, which
// enables pruning on the z-distance alone.
int nearest_sorted(const std::vector<Point2>& codebook, const std::vector<int>& z_order,
                   const std::vector<double>& z_sorted, const Point2& point, double p, const Point2& w);

}  // namespace pdmpstop
