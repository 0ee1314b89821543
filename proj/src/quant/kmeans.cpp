#include "quant/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "support/error.hpp"
#include "support/parallel.hpp"

namespace pdmpstop {

double dist_pow(const Point2& a, const Point2& b, double p, const Point2& w) {
    double d0 = w[0] * std::abs(a[0] - b[0]);
    double d1 = w[1] * std::abs(a[1] - b[1]);
    if (p == 2.0) return d0 * d0 + d1 * d1;
    if (p == 1.0) return d0 + d1;
    return std::pow(d0, p) + std::pow(d1, p);
}

int nearest_sorted(const std::vector<Point2>& codebook, const std::vector<int>& z_order,
                   const std::vector<double>& z_sorted, const Point2& point, double p, const Point2& w) {
    const int n = static_cast<int>(codebook.size());
    auto it = std::lower_bound(z_sorted.begin(), z_sorted.end(), point[0]);
    int ri = static_cast<int>(it - z_sorted.begin());
    int li = ri - 1;
    double best = std::numeric_limits<double>::infinity();
    int best_idx = n;  // larger than any real index so ties prefer real candidates
    auto consider = [&](int pos) {
        int idx = z_order[pos];
        double d = dist_pow(codebook[idx], point, p, w);
        if (d < best || (d == best && idx < best_idx)) {
            best = d;
            best_idx = idx;
        }
    };
    auto z_term = [&](int pos) {
        double dz = w[0] * std::abs(z_sorted[pos] - point[0]);
        return p == 2.0 ? dz * dz : (p == 1.0 ? dz : std::pow(dz, p));
    };
    // expand outward; the z-distance is monotone in each direction, so a
    // strictly-greater z-term prunes the rest of that side
    while (li >= 0 || ri < n) {
        bool take_left;
        if (li < 0)
            take_left = false;
        else if (ri >= n)
            take_left = true;
        else
            take_left = (point[0] - z_sorted[li]) <= (z_sorted[ri] - point[0]);
        if (take_left) {
            if (z_term(li) > best) {
                li = -1;
                continue;
            }
            consider(li);
            --li;
        } else {
            if (z_term(ri) > best) {
                ri = n;
                continue;
            }
            consider(ri);
            ++ri;
        }
    }
    return best_idx;
}

namespace {

std::vector<int> argsort_z(const std::vector<Point2>& centroids) {
    std::vector<int> order(centroids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (centroids[a][0] != centroids[b][0]) return centroids[a][0] < centroids[b][0];
        if (centroids[a][1] != centroids[b][1]) return centroids[a][1] < centroids[b][1];
        return a < b;
    });
    return order;
}

// exact minimizer of sum_i |x_i - m|^p over m, one component
double component_center(std::vector<double>& vals, double p) {
    if (vals.empty()) return 0.0;
    if (p == 2.0) {
        double s = std::accumulate(vals.begin(), vals.end(), 0.0);
        return s / static_cast<double>(vals.size());
    }
    std::sort(vals.begin(), vals.end());
    if (p == 1.0) return vals[(vals.size() - 1) / 2];
    double lo = vals.front(), hi = vals.back();
    auto obj = [&](double m) {
        double s = 0.0;
        for (double v : vals) s += std::pow(std::abs(v - m), p);
        return s;
    };
    const double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = obj(x1), f2 = obj(x2);
    while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi) + std::abs(lo))) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = obj(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = obj(x1);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

KMeansResult lloyd_2d(const std::vector<Point2>& pts, int k, double p, const Point2& w, Rng& rng,
                      int max_iter, double rel_tol) {
    const std::size_t n = pts.size();
    if (k < 1 || n == 0) throw NumericError("lloyd_2d: empty input");

    // greedy spreading init (k-means++ with D^p weights)
    std::vector<Point2> centroids;
    centroids.reserve(k);
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    {
        std::size_t first = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
        if (first >= n) first = n - 1;
        centroids.push_back(pts[first]);
    }
    for (int c = 1; c < k; ++c) {
        const Point2& last = centroids.back();
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = dist_pow(pts[i], last, p, w);
            if (d < dmin[i]) dmin[i] = d;
            total += dmin[i];
        }
        if (total <= 0.0) throw NumericError("lloyd_2d: fewer distinct points than requested codebook size");
        double u = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            acc += dmin[i];
            if (acc >= u && dmin[i] > 0.0) {
                pick = i;
                break;
            }
        }
        if (pick == n) {
            for (std::size_t i = n; i-- > 0;)
                if (dmin[i] > 0.0) {
                    pick = i;
                    break;
                }
        }
        centroids.push_back(pts[pick]);
    }

    std::vector<int> assign(n, 0);
    double prev_distortion = std::numeric_limits<double>::infinity();
    double distortion = prev_distortion;
    int iterations = 0;

    for (int it = 1; it <= max_iter; ++it) {
        iterations = it;
        std::vector<int> z_order = argsort_z(centroids);
        std::vector<double> z_sorted(k);
        for (int i = 0; i < k; ++i) z_sorted[i] = centroids[z_order[i]][0];

        std::vector<double> chunk_dist(kReductionChunks, 0.0);
        parallel_chunks(n, [&](std::size_t chunk, std::size_t b, std::size_t e) {
            double local = 0.0;
            for (std::size_t i = b; i < e; ++i) {
                int idx = nearest_sorted(centroids, z_order, z_sorted, pts[i], p, w);
                assign[i] = idx;
                local += dist_pow(pts[i], centroids[idx], p, w);
            }
            chunk_dist[chunk] = local;
        });
        distortion = 0.0;
        for (double d : chunk_dist) distortion += d;

        if (distortion > prev_distortion * (1.0 + 1e-9) + 1e-15)
            throw NumericError("lloyd_2d: distortion increased across an iteration");
        bool converged = prev_distortion < std::numeric_limits<double>::infinity() &&
                         std::abs(prev_distortion - distortion) <= rel_tol * std::max(prev_distortion, 1e-300);
        prev_distortion = distortion;
        if (converged) break;

        // centroid update
        if (p == 2.0) {
            std::vector<double> sz(static_cast<std::size_t>(kReductionChunks) * k, 0.0);
            std::vector<double> ss(static_cast<std::size_t>(kReductionChunks) * k, 0.0);
            std::vector<long long> cnt(static_cast<std::size_t>(kReductionChunks) * k, 0);
            parallel_chunks(n, [&](std::size_t chunk, std::size_t b, std::size_t e) {
                double* szc = sz.data() + chunk * k;
                double* ssc = ss.data() + chunk * k;
                long long* cc = cnt.data() + chunk * k;
                for (std::size_t i = b; i < e; ++i) {
                    int a = assign[i];
                    szc[a] += pts[i][0];
                    ssc[a] += pts[i][1];
                    cc[a] += 1;
                }
            });
            for (int c = 0; c < k; ++c) {
                double tz = 0.0, ts = 0.0;
                long long tc = 0;
                for (std::size_t chunk = 0; chunk < kReductionChunks; ++chunk) {
                    tz += sz[chunk * k + c];
                    ts += ss[chunk * k + c];
                    tc += cnt[chunk * k + c];
                }
                if (tc > 0) centroids[c] = {tz / static_cast<double>(tc), ts / static_cast<double>(tc)};
            }
            // reseed empty clusters at the farthest point from its centroid
            std::vector<long long> total_cnt(k, 0);
            for (int c = 0; c < k; ++c)
                for (std::size_t chunk = 0; chunk < kReductionChunks; ++chunk)
                    total_cnt[c] += cnt[chunk * k + c];
            for (int c = 0; c < k; ++c) {
                if (total_cnt[c] != 0) continue;
                double worst = -1.0;
                std::size_t worst_i = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = dist_pow(pts[i], centroids[assign[i]], p, w);
                    if (d > worst) {
                        worst = d;
                        worst_i = i;
                    }
                }
                centroids[c] = pts[worst_i];
                assign[worst_i] = c;
            }
        } else {
            std::vector<std::vector<double>> comp0(k), comp1(k);
            for (std::size_t i = 0; i < n; ++i) {
                comp0[assign[i]].push_back(pts[i][0]);
                comp1[assign[i]].push_back(pts[i][1]);
            }
            for (int c = 0; c < k; ++c) {
                if (comp0[c].empty()) {
                    double worst = -1.0;
                    std::size_t worst_i = 0;
                    for (std::size_t i = 0; i < n; ++i) {
                        double d = dist_pow(pts[i], centroids[assign[i]], p, w);
                        if (d > worst) {
                            worst = d;
                            worst_i = i;
                        }
                    }
                    centroids[c] = pts[worst_i];
                    assign[worst_i] = c;
                    continue;
                }
                centroids[c] = {component_center(comp0[c], p), component_center(comp1[c], p)};
            }
        }
    }

    return {std::move(centroids), iterations, distortion};
}

}  // namespace pdmpstop
