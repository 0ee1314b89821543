#include "report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pdmpstop {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 460;
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 20;
constexpr int kMarginBottom = 50;
constexpr int kSegmentSamples = 32;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string trajectories_to_svg(const PdmpModel& model, const std::vector<Trajectory>& trajs) {
    double t_max = 1.0;
    for (const Trajectory& tr : trajs)
        if (!tr.t.empty()) t_max = std::max(t_max, tr.t.back());
    double y_lo = model.domain.first, y_hi = model.domain.second;
    if (!(y_hi > y_lo)) {
        y_lo = 0.0;
        y_hi = 1.0;
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double t) { return kMarginLeft + plot_w * (t / t_max); };
    auto sy = [&](double x) { return kMarginTop + plot_h * (1.0 - (x - y_lo) / (y_hi - y_lo)); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) + "\" height=\"" +
           std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
           std::to_string(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    svg += "<g stroke=\"#333\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(y_lo)) + "\" x2=\"" + num(sx(t_max)) +
           "\" y2=\"" + num(sy(y_lo)) + "\"/>\n";
    svg += "<line x1=\"" + num(sx(0)) + "\" y1=\"" + num(sy(y_lo)) + "\" x2=\"" + num(sx(0)) + "\" y2=\"" +
           num(sy(y_hi)) + "\"/>\n";
    svg += "</g>\n";

    // ticks and labels
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    const int n_xticks = 6;
    for (int i = 0; i <= n_xticks; ++i) {
        double t = t_max * i / n_xticks;
        svg += "<line stroke=\"#333\" x1=\"" + num(sx(t)) + "\" y1=\"" + num(sy(y_lo)) + "\" x2=\"" +
               num(sx(t)) + "\" y2=\"" + num(sy(y_lo) + 5) + "\"/>\n";
        svg += "<text text-anchor=\"middle\" x=\"" + num(sx(t)) + "\" y=\"" + num(sy(y_lo) + 20) + "\">" +
               num(t) + "</text>\n";
    }
    const int n_yticks = 5;
    for (int i = 0; i <= n_yticks; ++i) {
        double x = y_lo + (y_hi - y_lo) * i / n_yticks;
        svg += "<line stroke=\"#333\" x1=\"" + num(sx(0) - 5) + "\" y1=\"" + num(sy(x)) + "\" x2=\"" +
               num(sx(0)) + "\" y2=\"" + num(sy(x)) + "\"/>\n";
        svg += "<text text-anchor=\"end\" x=\"" + num(sx(0) - 8) + "\" y=\"" + num(sy(x) + 4) + "\">" +
               num(x) + "</text>\n";
    }
    svg += "<text text-anchor=\"middle\" x=\"" + num(kMarginLeft + plot_w / 2) + "\" y=\"" +
           num(kHeight - 10.0) + "\">t</text>\n";
    svg += "<text text-anchor=\"middle\" transform=\"rotate(-90 15 " + num(kMarginTop + plot_h / 2) +
           ")\" x=\"15\" y=\"" + num(kMarginTop + plot_h / 2) + "\">X(t)</text>\n";
    svg += "</g>\n";

    for (std::size_t id = 0; id < trajs.size(); ++id) {
        const Trajectory& tr = trajs[id];
        const char* color = kPalette[id % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string d;
        for (std::size_t k = 0; k + 1 < tr.z.size(); ++k) {
            double z = tr.z[k], t0 = tr.t[k], slen = tr.s[k + 1];
            for (int i = 0; i <= kSegmentSamples; ++i) {
                double u = slen * i / kSegmentSamples;
                double x = model.flow(z, u);
                d += (i == 0) ? (k == 0 ? "M" : " M") : " L";
                d += num(sx(t0 + u));
                d += ',';
                d += num(sy(x));
            }
        }
        if (!d.empty())
            svg += "<path fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" d=\"" +
                   d + "\"/>\n";
        for (std::size_t k = 1; k < tr.z.size(); ++k) {
            svg += "<circle r=\"2.5\" fill=\"" + std::string(color) + "\" cx=\"" + num(sx(tr.t[k])) +
                   "\" cy=\"" + num(sy(tr.z[k])) + "\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace pdmpstop
