#include "owladv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace owladv {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2g", v);
    return buf;
}

}  // namespace

std::string render_stem_page(const std::string& title, const std::vector<StemPanel>& panels) {
    if (panels.empty()) throw std::invalid_argument("render_stem_page: no panels");

    constexpr double kPanelW = 360, kPanelH = 260, kMarginL = 50, kMarginR = 15, kMarginT = 60,
                     kMarginB = 40, kGap = 20;
    const double width = kMarginL + panels.size() * kPanelW + (panels.size() - 1) * kGap + kMarginR;
    const double height = kMarginT + kPanelH + kMarginB;

    double lo = 0.0, hi = 0.0;
    for (const auto& p : panels) {
        if (p.values.size() == 0) continue;
        lo = std::min(lo, p.values.minCoeff());
        hi = std::max(hi, p.values.maxCoeff());
    }
    if (hi - lo < 1e-12) {
        hi += 1.0;
        lo -= 1.0;
    }
    const double pad = 0.08 * (hi - lo);
    lo -= pad;
    hi += pad;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(width / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape(title) + "</text>\n";

    for (std::size_t k = 0; k < panels.size(); ++k) {
        const auto& panel = panels[k];
        const double x0 = kMarginL + k * (kPanelW + kGap);
        const double y0 = kMarginT;
        const auto count = std::max<Eigen::Index>(panel.values.size(), 1);
        auto sx = [&](double i) { return x0 + (i + 0.5) / count * kPanelW; };
        auto sy = [&](double v) { return y0 + (hi - v) / (hi - lo) * kPanelH; };

        svg += "<g>\n";
        svg += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(kPanelW) +
               "\" height=\"" + fmt(kPanelH) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + fmt(x0 + kPanelW / 2) + "\" y=\"" + fmt(y0 - 10) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
               escape(panel.title) + "</text>\n";
        svg += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(sy(0)) + "\" x2=\"" + fmt(x0 + kPanelW) +
               "\" y2=\"" + fmt(sy(0)) + "\" stroke=\"#999\" stroke-dasharray=\"3,3\"/>\n";
        if (k == 0) {
            for (double v : {lo + pad, 0.0, hi - pad}) {
                svg += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(sy(v) + 4) +
                       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
                       tick_label(v) + "</text>\n";
            }
        }
        svg += "<text x=\"" + fmt(x0 + kPanelW / 2) + "\" y=\"" + fmt(y0 + kPanelH + 28) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">feature index (1-" +
               std::to_string(panel.values.size()) + ")</text>\n";
        for (Eigen::Index i = 0; i < panel.values.size(); ++i) {
            const double v = panel.values(i);
            if (v == 0.0) continue;
            svg += "<line x1=\"" + fmt(sx(i)) + "\" y1=\"" + fmt(sy(0)) + "\" x2=\"" + fmt(sx(i)) +
                   "\" y2=\"" + fmt(sy(v)) + "\" stroke=\"#1f5fa8\"/>";
            svg += "<circle cx=\"" + fmt(sx(i)) + "\" cy=\"" + fmt(sy(v)) +
                   "\" r=\"2.2\" fill=\"#1f5fa8\"/>\n";
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace owladv
