#include "bge/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "bge/core.hpp"

namespace bge {

namespace {

constexpr int kWidth = 900;
constexpr int kPanelHeight = 220;
constexpr int kMarginLeft = 60, kMarginRight = 20, kMarginTop = 30, kMarginBottom = 25;

std::string polyline(const Vec& y, int offset_x, double x_scale, double y_lo, double y_hi,
                     int top, const char* style) {
    std::string pts;
    char buf[64];
    const double span = y_hi - y_lo > 1e-12 ? y_hi - y_lo : 1.0;
    for (size_t i = 0; i < y.size(); ++i) {
        const double px = kMarginLeft + (offset_x + static_cast<double>(i)) * x_scale;
        const double py = top + kPanelHeight - kMarginBottom -
                          (y[i] - y_lo) / span * (kPanelHeight - kMarginTop - kMarginBottom);
        std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px, py);
        pts += buf;
    }
    return "<polyline fill=\"none\" " + std::string(style) + " points=\"" + pts + "\"/>\n";
}

}  // namespace

void write_forecast_svg(const std::string& path, const std::vector<ForecastTrace>& traces) {
    if (traces.empty()) throw Error("empty-input", "no traces to plot");
    std::ofstream f(path);
    if (!f) throw Error("io-error", "cannot open " + path + " for writing");

    const int height = static_cast<int>(traces.size()) * kPanelHeight;
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << height << "\" viewBox=\"0 0 " << kWidth << " " << height << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (size_t p = 0; p < traces.size(); ++p) {
        const ForecastTrace& tr = traces[p];
        const int top = static_cast<int>(p) * kPanelHeight;
        const size_t total = tr.input.size() + tr.target.size();
        const double x_scale =
            static_cast<double>(kWidth - kMarginLeft - kMarginRight) / std::max<size_t>(total, 1);

        double lo = 1e300, hi = -1e300;
        for (const Vec* v : {&tr.input, &tr.target, &tr.prediction})
            for (double y : *v) {
                lo = std::min(lo, y);
                hi = std::max(hi, y);
            }
        if (!(lo < hi)) {
            lo -= 1.0;
            hi += 1.0;
        }

        const double split_x = kMarginLeft + tr.input.size() * x_scale;
        f << "<rect x=\"" << split_x << "\" y=\"" << top + kMarginTop << "\" width=\""
          << kWidth - kMarginRight - split_x << "\" height=\""
          << kPanelHeight - kMarginTop - kMarginBottom
          << "\" fill=\"#f4f4f4\"/>\n";
        f << "<text x=\"" << kMarginLeft << "\" y=\"" << top + 20
          << "\" font-family=\"sans-serif\" font-size=\"14\">" << tr.title << "</text>\n";
        char axis[160];
        std::snprintf(axis, sizeof axis,
                      "<text x=\"8\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\">%.3g</text>\n",
                      top + kMarginTop + 10, hi);
        f << axis;
        std::snprintf(axis, sizeof axis,
                      "<text x=\"8\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\">%.3g</text>\n",
                      top + kPanelHeight - kMarginBottom, lo);
        f << axis;

        f << polyline(tr.input, 0, x_scale, lo, hi, top,
                      "stroke=\"#888888\" stroke-width=\"1.2\"");
        f << polyline(tr.target, static_cast<int>(tr.input.size()), x_scale, lo, hi, top,
                      "stroke=\"#888888\" stroke-width=\"1.2\" stroke-dasharray=\"5,4\"");
        f << polyline(tr.prediction, static_cast<int>(tr.input.size()), x_scale, lo, hi, top,
                      "stroke=\"#c0392b\" stroke-width=\"1.5\"");
    }
    f << "</svg>\n";
}

}  // namespace bge
