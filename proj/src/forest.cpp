#include "groupaudit/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "groupaudit/errors.hpp"

namespace groupaudit {

namespace {

// fixed formatting so reruns emit identical bytes
std::string fmt(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

constexpr double kWidth = 640.0;
constexpr double kRowHeight = 28.0;
constexpr double kTop = 56.0;
constexpr double kPlotLeft = 220.0;
constexpr double kPlotRight = 600.0;

}  // namespace

std::string render_forest_svg(const ForestPlotSpec& spec) {
    if (spec.rows.empty()) throw ConfigError("render_forest_svg: no rows");
    for (const auto& r : spec.rows) {
        if (!(r.ci_lo <= r.or_ && r.or_ <= r.ci_hi) || r.ci_lo <= 0)
            throw ConfigError("render_forest_svg: bad interval for " + r.unit);
    }

    double lo = 1.0, hi = 1.0;
    for (const auto& r : spec.rows) {
        lo = std::min(lo, r.ci_lo);
        hi = std::max(hi, r.ci_hi);
    }
    const double log_lo = std::log(lo) - 0.1;
    const double log_hi = std::log(hi) + 0.1;
    auto x_of = [&](double or_value) {
        return kPlotLeft + (std::log(or_value) - log_lo) / (log_hi - log_lo) *
                               (kPlotRight - kPlotLeft);
    };

    const double height = kTop + spec.rows.size() * kRowHeight + 48.0;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth, 0) +
           "\" height=\"" + fmt(height, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kWidth / 2, 0) +
           "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + spec.title +
           "</text>\n";

    const double axis_y = kTop + spec.rows.size() * kRowHeight + 8.0;
    svg += "<line x1=\"" + fmt(x_of(1.0)) + "\" y1=\"" + fmt(kTop - 8.0) +
           "\" x2=\"" + fmt(x_of(1.0)) + "\" y2=\"" + fmt(axis_y) +
           "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";

    for (std::size_t i = 0; i < spec.rows.size(); ++i) {
        const auto& r = spec.rows[i];
        const double y = kTop + i * kRowHeight + kRowHeight / 2;
        svg += "<text x=\"12\" y=\"" + fmt(y + 4.0) + "\">" + r.unit +
               " (" + r.measure + ")</text>\n";
        svg += "<line x1=\"" + fmt(x_of(r.ci_lo)) + "\" y1=\"" + fmt(y) +
               "\" x2=\"" + fmt(x_of(r.ci_hi)) + "\" y2=\"" + fmt(y) +
               "\" stroke=\"black\"/>\n";
        svg += "<rect x=\"" + fmt(x_of(r.or_) - 4.0) + "\" y=\"" + fmt(y - 4.0) +
               "\" width=\"8\" height=\"8\" fill=\"black\"/>\n";
        svg += "<text x=\"" + fmt(kPlotRight + 6.0) + "\" y=\"" + fmt(y + 4.0) +
               "\" font-size=\"11\">" + fmt(r.or_) + " [" + fmt(r.ci_lo) + ", " +
               fmt(r.ci_hi) + "]</text>\n";
    }

    svg += "<line x1=\"" + fmt(kPlotLeft) + "\" y1=\"" + fmt(axis_y) + "\" x2=\"" +
           fmt(kPlotRight) + "\" y2=\"" + fmt(axis_y) + "\" stroke=\"black\"/>\n";
    for (double tick : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        if (std::log(tick) < log_lo || std::log(tick) > log_hi) continue;
        const double x = x_of(tick);
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(axis_y) + "\" x2=\"" +
               fmt(x) + "\" y2=\"" + fmt(axis_y + 5.0) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(axis_y + 18.0) +
               "\" text-anchor=\"middle\" font-size=\"11\">" + fmt(tick) +
               "</text>\n";
    }
    svg += "<text x=\"" + fmt((kPlotLeft + kPlotRight) / 2) + "\" y=\"" +
           fmt(axis_y + 34.0) +
           "\" text-anchor=\"middle\">odds ratio (log scale)</text>\n";
    svg += "</svg>\n";
    return svg;
}

void emit_forest_plot(const ForestPlotSpec& spec,
                      const std::filesystem::path& out_file) {
    std::ofstream f(out_file, std::ios::binary);
    if (!f) throw ConfigError("emit_forest_plot: cannot write " + out_file.string());
    f << render_forest_svg(spec);
}

}  // namespace groupaudit
