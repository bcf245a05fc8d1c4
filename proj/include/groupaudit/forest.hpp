#ifndef GROUPAUDIT_FOREST_HPP
#define GROUPAUDIT_FOREST_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace groupaudit {

struct ForestRow {
    std::string unit;
    std::string measure;  // e.g. "solidarity" / "hostility"
    double or_ = 1.0;
    double ci_lo = 1.0;
    double ci_hi = 1.0;
};

struct ForestPlotSpec {
    std::string title;
    std::vector<ForestRow> rows;  // rendered top to bottom in order
};

// Deterministic SVG forest plot: log-scaled odds-ratio axis, dashed
// reference line at OR = 1, one marker + CI whisker per row.
std::string render_forest_svg(const ForestPlotSpec& spec);

void emit_forest_plot(const ForestPlotSpec& spec,
                      const std::filesystem::path& out_file);

}  // namespace groupaudit

#endif
