#ifndef CAUSALAB_PLOT_HPP
#define CAUSALAB_PLOT_HPP

#include <string>

#include "causalab/run.hpp"

namespace causalab::plot {

/// Renders a self-contained SVG (no external assets, deterministic bytes).
/// kind: "line" | "loglog" | "heatmap". Column selection: x_col/y_col name the
/// abscissa and ordinate (heatmap uses x_col/y_col/value_col); empty strings
/// pick the first columns of the table.
std::string render_svg(const run::ResultTable& table, const std::string& kind,
                       const std::string& x_col = "", const std::string& y_col = "",
                       const std::string& value_col = "");

void write_plot(const run::ResultTable& table, const std::string& kind,
                const std::string& path);

}  // namespace causalab::plot

#endif
