#include "causalab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace causalab::plot {

namespace {

constexpr double kWidth = 720, kHeight = 480, kMargin = 64;

int column_index(const run::ResultTable& t, const std::string& name, int fallback) {
  if (name.empty()) {
    if (fallback >= int(t.columns.size()))
      throw MissingColumn("plot: table has too few columns");
    return fallback;
  }
  for (size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return int(i);
  throw MissingColumn("plot: no column named '" + name + "'");
}

std::string fmt(double v) {
  // fixed short decimal keeps coordinates deterministic and compact
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Axis {
  double lo, hi;
  double to_px(double v, double px_lo, double px_hi) const {
    const double span = (hi > lo) ? (hi - lo) : 1.0;
    return px_lo + (v - lo) / span * (px_hi - px_lo);
  }
};

std::string axis_labels(const Axis& ax, bool horizontal, bool log_scale) {
  std::ostringstream out;
  for (int i = 0; i <= 4; ++i) {
    const double v = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    const double px = horizontal
                          ? ax.to_px(v, kMargin, kWidth - kMargin)
                          : ax.to_px(v, kHeight - kMargin, kMargin);
    const double shown = log_scale ? std::pow(10.0, v) : v;
    char label[40];
    std::snprintf(label, sizeof(label), log_scale ? "%.3g" : "%.4g", shown);
    if (horizontal) {
      out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kHeight - kMargin + 20)
          << "\" font-size=\"11\" text-anchor=\"middle\">" << label << "</text>\n";
    } else {
      out << "<text x=\"" << fmt(kMargin - 8) << "\" y=\"" << fmt(px + 4)
          << "\" font-size=\"11\" text-anchor=\"end\">" << label << "</text>\n";
    }
  }
  return out.str();
}

std::string svg_header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\">\n<rect width=\"720\" height=\"480\" "
         "fill=\"white\"/>\n";
}

std::string frame() {
  std::ostringstream out;
  out << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin) << "\" width=\""
      << fmt(kWidth - 2 * kMargin) << "\" height=\"" << fmt(kHeight - 2 * kMargin)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  return out.str();
}

std::string xy_plot(const run::ResultTable& t, int xi, int yi, bool log_scale) {
  if (t.rows.empty()) throw MissingColumn("plot: empty table");
  std::vector<double> xs, ys;
  for (const auto& row : t.rows) {
    double x = row[xi], y = row[yi];
    if (log_scale) {
      if (!(x > 0) || !(y > 0))
        throw ValidationError("plot: loglog requires positive data");
      x = std::log10(x);
      y = std::log10(y);
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  Axis ax{*std::min_element(xs.begin(), xs.end()),
          *std::max_element(xs.begin(), xs.end())};
  Axis ay{*std::min_element(ys.begin(), ys.end()),
          *std::max_element(ys.begin(), ys.end())};
  if (ax.hi == ax.lo) ax.hi = ax.lo + 1;
  if (ay.hi == ay.lo) ay.hi = ay.lo + 1;

  std::ostringstream out;
  out << svg_header() << frame();
  out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    out << fmt(ax.to_px(xs[i], kMargin, kWidth - kMargin)) << ","
        << fmt(ay.to_px(ys[i], kHeight - kMargin, kMargin)) << " ";
  }
  out << "\"/>\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    out << "<circle cx=\"" << fmt(ax.to_px(xs[i], kMargin, kWidth - kMargin))
        << "\" cy=\"" << fmt(ay.to_px(ys[i], kHeight - kMargin, kMargin))
        << "\" r=\"2.5\" fill=\"#1f4e9c\"/>\n";
  }
  out << axis_labels(ax, true, log_scale) << axis_labels(ay, false, log_scale);
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"" << fmt(kHeight - 16)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << t.columns[xi]
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt(kHeight / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt(kHeight / 2) << ")\">" << t.columns[yi] << "</text>\n";
  if (log_scale && xs.size() >= 2) {
    // least-squares slope annotation in log-log coordinates
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    char label[64];
    std::snprintf(label, sizeof(label), "slope = %.4f", slope);
    out << "<text x=\"" << fmt(kWidth - kMargin - 8) << "\" y=\""
        << fmt(kMargin + 18) << "\" font-size=\"13\" text-anchor=\"end\">" << label
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string heatmap(const run::ResultTable& t, int xi, int yi, int vi) {
  if (t.rows.empty()) throw MissingColumn("plot: empty table");
  std::set<double> xset, yset;
  for (const auto& row : t.rows) {
    xset.insert(row[xi]);
    yset.insert(row[yi]);
  }
  std::vector<double> xs(xset.begin(), xset.end()), ys(yset.begin(), yset.end());
  double vmin = t.rows[0][vi], vmax = vmin;
  for (const auto& row : t.rows) {
    vmin = std::min(vmin, row[vi]);
    vmax = std::max(vmax, row[vi]);
  }
  if (vmax == vmin) vmax = vmin + 1;
  const double cw = (kWidth - 2 * kMargin) / xs.size();
  const double ch = (kHeight - 2 * kMargin) / ys.size();
  auto idx_of = [](const std::vector<double>& v, double x) {
    return int(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  std::ostringstream out;
  out << svg_header();
  for (const auto& row : t.rows) {
    const int ix = idx_of(xs, row[xi]);
    const int iy = idx_of(ys, row[yi]);
    const double u = (row[vi] - vmin) / (vmax - vmin);
    const int r = int(std::lround(255 * u));
    const int b = int(std::lround(255 * (1.0 - u)));
    out << "<rect x=\"" << fmt(kMargin + ix * cw) << "\" y=\""
        << fmt(kHeight - kMargin - (iy + 1) * ch) << "\" width=\"" << fmt(cw)
        << "\" height=\"" << fmt(ch) << "\" fill=\"rgb(" << r << ",60," << b
        << ")\"/>\n";
  }
  out << frame();
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"" << fmt(kHeight - 16)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << t.columns[xi]
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt(kHeight / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt(kHeight / 2) << ")\">" << t.columns[yi] << "</text>\n";
  char label[96];
  std::snprintf(label, sizeof(label), "%s in [%.4g, %.4g]", t.columns[vi].c_str(),
                vmin, vmax);
  out << "<text x=\"" << fmt(kWidth - kMargin) << "\" y=\"" << fmt(kMargin - 10)
      << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string render_svg(const run::ResultTable& table, const std::string& kind,
                       const std::string& x_col, const std::string& y_col,
                       const std::string& value_col) {
  table.validate();
  if (kind == "line" || kind == "loglog") {
    const int xi = column_index(table, x_col, 0);
    const int yi = column_index(table, y_col, 1);
    return xy_plot(table, xi, yi, kind == "loglog");
  }
  if (kind == "heatmap") {
    const int xi = column_index(table, x_col, 0);
    const int yi = column_index(table, y_col, 1);
    const int vi = column_index(table, value_col, 2);
    return heatmap(table, xi, yi, vi);
  }
  throw ValidationError("plot: unknown kind '" + kind + "'");
}

void write_plot(const run::ResultTable& table, const std::string& kind,
                const std::string& path) {
  run::write_file(path, render_svg(table, kind, "", "", ""));
}

}  // namespace causalab::plot
