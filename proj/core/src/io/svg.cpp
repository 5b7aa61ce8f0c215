#include "panos/io/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace panos::io {

namespace {

constexpr const char* kPalette[] = {"#4472c4", "#ed7d31", "#70ad47",
                                    "#ffc000", "#9e480e", "#636363"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open svg for writing: " + path.string());
  return out;
}

void header(std::ofstream& out, int w, int h, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
}

}  // namespace

void write_grouped_bar_chart(const std::filesystem::path& path,
                             const std::string& title, const std::string& y_label,
                             const std::vector<std::string>& group_labels,
                             const std::vector<std::string>& series_labels,
                             const std::vector<std::vector<double>>& values) {
  if (values.size() != series_labels.size())
    throw std::invalid_argument("bar chart: series/labels mismatch");
  for (const auto& row : values)
    if (row.size() != group_labels.size())
      throw std::invalid_argument("bar chart: group count mismatch");

  const int width = 720, height = 420;
  const int x0 = 70, y0 = 40, plot_w = width - 110, plot_h = height - 110;
  double vmax = 0.0;
  for (const auto& row : values)
    for (double v : row) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;

  auto out = open(path);
  header(out, width, height, title);
  out << "<text x=\"16\" y=\"" << y0 + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
      << y0 + plot_h / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  // Axes and horizontal grid.
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\""
      << y0 + plot_h << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 + plot_h << "\" x2=\"" << x0 + plot_w
      << "\" y2=\"" << y0 + plot_h << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double frac = i / 4.0;
    const double y = y0 + plot_h * (1.0 - frac);
    out << "<line x1=\"" << x0 << "\" y1=\"" << fmt(y) << "\" x2=\"" << x0 + plot_w
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << x0 - 6 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(vmax * frac) << "</text>\n";
  }

  const std::size_t n_groups = group_labels.size();
  const std::size_t n_series = series_labels.size();
  const double group_w = static_cast<double>(plot_w) / static_cast<double>(n_groups);
  const double bar_w = group_w * 0.8 / static_cast<double>(n_series);
  for (std::size_t g = 0; g < n_groups; ++g) {
    const double gx = x0 + group_w * static_cast<double>(g) + group_w * 0.1;
    for (std::size_t s = 0; s < n_series; ++s) {
      const double v = values[s][g];
      const double bh = plot_h * (v / vmax);
      const double bx = gx + bar_w * static_cast<double>(s);
      out << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(y0 + plot_h - bh)
          << "\" width=\"" << fmt(bar_w * 0.92) << "\" height=\"" << fmt(bh)
          << "\" fill=\"" << kPalette[s % 6] << "\"/>\n";
    }
    out << "<text x=\"" << fmt(x0 + group_w * (static_cast<double>(g) + 0.5))
        << "\" y=\"" << y0 + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << group_labels[g] << "</text>\n";
  }
  // Legend.
  for (std::size_t s = 0; s < n_series; ++s) {
    const int ly = y0 + plot_h + 40;
    const double lx = x0 + 140.0 * static_cast<double>(s);
    out << "<rect x=\"" << fmt(lx) << "\" y=\"" << ly - 10
        << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[s % 6] << "\"/>\n"
        << "<text x=\"" << fmt(lx + 18) << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series_labels[s]
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("svg write failed: " + path.string());
}

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& y_label,
                      const std::vector<std::string>& series_labels,
                      const std::vector<std::vector<double>>& series) {
  if (series.size() != series_labels.size())
    throw std::invalid_argument("line chart: series/labels mismatch");
  std::size_t n = 0;
  double vmax = 0.0;
  for (const auto& row : series) {
    n = std::max(n, row.size());
    for (double v : row) vmax = std::max(vmax, v);
  }
  if (n < 2) throw std::invalid_argument("line chart: need >= 2 points");
  if (vmax <= 0.0) vmax = 1.0;

  const int width = 720, height = 420;
  const int x0 = 70, y0 = 40, plot_w = width - 110, plot_h = height - 110;
  auto out = open(path);
  header(out, width, height, title);
  out << "<text x=\"16\" y=\"" << y0 + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
      << y0 + plot_h / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\""
      << y0 + plot_h << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 + plot_h << "\" x2=\"" << x0 + plot_w
      << "\" y2=\"" << y0 + plot_h << "\" stroke=\"black\"/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 6]
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].size(); ++i) {
      const double x =
          x0 + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
      const double y = y0 + plot_h * (1.0 - series[s][i] / vmax);
      out << fmt(x) << "," << fmt(y) << " ";
    }
    out << "\"/>\n";
    const int ly = y0 + plot_h + 40;
    const double lx = x0 + 140.0 * static_cast<double>(s);
    out << "<rect x=\"" << fmt(lx) << "\" y=\"" << ly - 10
        << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[s % 6] << "\"/>\n"
        << "<text x=\"" << fmt(lx + 18) << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series_labels[s]
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("svg write failed: " + path.string());
}

}  // namespace panos::io
