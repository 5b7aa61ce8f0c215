#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace panos::io {

/// Grouped bar chart written as plain SVG (no plotting dependency).
/// values[series][group]; output bytes are deterministic.
void write_grouped_bar_chart(const std::filesystem::path& path,
                             const std::string& title, const std::string& y_label,
                             const std::vector<std::string>& group_labels,
                             const std::vector<std::string>& series_labels,
                             const std::vector<std::vector<double>>& values);

/// Simple multi-series line chart (x = index), used for variance profiles.
void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& y_label,
                      const std::vector<std::string>& series_labels,
                      const std::vector<std::vector<double>>& series);

}  // namespace panos::io
