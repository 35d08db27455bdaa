#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace photonlab::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal line plot (axes, ticks, legend). CSV stays the canonical output;
/// this exists for quick visual checks.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series, bool log_y = false);

}  // namespace photonlab::svg
