#include "photonlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "photonlab/csv.hpp"
#include "photonlab/errors.hpp"

namespace photonlab::svg {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v) { return csv::format_double(v); }

}  // namespace

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series, bool log_y) {
    require(!series.empty(), "invalid-parameter", "plot needs at least one series");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series& s : series) {
        require(s.x.size() == s.y.size() && !s.x.empty(), "invalid-parameter",
                "series needs matching nonempty x/y");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = log_y ? std::log10(std::max(s.y[i], 1e-300)) : s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;

    auto px = [&](double x) {
        return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
    };
    auto py = [&](double yv) {
        const double y = log_y ? std::log10(std::max(yv, 1e-300)) : yv;
        return kHeight - kBottom - (y - ymin) / (ymax - ymin) * (kHeight - kTop - kBottom);
    };

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
        << kHeight << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16'>"
        << title << "</text>\n";

    // axes
    out << "<line x1='" << kLeft << "' y1='" << kHeight - kBottom << "' x2='" << kWidth - kRight
        << "' y2='" << kHeight - kBottom << "' stroke='black'/>\n";
    out << "<line x1='" << kLeft << "' y1='" << kTop << "' x2='" << kLeft << "' y2='"
        << kHeight - kBottom << "' stroke='black'/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 5.0;
        const double fy = ymin + (ymax - ymin) * t / 5.0;
        out << "<text x='" << px(fx) << "' y='" << kHeight - kBottom + 18
            << "' text-anchor='middle' font-size='11'>" << num(fx) << "</text>\n";
        const std::string ylab = log_y ? "1e" + num(fy) : num(fy);
        out << "<text x='" << kLeft - 6 << "' y='"
            << kHeight - kBottom - (kHeight - kTop - kBottom) * t / 5.0 + 4
            << "' text-anchor='end' font-size='11'>" << ylab << "</text>\n";
    }
    out << "<text x='" << kWidth / 2 << "' y='" << kHeight - 12
        << "' text-anchor='middle' font-size='13'>" << x_label << "</text>\n";
    out << "<text x='16' y='" << kHeight / 2
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 " << kHeight / 2
        << ")'>" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        out << "<polyline fill='none' stroke='" << kColors[si % 5] << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        out << "'/>\n";
        out << "<text x='" << kWidth - kRight - 8 << "' y='" << kTop + 16 * (si + 1)
            << "' text-anchor='end' font-size='12' fill='" << kColors[si % 5] << "'>" << s.name
            << "</text>\n";
    }
    out << "</svg>\n";
    csv::write_text_atomic(path, out.str());
}

}  // namespace photonlab::svg
