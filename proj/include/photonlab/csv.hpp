#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace photonlab::csv {

/// Buffered CSV writer; the file appears atomically (write temp, rename).
class Writer {
public:
    explicit Writer(std::filesystem::path path);

    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);

    /// Flushes to <path>.tmp and renames onto path.
    void commit();

private:
    std::filesystem::path path_;
    std::string buffer_;
    int columns_ = 0;
    bool committed_ = false;
};

struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Table read(const std::filesystem::path& path);

/// Atomic write of arbitrary text (used for sidecar metadata and reports).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

std::string format_double(double v);

}  // namespace photonlab::csv
