#include "photonlab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "photonlab/errors.hpp"

namespace photonlab::csv {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Writer::Writer(std::filesystem::path path) : path_(std::move(path)) {}

void Writer::comment(const std::string& text) { buffer_ += "# " + text + "\n"; }

void Writer::header(const std::vector<std::string>& columns) {
    columns_ = static_cast<int>(columns.size());
    std::string line;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) line += ',';
        line += columns[i];
    }
    buffer_ += line + "\n";
}

void Writer::row(const std::vector<double>& values) {
    require(columns_ == 0 || static_cast<int>(values.size()) == columns_, "io",
            "csv row width differs from header");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    buffer_ += line + "\n";
}

void Writer::raw_row(const std::string& line) { buffer_ += line + "\n"; }

void Writer::commit() {
    require(!committed_, "io", "csv writer committed twice");
    write_text_atomic(path_, buffer_);
    committed_ = true;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), "io", "cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        require(out.good(), "io", "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "io", "cannot open " + path.string());
    Table t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            t.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!have_header) {
            t.columns = fields;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const std::string& f : fields) {
            // strtod instead of stod: subnormal values must parse, not throw
            const char* begin = f.c_str();
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            require(end == begin + f.size() && !f.empty(), "io",
                    "non-numeric csv field '" + f + "' in " + path.string());
            row.push_back(v);
        }
        require(row.size() == t.columns.size(), "io", "ragged csv row in " + path.string());
        t.rows.push_back(std::move(row));
    }
    require(have_header, "io", "csv file " + path.string() + " has no header");
    return t;
}

}  // namespace photonlab::csv
