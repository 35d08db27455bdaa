#include "photonlab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "photonlab/errors.hpp"

namespace photonlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quote = !in_quote;
        if (!in_quote && (line[i] == '#' || line[i] == ';')) return line.substr(0, i);
    }
    return line;
}

}  // namespace

Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "io", "cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path.has_parent_path() ? path.parent_path() : ".");
}

Config Config::from_string(const std::string& text, const std::filesystem::path& base_dir) {
    Config cfg;
    cfg.base_dir_ = base_dir;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', "io",
                    "config line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            require(!section.empty(), "io",
                    "config line " + std::to_string(lineno) + ": empty section name");
            cfg.sections_[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        require(eq != std::string::npos, "io",
                "config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        require(!key.empty(), "io", "config line " + std::to_string(lineno) + ": empty key");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    require(s != sections_.end() && s->second.count(key) > 0, "io",
            "missing config key [" + section + "] " + key);
    return s->second.at(key);
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get_string(section, key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        require(pos == v.size(), "io", "bad numeric value for [" + section + "] " + key);
        return d;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail("io", "bad numeric value for [" + section + "] " + key);
    }
}

long Config::get_int(const std::string& section, const std::string& key) const {
    const double d = get_double(section, key);
    const long l = static_cast<long>(d);
    require(static_cast<double>(l) == d, "io", "expected integer for [" + section + "] " + key);
    return l;
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
    const std::string v = get_string(section, key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail("io", "expected boolean for [" + section + "] " + key);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}
double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}
long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}
bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    return has(section, key) ? get_bool(section, key) : fallback;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::filesystem::path Config::resolve_path(const std::string& value) const {
    std::filesystem::path p(value);
    if (p.is_absolute()) return p;
    return base_dir_ / p;
}

std::uint64_t Config::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0x1f;
        h *= 1099511628211ull;
    };
    for (const auto& [sec, kv] : sections_) {
        mix(sec);
        for (const auto& [k, v] : kv) {
            mix(k);
            mix(v);
        }
    }
    return h;
}

std::string Config::hash_hex() const {
    std::ostringstream out;
    out << std::hex << hash();
    return out.str();
}

}  // namespace photonlab
