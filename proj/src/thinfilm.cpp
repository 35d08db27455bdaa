#include "photonlab/thinfilm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "photonlab/csv.hpp"
#include "photonlab/errors.hpp"
#include "photonlab/optim.hpp"

namespace photonlab::thinfilm {

MaterialTable MaterialTable::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "io", "cannot open " + path.string());
    MaterialTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            require(line == "material,wavelength_nm,n,k", "io",
                    "material table needs header material,wavelength_nm,n,k");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string name, wl, n, k;
        std::getline(ss, name, ',');
        std::getline(ss, wl, ',');
        std::getline(ss, n, ',');
        std::getline(ss, k, ',');
        require(!name.empty() && !wl.empty() && !n.empty(), "io",
                "bad material table row: " + line);
        try {
            table.add(name, std::stod(wl), std::stod(n), k.empty() ? 0.0 : std::stod(k));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail("io", "bad numeric field in material table row: " + line);
        }
    }
    require(header_seen, "io", "material table " + path.string() + " is empty");
    return table;
}

void MaterialTable::add(const std::string& material, double wavelength_nm, double n, double k) {
    require(std::isfinite(n) && std::isfinite(k), "invalid-material",
            "non-finite index for " + material);
    require(n > 0.0 && k >= 0.0, "invalid-material",
            "need n > 0 and k >= 0 for " + material);
    auto& pts = points_[material];
    pts.push_back({wavelength_nm, n, k});
    std::sort(pts.begin(), pts.end(),
              [](const Point& a, const Point& b) { return a.wavelength_nm < b.wavelength_nm; });
}

Complex MaterialTable::index(const std::string& material, double wavelength_nm) const {
    auto it = points_.find(material);
    require(it != points_.end(), "missing-material", "no index data for material " + material);
    const auto& pts = it->second;
    if (pts.size() == 1 || wavelength_nm <= pts.front().wavelength_nm)
        return {pts.front().n, pts.front().k};
    if (wavelength_nm >= pts.back().wavelength_nm) return {pts.back().n, pts.back().k};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (wavelength_nm <= pts[i].wavelength_nm) {
            const double f = (wavelength_nm - pts[i - 1].wavelength_nm) /
                             (pts[i].wavelength_nm - pts[i - 1].wavelength_nm);
            return {pts[i - 1].n + f * (pts[i].n - pts[i - 1].n),
                    pts[i - 1].k + f * (pts[i].k - pts[i - 1].k)};
        }
    }
    return {pts.back().n, pts.back().k};
}

Complex effective_index(Complex n_wire, Complex n_gap, double fill) {
    require(fill >= 0.0 && fill <= 1.0, "invalid-parameter", "fill factor must lie in [0, 1]");
    const Complex eps = fill * n_wire * n_wire + (1.0 - fill) * n_gap * n_gap;
    Complex n = std::sqrt(eps);
    if (n.imag() < 0.0) n = -n;
    return n;
}

namespace {

struct MeanderSpec {
    std::string wire, gap;
    double fill;
};

bool parse_meander(const std::string& material, MeanderSpec& out) {
    if (material.rfind("meander(", 0) != 0 || material.back() != ')') return false;
    const std::string inner = material.substr(8, material.size() - 9);
    std::stringstream ss(inner);
    std::string wire, gap, fill;
    std::getline(ss, wire, ',');
    std::getline(ss, gap, ',');
    std::getline(ss, fill, ',');
    require(!wire.empty() && !gap.empty() && !fill.empty(), "io",
            "meander spec needs meander(wire,gap,fill)");
    out = {wire, gap, std::stod(fill)};
    return true;
}

Complex lookup(const MaterialTable& table, const std::string& material, double wavelength_nm) {
    MeanderSpec spec;
    if (parse_meander(material, spec))
        return effective_index(table.index(spec.wire, wavelength_nm),
                               table.index(spec.gap, wavelength_nm), spec.fill);
    return table.index(material, wavelength_nm);
}

}  // namespace

LayerStack read_stack_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "io", "cannot open stack file " + path.string());
    LayerStack stack;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::stringstream ss(line);
        std::string word;
        if (!(ss >> word)) continue;
        if (word == "ambient") {
            require(static_cast<bool>(ss >> stack.ambient), "io",
                    "stack line " + std::to_string(lineno) + ": ambient needs a material");
        } else if (word == "substrate") {
            require(static_cast<bool>(ss >> stack.substrate), "io",
                    "stack line " + std::to_string(lineno) + ": substrate needs a material");
        } else if (word == "layer") {
            Layer l;
            require(static_cast<bool>(ss >> l.material >> l.thickness_nm), "io",
                    "stack line " + std::to_string(lineno) + ": layer needs material and thickness");
            require(l.thickness_nm >= 0.0, "io",
                    "stack line " + std::to_string(lineno) + ": negative thickness");
            stack.layers.push_back(std::move(l));
        } else {
            fail("io", "stack line " + std::to_string(lineno) + ": unknown directive " + word);
        }
    }
    require(!stack.substrate.empty(), "io", "stack file does not declare a substrate");
    return stack;
}

ResolvedStack resolve(const LayerStack& stack, const MaterialTable& table, double wavelength_nm) {
    require(wavelength_nm > 0.0, "invalid-parameter", "wavelength must be positive");
    ResolvedStack r;
    r.ambient = lookup(table, stack.ambient, wavelength_nm);
    r.substrate = lookup(table, stack.substrate, wavelength_nm);
    r.layers.reserve(stack.layers.size());
    for (const Layer& l : stack.layers)
        r.layers.push_back({lookup(table, l.material, wavelength_nm), l.thickness_nm});
    return r;
}

SpectrumPoint solve(const ResolvedStack& stack, double wavelength_nm) {
    require(wavelength_nm > 0.0, "invalid-parameter", "wavelength must be positive");
    // Characteristic matrices in the n - ik convention; the public index
    // convention is n + ik, so conjugate on entry.
    auto to_internal = [](Complex n) {
        require(std::isfinite(n.real()) && std::isfinite(n.imag()), "invalid-material",
                "non-finite refractive index");
        require(n.real() > 0.0, "invalid-material", "refractive index must have n > 0");
        return std::conj(n);
    };
    const Complex n0 = to_internal(stack.ambient);
    const Complex ns = to_internal(stack.substrate);

    Complex m11{1.0, 0.0}, m12{0.0, 0.0}, m21{0.0, 0.0}, m22{1.0, 0.0};
    for (const ResolvedLayer& l : stack.layers) {
        require(l.thickness_nm >= 0.0, "invalid-parameter", "negative layer thickness");
        const Complex n = to_internal(l.index);
        const Complex delta = 2.0 * std::numbers::pi * n * l.thickness_nm / wavelength_nm;
        const Complex c = std::cos(delta);
        const Complex s = std::sin(delta);
        const Complex a11 = c, a12 = Complex(0, 1) * s / n;
        const Complex a21 = Complex(0, 1) * n * s, a22 = c;
        const Complex t11 = m11 * a11 + m12 * a21;
        const Complex t12 = m11 * a12 + m12 * a22;
        const Complex t21 = m21 * a11 + m22 * a21;
        const Complex t22 = m21 * a12 + m22 * a22;
        m11 = t11; m12 = t12; m21 = t21; m22 = t22;
    }

    const Complex B = m11 + m12 * ns;
    const Complex C = m21 + m22 * ns;
    const Complex denom = n0 * B + C;
    const double R = std::norm((n0 * B - C) / denom);
    const double T = 4.0 * n0.real() * ns.real() / std::norm(denom);
    SpectrumPoint p;
    p.wavelength_nm = wavelength_nm;
    p.R = R;
    p.T = T;
    p.A = 1.0 - R - T;
    require(p.A >= -1e-9 && p.R <= 1.0 + 1e-9 && p.T <= 1.0 + 1e-9, "invalid-state",
            "nonphysical R/T/A; check index conventions");
    return p;
}

SpectrumPoint solve(const LayerStack& stack, const MaterialTable& table, double wavelength_nm) {
    return solve(resolve(stack, table, wavelength_nm), wavelength_nm);
}

std::vector<SpectrumPoint> spectrum(const LayerStack& stack, const MaterialTable& table,
                                    const std::vector<double>& wavelengths_nm) {
    std::vector<SpectrumPoint> out;
    out.reserve(wavelengths_nm.size());
    for (double wl : wavelengths_nm) out.push_back(solve(stack, table, wl));
    return out;
}

std::vector<double> wavelength_grid(double min_nm, double max_nm, int points) {
    require(points >= 1, "usage", "wavelength grid needs at least one point");
    require(min_nm > 0.0 && max_nm >= min_nm, "usage", "empty or invalid wavelength range");
    std::vector<double> grid(static_cast<std::size_t>(points));
    if (points == 1) {
        grid[0] = min_nm;
        return grid;
    }
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = min_nm + (max_nm - min_nm) * i / (points - 1.0);
    return grid;
}

OptimizeResult optimize_thicknesses(const LayerStack& stack, const MaterialTable& table,
                                    const std::vector<std::size_t>& free_layers,
                                    double target_wavelength_nm, const OptimizeOptions& opts) {
    require(!free_layers.empty(), "invalid-parameter", "optimizer needs at least one free layer");
    for (std::size_t idx : free_layers)
        require(idx < stack.layers.size(), "invalid-parameter", "free layer index out of range");
    require(opts.upper_nm > opts.lower_nm, "invalid-parameter", "bad thickness bounds");

    auto with_thicknesses = [&](const std::vector<double>& t) {
        LayerStack s = stack;
        for (std::size_t i = 0; i < free_layers.size(); ++i)
            s.layers[free_layers[i]].thickness_nm = t[i];
        return s;
    };
    auto cost = [&](const std::vector<double>& t) {
        return -solve(with_thicknesses(t), table, target_wavelength_nm).A;
    };

    std::vector<double> start;
    start.reserve(free_layers.size());
    for (std::size_t idx : free_layers)
        start.push_back(std::clamp(stack.layers[idx].thickness_nm, opts.lower_nm, opts.upper_nm));
    const double start_absorption = -cost(start);

    const std::vector<std::pair<double, double>> bounds(
        free_layers.size(), {opts.lower_nm, opts.upper_nm});
    optim::NelderMeadOptions nm;
    nm.max_iters = opts.max_iters;
    nm.x_tol = 1e-6;
    nm.f_tol = 1e-14;
    nm.initial_step = 0.15;

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(opts.lower_nm, opts.upper_nm);
    std::vector<double> best_x = start;
    double best_f = cost(start);
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        std::vector<double> x0 = start;
        if (r > 0)
            for (double& v : x0) v = uni(rng);
        const optim::NelderMeadResult res = optim::nelder_mead_bounded(cost, x0, bounds, nm);
        if (res.value < best_f) {
            best_f = res.value;
            best_x = res.x;
        }
    }

    OptimizeResult out;
    out.stack = with_thicknesses(best_x);
    out.absorption = -best_f;
    out.stagnant = out.absorption <= start_absorption + 1e-12;
    return out;
}

}  // namespace photonlab::thinfilm
