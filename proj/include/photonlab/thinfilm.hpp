#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace photonlab::thinfilm {

using Complex = std::complex<double>;

/// Per-material dispersion table (wavelength -> n + ik), linearly
/// interpolated, constant extrapolation at the ends. Loaded from a
/// `material,wavelength_nm,n,k` CSV.
class MaterialTable {
public:
    static MaterialTable from_csv(const std::filesystem::path& path);

    void add(const std::string& material, double wavelength_nm, double n, double k);

    /// Index convention: k >= 0 means absorption.
    Complex index(const std::string& material, double wavelength_nm) const;

    bool has(const std::string& material) const { return points_.count(material) > 0; }

private:
    struct Point {
        double wavelength_nm, n, k;
    };
    std::map<std::string, std::vector<Point>> points_;
};

/// A film in the stack. `material` is either a table name or an effective-
/// medium meander spec "meander(wire,gap,fill)".
struct Layer {
    std::string material;
    double thickness_nm = 0.0;
};

/// Layers ordered from the incidence side towards the substrate.
struct LayerStack {
    std::vector<Layer> layers;
    std::string ambient = "air";
    std::string substrate;
};

/// Layer with a fixed complex index (n + ik, k >= 0); the numeric core works
/// on these and property tests construct them directly.
struct ResolvedLayer {
    Complex index;
    double thickness_nm = 0.0;
};

struct ResolvedStack {
    std::vector<ResolvedLayer> layers;
    Complex ambient{1.0, 0.0};
    Complex substrate{1.0, 0.0};
};

struct SpectrumPoint {
    double wavelength_nm = 0.0;
    double R = 0.0;
    double T = 0.0;
    double A = 0.0;
};

/// Fill-weighted permittivity average of wire and gap for the TE-like
/// polarization along the wires.
Complex effective_index(Complex n_wire, Complex n_gap, double fill);

/// Parses the stack description file (ambient/substrate/layer lines,
/// incidence side first).
LayerStack read_stack_file(const std::filesystem::path& path);

ResolvedStack resolve(const LayerStack& stack, const MaterialTable& table, double wavelength_nm);

/// Characteristic-matrix solve at normal incidence. R and T are intensity
/// coefficients (T Poynting-corrected for the substrate index); A = 1 - R - T.
SpectrumPoint solve(const ResolvedStack& stack, double wavelength_nm);
SpectrumPoint solve(const LayerStack& stack, const MaterialTable& table, double wavelength_nm);

std::vector<SpectrumPoint> spectrum(const LayerStack& stack, const MaterialTable& table,
                                    const std::vector<double>& wavelengths_nm);

std::vector<double> wavelength_grid(double min_nm, double max_nm, int points);

struct OptimizeOptions {
    double lower_nm = 0.0;
    double upper_nm = 400.0;
    int restarts = 8;
    std::uint64_t seed = 1;
    int max_iters = 2000;
};

struct OptimizeResult {
    LayerStack stack;
    double absorption = 0.0;
    bool stagnant = false;
};

/// Maximizes absorption at the target wavelength over the free layer
/// thicknesses with a seeded multi-start simplex search.
OptimizeResult optimize_thicknesses(const LayerStack& stack, const MaterialTable& table,
                                    const std::vector<std::size_t>& free_layers,
                                    double target_wavelength_nm,
                                    const OptimizeOptions& opts = {});

}  // namespace photonlab::thinfilm
