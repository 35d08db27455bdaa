#include "photonlab/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>

#include "photonlab/csv.hpp"
#include "photonlab/errors.hpp"

namespace photonlab::homodyne {

void HomodyneChain::validate() const {
    for (double v : {visibility, photodiode_qe, electronic_noise_equiv_loss, propagation_loss})
        require(v >= 0.0 && v <= 1.0, "invalid-parameter",
                "homodyne chain values must lie in [0, 1]");
}

HomodyneChain HomodyneChain::from_config(const Config& cfg) {
    HomodyneChain c;
    c.visibility = cfg.get_double("homodyne", "visibility", c.visibility);
    c.photodiode_qe = cfg.get_double("homodyne", "photodiode_qe", c.photodiode_qe);
    c.electronic_noise_equiv_loss =
        cfg.get_double("homodyne", "electronic_noise_equiv_loss", c.electronic_noise_equiv_loss);
    c.propagation_loss = cfg.get_double("homodyne", "propagation_loss", c.propagation_loss);
    c.validate();
    return c;
}

double effective_efficiency(const HomodyneChain& chain) {
    chain.validate();
    return chain.visibility * chain.visibility * chain.photodiode_qe *
           (1.0 - chain.electronic_noise_equiv_loss) * (1.0 - chain.propagation_loss);
}

void QuadratureBatch::validate() const {
    require(!points.empty(), "invalid-parameter", "empty quadrature batch");
    for (const QuadraturePoint& p : points) {
        require(std::isfinite(p.theta) && std::isfinite(p.x), "invalid-state",
                "non-finite quadrature sample");
        require(p.theta >= 0.0 && p.theta < std::numbers::pi, "invalid-state",
                "phase outside [0, pi)");
    }
    require(efficiency > 0.0 && efficiency <= 1.0, "invalid-state",
            "batch efficiency outside (0, 1]");
}

std::vector<double> oscillator_eigenfunctions(int max_n, double x) {
    require(max_n >= 0, "invalid-parameter", "need max_n >= 0");
    std::vector<double> psi(static_cast<std::size_t>(max_n) + 1);
    psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-x * x / 2.0);
    if (max_n >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for (int n = 2; n <= max_n; ++n)
        psi[static_cast<std::size_t>(n)] =
            std::sqrt(2.0 / n) * x * psi[static_cast<std::size_t>(n - 1)] -
            std::sqrt((n - 1.0) / n) * psi[static_cast<std::size_t>(n - 2)];
    return psi;
}

double marginal_pdf(const fock::DensityMatrix& rho, double theta, double x) {
    const int N = rho.truncation();
    const std::vector<double> psi = oscillator_eigenfunctions(N, x);
    double p = 0.0;
    for (int n = 0; n <= N; ++n) {
        p += rho.elements()(n, n).real() * psi[static_cast<std::size_t>(n)] *
             psi[static_cast<std::size_t>(n)];
        for (int m = n + 1; m <= N; ++m) {
            const std::complex<double> phase(std::cos((n - m) * theta), std::sin((n - m) * theta));
            p += 2.0 * (rho.elements()(n, m) * phase).real() *
                 psi[static_cast<std::size_t>(n)] * psi[static_cast<std::size_t>(m)];
        }
    }
    return p;
}

namespace {

constexpr int kGridPoints = 1 << 14;

// Inverse-CDF table for one phase.
struct CdfTable {
    std::vector<double> x;
    std::vector<double> cdf;

    double draw(double u) const {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t hi = std::min(static_cast<std::size_t>(it - cdf.begin()),
                                        cdf.size() - 1);
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        if (hi == lo) return x[lo];
        const double span = cdf[hi] - cdf[lo];
        const double f = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
        return x[lo] + f * (x[hi] - x[lo]);
    }
};

CdfTable build_cdf(const fock::DensityMatrix& rho, double theta) {
    const double nbar = fock::mean_photon(fock::diagonal(rho));
    const double half_width = 6.0 * std::max(1.0, std::sqrt(2.0 * nbar + 1.0));

    CdfTable t;
    t.x.resize(kGridPoints);
    std::vector<double> pdf(kGridPoints);
    for (int i = 0; i < kGridPoints; ++i) {
        const double xi = -half_width + 2.0 * half_width * i / (kGridPoints - 1.0);
        t.x[static_cast<std::size_t>(i)] = xi;
        pdf[static_cast<std::size_t>(i)] = std::max(0.0, marginal_pdf(rho, theta, xi));
    }
    t.cdf.resize(kGridPoints);
    t.cdf[0] = 0.0;
    const double dx = t.x[1] - t.x[0];
    for (int i = 1; i < kGridPoints; ++i)
        t.cdf[static_cast<std::size_t>(i)] =
            t.cdf[static_cast<std::size_t>(i - 1)] +
            0.5 * (pdf[static_cast<std::size_t>(i - 1)] + pdf[static_cast<std::size_t>(i)]) * dx;
    const double mass = t.cdf.back();
    require(mass >= 1.0 - 1e-9, "resolution",
            "quadrature grid captured only " + std::to_string(mass) + " probability mass");
    for (double& c : t.cdf) c /= mass;
    return t;
}

}  // namespace

QuadratureBatch sample(const fock::DensityMatrix& rho, double efficiency, std::size_t n_samples,
                       const std::vector<double>& phases, std::uint64_t seed) {
    require(n_samples >= 1, "invalid-parameter", "need at least one sample");
    require(efficiency > 0.0 && efficiency <= 1.0, "invalid-parameter",
            "efficiency must lie in (0, 1]");
    require(!phases.empty(), "invalid-parameter", "need at least one phase");
    for (double th : phases)
        require(th >= 0.0 && th < std::numbers::pi, "invalid-parameter",
                "phases must lie in [0, pi)");

    const fock::DensityMatrix lossy =
        efficiency < 1.0 ? fock::apply_loss(rho, efficiency) : rho;

    std::vector<CdfTable> tables;
    tables.reserve(phases.size());
    for (double th : phases) tables.push_back(build_cdf(lossy, th));

    QuadratureBatch batch;
    batch.efficiency = efficiency;
    batch.seed = seed;
    batch.points.resize(n_samples);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::size_t k = i % phases.size();
        batch.points[i] = {phases[k], tables[k].draw(uni(rng))};
    }
    return batch;
}

QuadratureBatch sample(const fock::DensityMatrix& rho, const HomodyneChain& chain,
                       std::size_t n_samples, const std::vector<double>& phases,
                       std::uint64_t seed) {
    return sample(rho, effective_efficiency(chain), n_samples, phases, seed);
}

void write_batch(const std::filesystem::path& path, const QuadratureBatch& batch,
                 const std::string& config_hash) {
    batch.validate();
    csv::Writer w(path);
    w.comment("config_hash=" + config_hash + " seed=" + std::to_string(batch.seed));
    w.header({"theta", "x"});
    for (const QuadraturePoint& p : batch.points) w.row({p.theta, p.x});
    w.commit();

    std::string meta;
    meta += "n_samples = " + std::to_string(batch.points.size()) + "\n";
    meta += "efficiency = " + csv::format_double(batch.efficiency) + "\n";
    meta += "seed = " + std::to_string(batch.seed) + "\n";
    meta += "config_hash = " + config_hash + "\n";
    csv::write_text_atomic(path.string() + ".meta", meta);
}

QuadratureBatch read_batch(const std::filesystem::path& path) {
    const csv::Table t = csv::read(path);
    require(t.columns == std::vector<std::string>({"theta", "x"}), "io",
            "quadrature csv needs columns theta,x");
    QuadratureBatch batch;
    batch.points.reserve(t.rows.size());
    for (const auto& row : t.rows) batch.points.push_back({row[0], row[1]});

    const std::filesystem::path meta_path = path.string() + ".meta";
    if (std::filesystem::exists(meta_path)) {
        const Config meta = Config::from_file(meta_path);
        batch.efficiency = meta.get_double("", "efficiency", 1.0);
        batch.seed = static_cast<std::uint64_t>(meta.get_int("", "seed", 0));
    }
    batch.validate();
    return batch;
}

}  // namespace photonlab::homodyne
