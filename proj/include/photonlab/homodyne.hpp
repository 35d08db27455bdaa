#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "photonlab/config.hpp"
#include "photonlab/fock.hpp"

namespace photonlab::homodyne {

/// Homodyne detection chain imperfections. Electronic noise enters as its
/// equivalent loss; visibility enters squared (mode-overlap loss).
struct HomodyneChain {
    double visibility = 0.99;
    double photodiode_qe = 0.97;
    double electronic_noise_equiv_loss = 0.04;
    double propagation_loss = 0.06;

    void validate() const;
    static HomodyneChain from_config(const Config& cfg);
};

/// visibility^2 * qe * (1 - electronic) * (1 - propagation).
double effective_efficiency(const HomodyneChain& chain);

struct QuadraturePoint {
    double theta = 0.0;  // in [0, pi)
    double x = 0.0;      // shot-noise units, vacuum variance 1/2
};

struct QuadratureBatch {
    std::vector<QuadraturePoint> points;
    double efficiency = 1.0;  // loss applied before sampling
    std::uint64_t seed = 0;

    void validate() const;
};

/// Real harmonic-oscillator eigenfunctions psi_0..psi_N at x, by the stable
/// two-term recurrence from psi_0 = pi^(-1/4) exp(-x^2/2).
std::vector<double> oscillator_eigenfunctions(int max_n, double x);

/// p(x | theta) = sum_{n,m} Re[rho_nm e^{i(n-m)theta}] psi_n(x) psi_m(x).
double marginal_pdf(const fock::DensityMatrix& rho, double theta, double x);

/// Applies the loss channel at the given efficiency, then draws quadratures
/// by inverse-CDF sampling of the marginal on an adaptive grid. Phases are
/// assigned round-robin. Deterministic given the seed.
QuadratureBatch sample(const fock::DensityMatrix& rho, double efficiency, std::size_t n_samples,
                       const std::vector<double>& phases, std::uint64_t seed);

QuadratureBatch sample(const fock::DensityMatrix& rho, const HomodyneChain& chain,
                       std::size_t n_samples, const std::vector<double>& phases,
                       std::uint64_t seed);

/// CSV (`theta,x`) plus a key-value sidecar `<path>.meta`.
void write_batch(const std::filesystem::path& path, const QuadratureBatch& batch,
                 const std::string& config_hash);
QuadratureBatch read_batch(const std::filesystem::path& path);

}  // namespace photonlab::homodyne
