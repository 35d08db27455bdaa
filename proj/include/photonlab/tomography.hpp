#pragma once

#include <cstdint>
#include <vector>

#include "photonlab/fock.hpp"
#include "photonlab/homodyne.hpp"

namespace photonlab::tomography {

struct MleOptions {
    int max_iters = 5000;
    double tol = 1e-10;       // stop when the log-likelihood gain drops below this
    int bins = 200;           // quadrature bins per phase; 0 = unbinned
    bool diagonal_only = false;
};

struct MleResult {
    fock::DensityMatrix rho;
    std::vector<double> log_likelihood;  // one entry per iteration
    int iterations = 0;
    bool converged = false;
};

/// Iterative maximum-likelihood reconstruction (R rho R updates built from
/// quadrature projectors; expectation-maximization on the diagonal when
/// diagonal_only). The log-likelihood is non-decreasing; a damped update is
/// substituted on the rare numerical decrease.
MleResult mle_reconstruct(const homodyne::QuadratureBatch& batch, int truncation,
                          const MleOptions& opts = {});

/// Exact inverse of the Bernoulli loss map at transmission eta. Small
/// negative entries from statistical noise are clamped to zero and the
/// distribution renormalized; negativity beyond negativity_limit errors.
fock::PhotonDistribution loss_correct(const fock::PhotonDistribution& dist, double eta,
                                      double negativity_limit = 1e-3);

/// 1-norm condition number of the loss map inverted by loss_correct.
double loss_condition_number(int truncation, double eta);

/// Uhlmann fidelity in [0, 1].
double fidelity(const fock::DensityMatrix& a, const fock::DensityMatrix& b);

/// Seeded bootstrap over samples; returns the standard error of each
/// reconstructed diagonal element.
std::vector<double> bootstrap_diagonal_stderr(const homodyne::QuadratureBatch& batch,
                                              int truncation, int n_resamples,
                                              std::uint64_t seed, const MleOptions& opts = {});

}  // namespace photonlab::tomography
