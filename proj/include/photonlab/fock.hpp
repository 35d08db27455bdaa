#pragma once

#include <Eigen/Dense>
#include <vector>

namespace photonlab::fock {

/// Exact binomial coefficient from a cached Pascal triangle (n up to 63).
double binomial(int n, int k);

/// Truncated photon-number probability vector of a single optical mode.
/// Entries are probabilities for n = 0..truncation; they sum to one. The mass
/// lost to truncation before renormalization is kept in truncation_deficit().
class PhotonDistribution {
public:
    static constexpr double kDefaultDeficitThreshold = 1e-4;

    /// Normalizes nonnegative weights; errors with "truncation-too-small" if
    /// the missing mass 1 - sum(weights) exceeds the threshold.
    static PhotonDistribution from_weights(std::vector<double> weights,
                                           double deficit_threshold = kDefaultDeficitThreshold);

    /// Probabilities that already sum to one within 1e-9.
    explicit PhotonDistribution(std::vector<double> probs);

    static PhotonDistribution vacuum(int truncation);
    static PhotonDistribution fock_state(int n, int truncation);

    int truncation() const { return static_cast<int>(probs_.size()) - 1; }
    double prob(int n) const { return probs_[static_cast<std::size_t>(n)]; }
    const std::vector<double>& probs() const { return probs_; }
    double truncation_deficit() const { return deficit_; }

private:
    PhotonDistribution() = default;
    std::vector<double> probs_;
    double deficit_ = 0.0;
};

/// Joint photon-number distribution of a signal/idler mode pair, truncated at
/// the same photon number per mode.
class JointDistribution {
public:
    static JointDistribution from_weights(Eigen::MatrixXd weights,
                                          double deficit_threshold = PhotonDistribution::kDefaultDeficitThreshold);

    int truncation() const { return static_cast<int>(probs_.rows()) - 1; }
    double prob(int n_signal, int n_idler) const { return probs_(n_signal, n_idler); }
    const Eigen::MatrixXd& probs() const { return probs_; }
    double truncation_deficit() const { return deficit_; }

private:
    JointDistribution() = default;
    Eigen::MatrixXd probs_;  // rows: signal, cols: idler
    double deficit_ = 0.0;
};

/// Truncated Fock-basis density matrix. Construction checks hermiticity
/// (1e-12), unit trace (1e-9) and positivity (eigenvalues >= -1e-9).
class DensityMatrix {
public:
    explicit DensityMatrix(Eigen::MatrixXcd elements);

    static DensityMatrix from_distribution(const PhotonDistribution& dist);

    int truncation() const { return static_cast<int>(elements_.rows()) - 1; }
    const Eigen::MatrixXcd& elements() const { return elements_; }

private:
    Eigen::MatrixXcd elements_;
};

/// Two-mode squeezed vacuum: P(n,n) = (1 - lambda^2) lambda^(2n), zero
/// elsewhere, renormalized over the truncated window.
JointDistribution tmsv_joint(double lambda, int truncation,
                             double deficit_threshold = PhotonDistribution::kDefaultDeficitThreshold);

/// Generalized Bernoulli (binomial) loss map with transmission eta.
PhotonDistribution apply_loss(const PhotonDistribution& dist, double eta);

/// Loss map applied independently to each mode of a joint distribution.
JointDistribution apply_loss_marginal(const JointDistribution& joint,
                                      double eta_signal, double eta_idler);

/// Kraus form of the loss channel acting on a density matrix; reduces to
/// apply_loss on the diagonal.
DensityMatrix apply_loss(const DensityMatrix& rho, double eta);

PhotonDistribution signal_marginal(const JointDistribution& joint);
PhotonDistribution idler_marginal(const JointDistribution& joint);

/// g2(0) = <a+ a+ a a> / <a+ a>^2 = sum n(n-1) P(n) / (sum n P(n))^2.
/// Errors with "undefined-moment" on vacuum input.
double g2_zero(const PhotonDistribution& dist);

/// Two-term approximation 2 P2 / (P1 + 2 P2)^2.
double g2_zero_approx(const PhotonDistribution& dist);

double mean_photon(const PhotonDistribution& dist);

PhotonDistribution diagonal(const DensityMatrix& rho);

}  // namespace photonlab::fock
