#include "photonlab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "photonlab/errors.hpp"

namespace photonlab::fock {

namespace {

constexpr int kPascalRows = 64;

const std::vector<std::vector<double>>& pascal_triangle() {
    static const std::vector<std::vector<double>> table = [] {
        std::vector<std::vector<double>> t(kPascalRows);
        for (int n = 0; n < kPascalRows; ++n) {
            t[n].resize(static_cast<std::size_t>(n) + 1, 1.0);
            for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
        }
        return t;
    }();
    return table;
}

}  // namespace

double binomial(int n, int k) {
    require(n >= 0 && k >= 0 && k <= n, "invalid-parameter", "binomial: need 0 <= k <= n");
    require(n < kPascalRows, "invalid-parameter", "binomial: n exceeds cached Pascal triangle");
    return pascal_triangle()[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

PhotonDistribution PhotonDistribution::from_weights(std::vector<double> weights,
                                                    double deficit_threshold) {
    require(!weights.empty(), "invalid-parameter", "distribution needs at least one entry");
    double sum = 0.0;
    for (double& w : weights) {
        require(w >= -1e-12, "invalid-state", "negative probability weight");
        w = std::max(w, 0.0);
        sum += w;
    }
    require(sum > 0.0, "invalid-state", "all-zero probability weights");
    require(sum <= 1.0 + 1e-9, "invalid-state", "probability weights exceed one");
    const double deficit = std::max(0.0, 1.0 - sum);
    require(deficit <= deficit_threshold, "truncation-too-small",
            "truncated probability mass " + std::to_string(deficit) + " exceeds threshold");
    for (double& w : weights) w /= sum;
    PhotonDistribution d;
    d.probs_ = std::move(weights);
    d.deficit_ = deficit;
    return d;
}

PhotonDistribution::PhotonDistribution(std::vector<double> probs) {
    require(!probs.empty(), "invalid-parameter", "distribution needs at least one entry");
    double sum = 0.0;
    for (double& p : probs) {
        require(p >= -1e-12 && p <= 1.0 + 1e-12, "invalid-state", "probability outside [0, 1]");
        p = std::clamp(p, 0.0, 1.0);
        sum += p;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "invalid-state", "probabilities do not sum to one");
    for (double& p : probs) p /= sum;
    probs_ = std::move(probs);
}

PhotonDistribution PhotonDistribution::vacuum(int truncation) {
    return fock_state(0, truncation);
}

PhotonDistribution PhotonDistribution::fock_state(int n, int truncation) {
    require(truncation >= 0 && n >= 0 && n <= truncation, "invalid-parameter",
            "fock_state: need 0 <= n <= truncation");
    std::vector<double> p(static_cast<std::size_t>(truncation) + 1, 0.0);
    p[static_cast<std::size_t>(n)] = 1.0;
    return PhotonDistribution(std::move(p));
}

JointDistribution JointDistribution::from_weights(Eigen::MatrixXd weights,
                                                  double deficit_threshold) {
    require(weights.rows() == weights.cols() && weights.rows() >= 1, "invalid-parameter",
            "joint distribution must be square");
    require((weights.array() >= -1e-12).all(), "invalid-state", "negative joint weight");
    weights = weights.cwiseMax(0.0);
    const double sum = weights.sum();
    require(sum > 0.0, "invalid-state", "all-zero joint weights");
    require(sum <= 1.0 + 1e-9, "invalid-state", "joint weights exceed one");
    const double deficit = std::max(0.0, 1.0 - sum);
    require(deficit <= deficit_threshold, "truncation-too-small",
            "truncated probability mass " + std::to_string(deficit) + " exceeds threshold");
    JointDistribution j;
    j.probs_ = weights / sum;
    j.deficit_ = deficit;
    return j;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd elements) {
    require(elements.rows() == elements.cols() && elements.rows() >= 1, "invalid-state",
            "density matrix must be square");
    const double herm = (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    require(herm <= 1e-12, "invalid-state", "density matrix not Hermitian");
    elements = (elements + elements.adjoint()) / 2.0;
    require(std::abs(elements.trace().real() - 1.0) <= 1e-9, "invalid-state",
            "density matrix trace differs from one");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(elements, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -1e-9, "invalid-state",
            "density matrix has a negative eigenvalue");
    elements_ = std::move(elements);
}

DensityMatrix DensityMatrix::from_distribution(const PhotonDistribution& dist) {
    const int n = dist.truncation() + 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = dist.prob(i);
    return DensityMatrix(std::move(m));
}

JointDistribution tmsv_joint(double lambda, int truncation, double deficit_threshold) {
    require(lambda >= 0.0 && lambda < 1.0, "invalid-parameter",
            "tmsv_joint: pair amplitude must lie in [0, 1)");
    require(truncation >= 2, "invalid-parameter", "tmsv_joint: truncation must be >= 2");
    const double mu = lambda * lambda;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(truncation + 1, truncation + 1);
    double term = 1.0 - mu;
    for (int n = 0; n <= truncation; ++n) {
        w(n, n) = term;
        term *= mu;
    }
    return JointDistribution::from_weights(std::move(w), deficit_threshold);
}

namespace {

// Column-stochastic binomial loss matrix L(m, n) = C(n, m) eta^m (1-eta)^(n-m).
Eigen::MatrixXd loss_matrix(int truncation, double eta) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(truncation + 1, truncation + 1);
    for (int n = 0; n <= truncation; ++n)
        for (int m = 0; m <= n; ++m)
            L(m, n) = binomial(n, m) * std::pow(eta, m) * std::pow(1.0 - eta, n - m);
    return L;
}

void check_eta(double eta) {
    require(eta >= 0.0 && eta <= 1.0, "invalid-parameter", "transmission must lie in [0, 1]");
}

}  // namespace

PhotonDistribution apply_loss(const PhotonDistribution& dist, double eta) {
    check_eta(eta);
    const int N = dist.truncation();
    std::vector<double> out(static_cast<std::size_t>(N) + 1, 0.0);
    for (int n = 0; n <= N; ++n) {
        const double pn = dist.prob(n);
        if (pn == 0.0) continue;
        for (int m = 0; m <= n; ++m)
            out[static_cast<std::size_t>(m)] +=
                pn * binomial(n, m) * std::pow(eta, m) * std::pow(1.0 - eta, n - m);
    }
    PhotonDistribution r = PhotonDistribution(std::move(out));
    return r;
}

JointDistribution apply_loss_marginal(const JointDistribution& joint,
                                      double eta_signal, double eta_idler) {
    check_eta(eta_signal);
    check_eta(eta_idler);
    const int N = joint.truncation();
    const Eigen::MatrixXd Ls = loss_matrix(N, eta_signal);
    const Eigen::MatrixXd Li = loss_matrix(N, eta_idler);
    Eigen::MatrixXd out = Ls * joint.probs() * Li.transpose();
    // The Bernoulli map is probability preserving; only roundoff is corrected here.
    return JointDistribution::from_weights(std::move(out), 1e-9);
}

DensityMatrix apply_loss(const DensityMatrix& rho, double eta) {
    check_eta(eta);
    const int N = rho.truncation();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    // E_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k>
    for (int k = 0; k <= N; ++k) {
        for (int m = 0; m + k <= N; ++m) {
            const double am = std::sqrt(binomial(m + k, k) * std::pow(eta, m) *
                                        std::pow(1.0 - eta, k));
            for (int mp = 0; mp + k <= N; ++mp) {
                const double amp = std::sqrt(binomial(mp + k, k) * std::pow(eta, mp) *
                                             std::pow(1.0 - eta, k));
                out(m, mp) += am * amp * rho.elements()(m + k, mp + k);
            }
        }
    }
    const double tr = out.trace().real();
    require(tr > 0.0, "invalid-state", "loss map produced zero trace");
    return DensityMatrix(out / tr);
}

PhotonDistribution signal_marginal(const JointDistribution& joint) {
    const Eigen::VectorXd v = joint.probs().rowwise().sum();
    return PhotonDistribution(std::vector<double>(v.data(), v.data() + v.size()));
}

PhotonDistribution idler_marginal(const JointDistribution& joint) {
    const Eigen::VectorXd v = joint.probs().colwise().sum();
    return PhotonDistribution(std::vector<double>(v.data(), v.data() + v.size()));
}

double g2_zero(const PhotonDistribution& dist) {
    double mean = 0.0, pairs = 0.0;
    for (int n = 0; n <= dist.truncation(); ++n) {
        mean += n * dist.prob(n);
        pairs += static_cast<double>(n) * (n - 1) * dist.prob(n);
    }
    require(mean > 0.0, "undefined-moment", "g2 undefined for vacuum");
    return pairs / (mean * mean);
}

double g2_zero_approx(const PhotonDistribution& dist) {
    require(dist.truncation() >= 2, "invalid-parameter", "g2 approximation needs P2");
    const double p1 = dist.prob(1), p2 = dist.prob(2);
    require(p1 + 2.0 * p2 > 0.0, "undefined-moment", "g2 undefined for vacuum");
    return 2.0 * p2 / ((p1 + 2.0 * p2) * (p1 + 2.0 * p2));
}

double mean_photon(const PhotonDistribution& dist) {
    double mean = 0.0;
    for (int n = 0; n <= dist.truncation(); ++n) mean += n * dist.prob(n);
    return mean;
}

PhotonDistribution diagonal(const DensityMatrix& rho) {
    std::vector<double> p(static_cast<std::size_t>(rho.truncation()) + 1);
    for (int n = 0; n <= rho.truncation(); ++n) p[static_cast<std::size_t>(n)] = rho.elements()(n, n).real();
    return PhotonDistribution(std::move(p));
}

}  // namespace photonlab::fock
