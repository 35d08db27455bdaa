#include "photonlab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "photonlab/errors.hpp"

namespace photonlab::tomography {

namespace {

// One measurement cell: projector |theta, x><theta, x| truncated to the Fock
// window, with amplitude vector a_n = e^{i n theta} psi_n(x), plus its count.
struct Cell {
    Eigen::VectorXcd amplitude;
    double weight;
};

std::vector<Cell> build_cells(const homodyne::QuadratureBatch& batch, int truncation,
                              int bins) {
    std::vector<Cell> cells;
    // group samples by phase
    std::vector<double> phases;
    for (const auto& p : batch.points)
        if (std::find(phases.begin(), phases.end(), p.theta) == phases.end())
            phases.push_back(p.theta);

    // a_n = e^{-i n theta} psi_n(x) so that a^dag rho a reproduces
    // marginal_pdf's phase convention.
    auto amplitude_at = [&](double theta, double x) {
        const std::vector<double> psi = homodyne::oscillator_eigenfunctions(truncation, x);
        Eigen::VectorXcd a(truncation + 1);
        for (int n = 0; n <= truncation; ++n)
            a(n) = std::polar(psi[static_cast<std::size_t>(n)], -n * theta);
        return a;
    };

    for (double theta : phases) {
        std::vector<double> xs;
        for (const auto& p : batch.points)
            if (p.theta == theta) xs.push_back(p.x);

        if (bins <= 0) {
            for (double x : xs) cells.push_back({amplitude_at(theta, x), 1.0});
            continue;
        }
        const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
        const double lo = *lo_it, hi = *hi_it;
        if (hi <= lo) {
            cells.push_back({amplitude_at(theta, lo), static_cast<double>(xs.size())});
            continue;
        }
        std::vector<double> count(static_cast<std::size_t>(bins), 0.0);
        for (double x : xs) {
            int b = static_cast<int>((x - lo) / (hi - lo) * bins);
            b = std::clamp(b, 0, bins - 1);
            count[static_cast<std::size_t>(b)] += 1.0;
        }
        for (int b = 0; b < bins; ++b) {
            if (count[static_cast<std::size_t>(b)] == 0.0) continue;
            const double center = lo + (b + 0.5) * (hi - lo) / bins;
            cells.push_back({amplitude_at(theta, center), count[static_cast<std::size_t>(b)]});
        }
    }
    return cells;
}

double log_likelihood(const std::vector<Cell>& cells, const Eigen::MatrixXcd& rho) {
    double ll = 0.0;
    for (const Cell& c : cells) {
        const double p = std::real(c.amplitude.dot(rho * c.amplitude));
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += c.weight * std::log(p);
    }
    return ll;
}

Eigen::MatrixXcd r_operator(const std::vector<Cell>& cells, const Eigen::MatrixXcd& rho,
                            double total_weight) {
    const auto n = rho.rows();
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(n, n);
    for (const Cell& c : cells) {
        const double p = std::real(c.amplitude.dot(rho * c.amplitude));
        require(p > 1e-300, "degenerate-data",
                "a measured quadrature has zero probability under the iterate");
        R += (c.weight / p) * (c.amplitude * c.amplitude.adjoint());
    }
    return R / total_weight;
}

}  // namespace

MleResult mle_reconstruct(const homodyne::QuadratureBatch& batch, int truncation,
                          const MleOptions& opts) {
    batch.validate();
    require(truncation >= 1, "invalid-parameter", "truncation must be >= 1");
    require(opts.max_iters >= 1 && opts.tol >= 0.0, "invalid-parameter", "bad MLE options");
    {
        std::set<double> distinct;
        for (const auto& p : batch.points) distinct.insert(p.x);
        require(distinct.size() >= 2, "degenerate-data",
                "all quadrature samples are identical");
    }

    const std::vector<Cell> cells = build_cells(batch, truncation, opts.bins);
    double total_weight = 0.0;
    for (const Cell& c : cells) total_weight += c.weight;

    const auto dim = truncation + 1;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);

    MleResult result{fock::DensityMatrix(rho), {}};
    result.log_likelihood.reserve(static_cast<std::size_t>(opts.max_iters));

    double ll_prev = log_likelihood(cells, rho);
    result.log_likelihood.push_back(ll_prev);

    int iter = 0;
    if (opts.diagonal_only) {
        // Phase-averaged data: expectation-maximization on the mixture
        // weights, p_n <- p_n * sum_b w_b psi_n(x_b)^2 / p(x_b). Monotone by
        // the usual EM argument.
        Eigen::VectorXd p = rho.diagonal().real();
        std::vector<Eigen::VectorXd> psi_sq;
        psi_sq.reserve(cells.size());
        for (const Cell& c : cells) psi_sq.push_back(c.amplitude.cwiseAbs2());
        for (; iter < opts.max_iters; ++iter) {
            Eigen::VectorXd ratio = Eigen::VectorXd::Zero(dim);
            for (std::size_t b = 0; b < cells.size(); ++b) {
                const double prob = psi_sq[b].dot(p);
                require(prob > 1e-300, "degenerate-data",
                        "a measured quadrature has zero probability under the iterate");
                ratio += (cells[b].weight / prob) * psi_sq[b];
            }
            p = p.cwiseProduct(ratio / total_weight);
            p /= p.sum();
            double ll = 0.0;
            for (std::size_t b = 0; b < cells.size(); ++b)
                ll += cells[b].weight * std::log(psi_sq[b].dot(p));
            result.log_likelihood.push_back(ll);
            if (ll - ll_prev < opts.tol) {
                ll_prev = ll;
                ++iter;
                result.converged = true;
                break;
            }
            ll_prev = ll;
        }
        rho = p.cast<std::complex<double>>().asDiagonal();
    } else {
        for (; iter < opts.max_iters; ++iter) {
            const Eigen::MatrixXcd R = r_operator(cells, rho, total_weight);
            Eigen::MatrixXcd next = R * rho * R;
            next /= next.trace().real();

            double ll = log_likelihood(cells, next);
            if (ll < ll_prev) {
                // Damped (diluted) update keeps the likelihood non-decreasing
                // when the full R rho R step overshoots.
                const Eigen::MatrixXcd half =
                    (R + Eigen::MatrixXcd::Identity(dim, dim)) / 2.0;
                next = half * rho * half;
                next /= next.trace().real();
                ll = log_likelihood(cells, next);
                if (ll < ll_prev) {  // fixed point up to roundoff
                    result.converged = true;
                    break;
                }
            }
            rho = next;
            result.log_likelihood.push_back(ll);
            if (ll - ll_prev < opts.tol) {
                ll_prev = ll;
                ++iter;
                result.converged = true;
                break;
            }
            ll_prev = ll;
        }
    }

    rho = (rho + rho.adjoint()) / 2.0;
    result.rho = fock::DensityMatrix(rho);
    result.iterations = iter;
    return result;
}

double loss_condition_number(int truncation, double eta) {
    require(eta > 0.0 && eta <= 1.0, "invalid-parameter", "eta must lie in (0, 1]");
    double norm_fwd = 0.0, norm_inv = 0.0;
    for (int n = 0; n <= truncation; ++n) {
        double col_fwd = 0.0, col_inv = 0.0;
        for (int m = 0; m <= n; ++m) {
            col_fwd += fock::binomial(n, m) * std::pow(eta, m) * std::pow(1.0 - eta, n - m);
            col_inv += fock::binomial(n, m) * std::pow(1.0 / eta, n) *
                       std::pow(std::abs(eta - 1.0), n - m);
        }
        norm_fwd = std::max(norm_fwd, col_fwd);
        norm_inv = std::max(norm_inv, col_inv);
    }
    return norm_fwd * norm_inv;
}

fock::PhotonDistribution loss_correct(const fock::PhotonDistribution& dist, double eta,
                                      double negativity_limit) {
    require(eta > 0.0 && eta <= 1.0, "invalid-parameter", "eta must lie in (0, 1]");
    const int N = dist.truncation();
    require(loss_condition_number(N, eta) <= 1e8, "ill-conditioned",
            "loss inversion too ill-conditioned at this eta and truncation");

    // (L^-1)_{mn} = C(n, m) (eta - 1)^(n-m) / eta^n, upper triangular.
    std::vector<double> out(static_cast<std::size_t>(N) + 1, 0.0);
    for (int m = 0; m <= N; ++m) {
        double acc = 0.0;
        for (int n = m; n <= N; ++n)
            acc += fock::binomial(n, m) * std::pow(eta - 1.0, n - m) / std::pow(eta, n) *
                   dist.prob(n);
        out[static_cast<std::size_t>(m)] = acc;
    }

    double most_negative = 0.0;
    for (double v : out) most_negative = std::min(most_negative, v);
    require(-most_negative <= negativity_limit, "inconsistent-data",
            "loss inversion produced negativity " + std::to_string(-most_negative));

    double sum = 0.0;
    for (double& v : out) {
        v = std::max(v, 0.0);
        sum += v;
    }
    for (double& v : out) v /= sum;
    return fock::PhotonDistribution(std::move(out));
}

double fidelity(const fock::DensityMatrix& a, const fock::DensityMatrix& b) {
    require(a.truncation() == b.truncation(), "invalid-parameter",
            "fidelity needs equal truncations");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a.elements());
    const Eigen::VectorXd va = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sqrt_a =
        ea.eigenvectors() * va.asDiagonal() * ea.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(sqrt_a * b.elements() * sqrt_a);
    double f = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(f * f, 0.0, 1.0);
}

std::vector<double> bootstrap_diagonal_stderr(const homodyne::QuadratureBatch& batch,
                                              int truncation, int n_resamples,
                                              std::uint64_t seed, const MleOptions& opts) {
    batch.validate();
    require(n_resamples >= 2, "invalid-parameter", "need at least 2 bootstrap resamples");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, batch.points.size() - 1);

    const std::size_t dim = static_cast<std::size_t>(truncation) + 1;
    std::vector<double> sum(dim, 0.0), sum_sq(dim, 0.0);
    for (int r = 0; r < n_resamples; ++r) {
        homodyne::QuadratureBatch resampled;
        resampled.efficiency = batch.efficiency;
        resampled.seed = batch.seed;
        resampled.points.reserve(batch.points.size());
        for (std::size_t i = 0; i < batch.points.size(); ++i)
            resampled.points.push_back(batch.points[pick(rng)]);
        const MleResult res = mle_reconstruct(resampled, truncation, opts);
        const fock::PhotonDistribution diag = fock::diagonal(res.rho);
        for (std::size_t n = 0; n < dim; ++n) {
            sum[n] += diag.prob(static_cast<int>(n));
            sum_sq[n] += diag.prob(static_cast<int>(n)) * diag.prob(static_cast<int>(n));
        }
    }
    std::vector<double> stderr_out(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        const double mean = sum[n] / n_resamples;
        const double var = std::max(0.0, sum_sq[n] / n_resamples - mean * mean);
        stderr_out[n] = std::sqrt(var * n_resamples / (n_resamples - 1.0));
    }
    return stderr_out;
}

}  // namespace photonlab::tomography
