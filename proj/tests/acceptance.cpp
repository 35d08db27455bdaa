// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Tolerances and runtime budgets are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "photonlab/cli.hpp"
#include "photonlab/config.hpp"
#include "photonlab/csv.hpp"
#include "photonlab/fock.hpp"
#include "photonlab/homodyne.hpp"
#include "photonlab/snspd.hpp"
#include "photonlab/source.hpp"
#include "photonlab/thinfilm.hpp"
#include "photonlab/tomography.hpp"

using namespace photonlab;

namespace {

int g_failures = 0;

struct Criterion {
    std::string name;
    double budget_s;
    std::function<std::string()> body;  // returns detail text; throws on failure
};

void check(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

std::string fmt(double v) { return csv::format_double(v); }

Config reference_config() {
    return Config::from_file(test_helpers::config_dir() / "photonlab.cfg");
}

// ---------- criterion bodies ----------

std::string heralding_efficiency() {
    const Config cfg = reference_config();
    const auto opo = source::OpoParams::from_config(cfg);
    const auto chain = source::HeraldChain::from_config(cfg);
    const double lambda = std::sqrt(cfg.get_double("source", "lambda_sq"));
    const auto r = source::herald(opo, chain, lambda, 10);
    const double p1 = r.conditional_state.prob(1);
    const double p0 = r.conditional_state.prob(0);
    check(std::abs(p1 - 0.93) <= 0.02, "P1 = " + fmt(p1) + " outside 0.93 +- 0.02");
    check(std::abs(p0 - 0.05) <= 0.02, "P0 = " + fmt(p0) + " outside 0.05 +- 0.02");
    return "P1 = " + fmt(p1) + ", P0 = " + fmt(p0);
}

std::string tomo_pipeline_pair() {
    const Config cfg = reference_config();
    test_helpers::TempDir tmp;
    const auto r = cli::run_tomo_pipeline(cfg, tmp.path, 100000,
                                          static_cast<std::uint64_t>(cfg.get_int("run", "seed")));
    const double uncorrected = r.uncorrected[1];
    const double corrected = r.corrected[1];
    check(std::abs(uncorrected - 0.79) <= 0.02,
          "uncorrected P1 = " + fmt(uncorrected) + " outside 0.79 +- 0.02");
    check(std::abs(corrected - 0.93) <= 0.02,
          "corrected P1 = " + fmt(corrected) + " outside 0.93 +- 0.02");
    check(r.mle_converged, "MLE did not converge");
    return "uncorrected P1 = " + fmt(uncorrected) + ", corrected P1 = " + fmt(corrected);
}

std::string g2_range() {
    const Config cfg = reference_config();
    const auto opo = source::OpoParams::from_config(cfg);
    const auto chain = source::HeraldChain::from_config(cfg);
    // pump endpoints producing 150 kHz and 1 MHz heralding rates
    const double per_mw =
        opo.pair_rate_per_mw * source::herald_efficiency(chain);
    const double pump_low = (150e3 - chain.dark_rate_cps) / per_mw;
    const double pump_high = (1e6 - chain.dark_rate_cps) / per_mw;

    double g2_min = 1e9, g2_max = -1e9, previous = -1e9, rate_low = 0.0, rate_high = 0.0;
    const int steps = 25;
    for (int i = 0; i < steps; ++i) {
        const double pump = pump_low + (pump_high - pump_low) * i / (steps - 1.0);
        const auto r = source::herald(opo, chain, source::pair_amplitude(pump, opo), 12);
        check(r.g2_exact > previous, "g2 not monotone in pump at " + fmt(pump) + " mW");
        previous = r.g2_exact;
        g2_min = std::min(g2_min, r.g2_exact);
        g2_max = std::max(g2_max, r.g2_exact);
        if (i == 0) rate_low = r.heralding_rate_hz;
        if (i == steps - 1) rate_high = r.heralding_rate_hz;
    }
    check(std::abs(rate_low - 150e3) < 1e3 && std::abs(rate_high - 1e6) < 1e3,
          "sweep endpoints missed the 150 kHz / 1 MHz rates");
    check(g2_min >= 0.006 && g2_max <= 0.12,
          "g2 range [" + fmt(g2_min) + ", " + fmt(g2_max) + "] outside [0.006, 0.12]");
    return "g2 in [" + fmt(g2_min) + ", " + fmt(g2_max) + "] over 150 kHz - 1 MHz";
}

std::string brightness_consistency() {
    const Config cfg = reference_config();
    const auto opo = source::OpoParams::from_config(cfg);
    const auto chain = source::HeraldChain::from_config(cfg);
    const auto r = source::herald(opo, chain, source::pair_amplitude(1.0, opo), 10);
    const double ceiling = source::brightness_ceiling(r.brightness, chain);
    check(std::abs(r.brightness - 0.6e4) <= 0.1 * 0.6e4,
          "brightness " + fmt(r.brightness) + " outside 0.6e4 +- 10%");
    check(std::abs(ceiling - 1.2e4) <= 0.1 * 1.2e4,
          "ceiling " + fmt(ceiling) + " outside 1.2e4 +- 10%");
    return "brightness = " + fmt(r.brightness) + ", ceiling = " + fmt(ceiling);
}

std::string sde_point() {
    const Config cfg = reference_config();
    const auto model = snspd::DetectorModel::from_config(cfg);
    const double bias = cfg.get_double("snspd", "bias_ua");
    const double efficiency = snspd::sde(model, bias);
    const double dark = snspd::dark_rate(model, bias);
    check(std::abs(efficiency - 0.93) <= 0.01, "sde = " + fmt(efficiency) + " outside 0.93 +- 0.01");
    check(std::abs(dark - 3.0) <= 1.0, "dark = " + fmt(dark) + " outside 3 +- 1 cps");

    snspd::CalibrationRun run = snspd::CalibrationRun::from_config(cfg);
    const auto cal = snspd::simulate_calibration(model, run, bias);
    check(std::abs(cal.total_rel_uncertainty - 0.03) <= 0.003,
          "reported uncertainty " + fmt(cal.total_rel_uncertainty) + " not ~3%");

    // 1e4-run Monte-Carlo mean of the counts within 2 Poisson sigma
    snspd::CalibrationRun mc = run;
    mc.duration_s = 1.0;
    const double expected =
        (run.photon_flux_per_s * efficiency + dark) * mc.duration_s;
    double mean = 0.0;
    const int n_runs = 10000;
    for (int i = 0; i < n_runs; ++i) {
        mc.seed = static_cast<std::uint64_t>(i) + 1;
        mean += static_cast<double>(snspd::simulate_calibration(model, mc, bias).counts);
    }
    mean /= n_runs;
    const double sigma = std::sqrt(expected / n_runs);
    check(std::abs(mean - expected) <= 2.0 * sigma,
          "MC mean " + fmt(mean) + " vs " + fmt(expected) + " beyond 2 sigma");
    return "sde = " + fmt(efficiency) + ", dark = " + fmt(dark) +
           ", uncertainty = " + fmt(cal.total_rel_uncertainty);
}

std::string thinfilm_suite() {
    // (a) energy conservation on 1e3 random lossless stacks
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> n_dist(1.05, 3.5);
    std::uniform_real_distribution<double> d_dist(0.0, 350.0);
    std::uniform_int_distribution<int> count(0, 8);
    for (int trial = 0; trial < 1000; ++trial) {
        thinfilm::ResolvedStack s;
        s.ambient = {1.0, 0.0};
        s.substrate = {n_dist(rng), 0.0};
        const int layers = count(rng);
        for (int i = 0; i < layers; ++i)
            s.layers.push_back({{n_dist(rng), 0.0}, d_dist(rng)});
        const auto p = thinfilm::solve(s, 600.0 + (trial % 700));
        check(std::abs(p.R + p.T - 1.0) <= 1e-9, "lossless stack violates R + T = 1");
    }

    // (b) analytic oracles
    thinfilm::ResolvedStack fresnel;
    fresnel.ambient = {1.0, 0.0};
    fresnel.substrate = {1.5, 0.0};
    const auto f = thinfilm::solve(fresnel, 1064.0);
    check(std::abs(f.R - 0.04) <= 1e-9 && std::abs(f.T - 0.96) <= 1e-9,
          "Fresnel oracle failed");
    thinfilm::ResolvedStack quarter = fresnel;
    const double n1 = std::sqrt(1.5);
    quarter.layers.push_back({{n1, 0.0}, 1064.0 / (4.0 * n1)});
    check(thinfilm::solve(quarter, 1064.0).R <= 1e-9, "quarter-wave oracle failed");

    // (c) shipped recipe absorbs at the design wavelength
    const auto stack =
        thinfilm::read_stack_file(test_helpers::config_dir() / "stack_detector.txt");
    const auto table =
        thinfilm::MaterialTable::from_csv(test_helpers::config_dir() / "materials.csv");
    const double a = thinfilm::solve(stack, table, 1064.0).A;
    check(a >= 0.90, "A(1064) = " + fmt(a) + " below 0.90");
    return "A(1064) = " + fmt(a) + ", oracles exact, 1e3 lossless stacks conserve energy";
}

std::string tomography_properties() {
    // monotone likelihood + synthetic recovery at N <= 5 with 5e4 samples
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst_fidelity = 1.0;
    for (const int truncation : {3, 5}) {
        const int d = truncation + 1;
        Eigen::MatrixXcd g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g(i, j) = {gauss(rng), gauss(rng)};
        Eigen::MatrixXcd m = g * g.adjoint();
        m /= m.trace().real();
        const fock::DensityMatrix truth(m);

        std::vector<double> phases(12);
        for (int i = 0; i < 12; ++i) phases[static_cast<std::size_t>(i)] = std::numbers::pi * i / 12.0;
        const auto batch = homodyne::sample(truth, 1.0, 50000, phases, 29);
        tomography::MleOptions opts;
        opts.max_iters = 3000;
        const auto res = tomography::mle_reconstruct(batch, truncation, opts);
        for (std::size_t i = 1; i < res.log_likelihood.size(); ++i)
            check(res.log_likelihood[i] >= res.log_likelihood[i - 1] - 1e-9,
                  "likelihood decreased at iteration " + std::to_string(i));
        worst_fidelity = std::min(worst_fidelity, tomography::fidelity(res.rho, truth));
    }
    check(worst_fidelity >= 0.98, "fidelity " + fmt(worst_fidelity) + " below 0.98");

    // loss inversion round trip for eta >= 0.5
    std::mt19937_64 rng2(31);
    for (const double eta : {0.5, 0.7, 0.85, 1.0}) {
        const fock::PhotonDistribution d(test_helpers::random_distribution(rng2, 11));
        const auto rt = tomography::loss_correct(fock::apply_loss(d, eta), eta, 1e-3);
        for (int n = 0; n <= 10; ++n)
            check(std::abs(rt.prob(n) - d.prob(n)) <= 1e-8,
                  "round trip off at eta = " + fmt(eta));
    }
    return "fidelity >= " + fmt(worst_fidelity) + ", likelihood monotone, inversion exact";
}

std::string oracle_equivalence() {
    // herald() against the exhaustive outcome enumeration
    const Config cfg = reference_config();
    const auto opo = source::OpoParams::from_config(cfg);
    const double eta_signal =
        source::escape_efficiency(opo.output_coupler_T, opo.intracavity_loss_L);
    double worst = 0.0;
    for (const double mu : {1e-4, 0.01, 0.05}) {
        for (const int N : {2, 3, 4}) {
            const auto chain = source::HeraldChain::from_config(cfg);
            const double eta_idler = source::herald_efficiency(chain);
            const double p_dark = chain.dark_rate_cps * chain.herald_window_s;
            const auto got = source::herald(opo, chain, std::sqrt(mu), N, 1e-2);

            // enumeration over (pairs, signal survivors, idler survivors, dark)
            std::vector<double> pairs(static_cast<std::size_t>(N) + 1);
            double norm = 0.0;
            for (int n = 0; n <= N; ++n) {
                pairs[static_cast<std::size_t>(n)] = (1.0 - mu) * std::pow(mu, n);
                norm += pairs[static_cast<std::size_t>(n)];
            }
            for (double& p : pairs) p /= norm;
            auto binom = [](int n, int k) {
                double r = 1.0;
                for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
                return r;
            };
            std::vector<double> conditional(static_cast<std::size_t>(N) + 1, 0.0);
            double p_click = 0.0;
            for (int n = 0; n <= N; ++n)
                for (int s = 0; s <= n; ++s)
                    for (int i = 0; i <= n; ++i) {
                        const double w =
                            pairs[static_cast<std::size_t>(n)] *
                            binom(n, s) * std::pow(eta_signal, s) *
                            std::pow(1.0 - eta_signal, n - s) * binom(n, i) *
                            std::pow(eta_idler, i) * std::pow(1.0 - eta_idler, n - i) *
                            (i == 0 ? p_dark : 1.0);
                        conditional[static_cast<std::size_t>(s)] += w;
                        p_click += w;
                    }
            for (double& p : conditional) p /= p_click;
            worst = std::max(worst, std::abs(got.click_probability - p_click));
            for (int n = 0; n <= N; ++n)
                worst = std::max(worst,
                                 std::abs(got.conditional_state.prob(n) -
                                          conditional[static_cast<std::size_t>(n)]));
        }
    }
    check(worst <= 1e-10, "herald vs enumeration deviates by " + fmt(worst));

    // g2 exact form against a direct moment enumeration
    std::mt19937_64 rng(37);
    double worst_g2 = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = test_helpers::random_distribution(rng, 11);
        double mean = 0.0, second = 0.0;
        for (int n = 0; n <= 10; ++n) {
            mean += n * p[static_cast<std::size_t>(n)];
            second += static_cast<double>(n) * (n - 1) * p[static_cast<std::size_t>(n)];
        }
        const double direct = second / (mean * mean);
        worst_g2 = std::max(worst_g2,
                            std::abs(fock::g2_zero(fock::PhotonDistribution(p)) - direct));
    }
    check(worst_g2 <= 1e-12, "g2 vs moment enumeration deviates by " + fmt(worst_g2));
    return "herald enumeration <= " + fmt(worst) + ", g2 enumeration <= " + fmt(worst_g2);
}

void run_criterion(int index, const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
        detail = c.body();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && elapsed > c.budget_s) {
        ok = false;
        detail = "runtime " + fmt(elapsed) + " s exceeds budget " + fmt(c.budget_s) + " s";
    }
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << index << ": " << c.name << " ("
         << detail << ") [" << fmt(elapsed) << " s]";
    std::cout << line.str() << std::endl;
    if (!ok) ++g_failures;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"heralding efficiency at the reference point", 1.0, heralding_efficiency},
        {"uncorrected/corrected single-photon pair from the full pipeline", 120.0,
         tomo_pipeline_pair},
        {"g2(0) range over the 150 kHz - 1 MHz sweep", 10.0, g2_range},
        {"brightness and its loss-free ceiling", 1.0, brightness_consistency},
        {"SDE point, dark rate, and calibration uncertainty", 5.0, sde_point},
        {"thin-film property suite and recipe absorption", 5.0, thinfilm_suite},
        {"tomography likelihood, recovery fidelity, loss inversion", 60.0,
         tomography_properties},
        {"oracle equivalence for herald and g2", 5.0, oracle_equivalence},
    };
    for (std::size_t i = 0; i < criteria.size(); ++i)
        run_criterion(static_cast<int>(i) + 1, criteria[i]);
    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all " << criteria.size() << " criteria passed" << std::endl;
    return 0;
}
