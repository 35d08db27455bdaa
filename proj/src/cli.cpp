#include "photonlab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>

#include "photonlab/csv.hpp"
#include "photonlab/errors.hpp"
#include "photonlab/fock.hpp"
#include "photonlab/homodyne.hpp"
#include "photonlab/snspd.hpp"
#include "photonlab/source.hpp"
#include "photonlab/svg.hpp"
#include "photonlab/thinfilm.hpp"
#include "photonlab/tomography.hpp"

namespace photonlab::cli {

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = "out";
    long seed = -1;  // -1: use the config value
    bool want_svg = false;
};

Config load_config(const CommonOptions& common) {
    std::string path = common.config_path;
    if (path.empty()) {
        const char* env = std::getenv("PHOTONLAB_CONFIG");
        require(env != nullptr && *env != '\0', "usage",
                "no --config given and PHOTONLAB_CONFIG is not set");
        path = env;
    }
    Config cfg = Config::from_file(path);
    if (common.seed >= 0) cfg.set("run", "seed", std::to_string(common.seed));
    return cfg;
}

std::uint64_t seed_of(const Config& cfg) {
    return static_cast<std::uint64_t>(cfg.get_int("run", "seed", 1));
}

std::string stamp(const Config& cfg) {
    return "config_hash=" + cfg.hash_hex() + " seed=" + std::to_string(seed_of(cfg));
}

// ---- stack-spectrum ----

int cmd_stack_spectrum(const CommonOptions& common) {
    const Config cfg = load_config(common);
    const auto stack = thinfilm::read_stack_file(
        cfg.resolve_path(cfg.get_string("thinfilm", "stack_file")));
    const auto table = thinfilm::MaterialTable::from_csv(
        cfg.resolve_path(cfg.get_string("thinfilm", "materials_file")));

    const double lo = cfg.get_double("thinfilm", "lambda_min_nm", 900.0);
    const double hi = cfg.get_double("thinfilm", "lambda_max_nm", 1300.0);
    const int points = static_cast<int>(cfg.get_int("thinfilm", "lambda_points", 401));
    const std::vector<double> grid = thinfilm::wavelength_grid(lo, hi, points);
    const std::vector<thinfilm::SpectrumPoint> spec = thinfilm::spectrum(stack, table, grid);

    const std::filesystem::path out = std::filesystem::path(common.out_dir) / "spectrum.csv";
    csv::Writer w(out);
    w.comment(stamp(cfg));
    w.header({"wavelength_nm", "R", "T", "A"});
    for (const auto& p : spec) w.row({p.wavelength_nm, p.R, p.T, p.A});
    w.commit();

    if (common.want_svg) {
        svg::Series r{"R", {}, {}}, t{"T", {}, {}}, a{"A", {}, {}};
        for (const auto& p : spec) {
            r.x.push_back(p.wavelength_nm); r.y.push_back(p.R);
            t.x.push_back(p.wavelength_nm); t.y.push_back(p.T);
            a.x.push_back(p.wavelength_nm); a.y.push_back(p.A);
        }
        svg::write_line_plot(std::filesystem::path(common.out_dir) / "spectrum.svg",
                             "Detector stack spectrum", "wavelength (nm)", "fraction",
                             {a, r, t});
    }
    std::cout << "wrote " << out.string() << " (" << spec.size() << " points)\n";
    return 0;
}

// ---- sde-curve ----

int cmd_sde_curve(const CommonOptions& common) {
    const Config cfg = load_config(common);
    const snspd::DetectorModel model = snspd::DetectorModel::from_config(cfg);
    const double bias_point = cfg.get_double("snspd", "bias_ua", 1.8);
    require(bias_point < model.switching_current_ua, "detector-latched",
            "configured bias point lies at or above the switching current");

    const int points = static_cast<int>(cfg.get_int("snspd", "sweep_points", 200));
    const double top = 0.995 * model.switching_current_ua;

    const std::filesystem::path out = std::filesystem::path(common.out_dir) / "sde_curve.csv";
    csv::Writer w(out);
    w.comment(stamp(cfg));
    w.header({"bias_ua", "sde", "dark_cps"});
    svg::Series es{"SDE", {}, {}}, ds{"dark (cps)", {}, {}};
    for (int i = 0; i < points; ++i) {
        const double bias = top * i / (points - 1.0);
        const double eff = snspd::sde(model, bias);
        const double dark = snspd::dark_rate(model, bias);
        w.row({bias, eff, dark});
        es.x.push_back(bias); es.y.push_back(eff);
        ds.x.push_back(bias); ds.y.push_back(dark);
    }
    w.commit();
    if (common.want_svg) {
        svg::write_line_plot(std::filesystem::path(common.out_dir) / "sde_curve.svg",
                             "SDE and dark counts vs bias", "bias (uA)", "SDE", {es});
        svg::write_line_plot(std::filesystem::path(common.out_dir) / "dark_curve.svg",
                             "Dark counts vs bias", "bias (uA)", "dark counts (cps)", {ds},
                             /*log_y=*/true);
    }
    std::cout << "wrote " << out.string() << "; sde(" << bias_point
              << " uA) = " << snspd::sde(model, bias_point) << ", dark = "
              << snspd::dark_rate(model, bias_point) << " cps\n";
    return 0;
}

// ---- herald ----

std::vector<double> parse_pump_list(const std::string& arg) {
    std::vector<double> pumps;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        pumps.push_back(std::stod(item));
    }
    require(!pumps.empty(), "usage", "empty pump list");
    return pumps;
}

int cmd_herald(const CommonOptions& common, const std::string& pump_arg) {
    const Config cfg = load_config(common);
    const source::OpoParams opo = source::OpoParams::from_config(cfg);
    const source::HeraldChain chain = source::HeraldChain::from_config(cfg);
    const int truncation = static_cast<int>(cfg.get_int("source", "truncation", 10));

    std::vector<double> pumps;
    if (!pump_arg.empty())
        pumps = parse_pump_list(pump_arg);
    else if (cfg.has("source", "pump_list_mw"))
        pumps = parse_pump_list(cfg.get_string("source", "pump_list_mw"));
    else
        pumps = {opo.pump_power_mw};

    const std::filesystem::path out = std::filesystem::path(common.out_dir) / "herald.csv";
    csv::Writer w(out);
    w.comment(stamp(cfg));
    w.header({"pump_mw", "rate_hz", "g2_exact", "g2_approx", "P0", "P1", "P2", "P3",
              "brightness"});
    svg::Series rate{"rate (Hz)", {}, {}}, g2{"g2(0)", {}, {}};
    for (double pump : pumps) {
        const double lambda = source::pair_amplitude(pump, opo);
        const source::HeraldResult r = source::herald(opo, chain, lambda, truncation);
        w.row({pump, r.heralding_rate_hz, r.g2_exact, r.g2_approx,
               r.conditional_state.prob(0), r.conditional_state.prob(1),
               r.conditional_state.prob(2), r.conditional_state.prob(3), r.brightness});
        rate.x.push_back(pump); rate.y.push_back(r.heralding_rate_hz);
        g2.x.push_back(pump); g2.y.push_back(r.g2_exact);
    }
    w.commit();
    if (common.want_svg) {
        svg::write_line_plot(std::filesystem::path(common.out_dir) / "herald_rate.svg",
                             "Heralding rate vs pump", "pump (mW)", "rate (Hz)", {rate});
        svg::write_line_plot(std::filesystem::path(common.out_dir) / "herald_g2.svg",
                             "Conditional g2(0) vs pump", "pump (mW)", "g2(0)", {g2});
    }
    std::cout << "wrote " << out.string() << " (" << pumps.size() << " pump values)\n";
    return 0;
}

}  // namespace

// ---- tomo-pipeline ----

TomoPipelineResult run_tomo_pipeline(const Config& cfg, const std::filesystem::path& out_dir,
                                     std::size_t n_samples, std::uint64_t seed) {
    const source::OpoParams opo = source::OpoParams::from_config(cfg);
    const source::HeraldChain chain = source::HeraldChain::from_config(cfg);
    const int source_truncation = static_cast<int>(cfg.get_int("source", "truncation", 10));

    const double lambda = cfg.has("source", "lambda_sq")
                              ? std::sqrt(cfg.get_double("source", "lambda_sq"))
                              : source::pair_amplitude(opo.pump_power_mw, opo);
    const source::HeraldResult heralded =
        source::herald(opo, chain, lambda, source_truncation);

    // The measured total detection loss is configured directly; the chain product
    // (effective_efficiency) agrees with it to about one percent.
    const homodyne::HomodyneChain hchain = homodyne::HomodyneChain::from_config(cfg);
    const double efficiency = cfg.has("homodyne", "detection_loss_total")
                                  ? 1.0 - cfg.get_double("homodyne", "detection_loss_total")
                                  : homodyne::effective_efficiency(hchain);
    require(efficiency > 0.0 && efficiency <= 1.0, "invalid-parameter",
            "detection efficiency must lie in (0, 1]");

    const fock::DensityMatrix rho =
        fock::DensityMatrix::from_distribution(heralded.conditional_state);

    const int n_phases = static_cast<int>(cfg.get_int("tomography", "phases", 12));
    std::vector<double> phases(static_cast<std::size_t>(n_phases));
    for (int i = 0; i < n_phases; ++i)
        phases[static_cast<std::size_t>(i)] = std::numbers::pi * i / n_phases;

    const homodyne::QuadratureBatch batch =
        homodyne::sample(rho, efficiency, n_samples, phases, seed);
    homodyne::write_batch(out_dir / "samples.csv", batch, cfg.hash_hex());

    tomography::MleOptions opts;
    opts.max_iters = static_cast<int>(cfg.get_int("tomography", "max_iters", 5000));
    opts.tol = cfg.get_double("tomography", "tol", 1e-10);
    opts.bins = static_cast<int>(cfg.get_int("tomography", "bins", 200));
    opts.diagonal_only = cfg.get_bool("tomography", "diagonal_only", true);
    const int truncation = static_cast<int>(cfg.get_int("tomography", "truncation", 10));

    const tomography::MleResult mle = tomography::mle_reconstruct(batch, truncation, opts);
    const fock::PhotonDistribution uncorrected = fock::diagonal(mle.rho);
    const fock::PhotonDistribution corrected = tomography::loss_correct(uncorrected, efficiency);

    auto write_dist = [&](const std::string& name, const fock::PhotonDistribution& d) {
        csv::Writer w(out_dir / name);
        w.comment(stamp(cfg));
        w.header({"n", "prob"});
        for (int n = 0; n <= d.truncation(); ++n) w.row({static_cast<double>(n), d.prob(n)});
        w.commit();
    };
    write_dist("distribution_uncorrected.csv", uncorrected);
    write_dist("distribution_corrected.csv", corrected);

    std::ostringstream report;
    report << "samples = " << n_samples << "\n";
    report << "seed = " << seed << "\n";
    report << "detection_efficiency = " << csv::format_double(efficiency) << "\n";
    report << "mle_iterations = " << mle.iterations << "\n";
    report << "mle_converged = " << (mle.converged ? "true" : "false") << "\n";
    report << "final_log_likelihood = " << csv::format_double(mle.log_likelihood.back()) << "\n";
    report << "loss_condition_number = "
           << csv::format_double(tomography::loss_condition_number(truncation, efficiency))
           << "\n";
    report << "uncorrected_P1 = " << csv::format_double(uncorrected.prob(1)) << "\n";
    report << "corrected_P1 = " << csv::format_double(corrected.prob(1)) << "\n";
    csv::write_text_atomic(out_dir / "report.txt", report.str());

    TomoPipelineResult out;
    out.uncorrected = uncorrected.probs();
    out.corrected = corrected.probs();
    out.detection_efficiency = efficiency;
    out.mle_iterations = mle.iterations;
    out.mle_converged = mle.converged;
    return out;
}

namespace {

int cmd_tomo_pipeline(const CommonOptions& common, long n_samples_arg) {
    const Config cfg = load_config(common);
    const std::size_t n_samples = static_cast<std::size_t>(
        n_samples_arg > 0 ? n_samples_arg : cfg.get_int("tomography", "n_samples", 100000));
    const TomoPipelineResult r =
        run_tomo_pipeline(cfg, common.out_dir, n_samples, seed_of(cfg));
    std::cout << "uncorrected P1 = " << r.uncorrected[1]
              << ", corrected P1 = " << r.corrected[1] << " (eta = "
              << r.detection_efficiency << ", " << r.mle_iterations << " iterations)\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"photonlab: detector-plus-source numerical laboratory"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string pump_arg;
    long n_samples_arg = -1;

    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--config", common.config_path,
                        "config file (falls back to $PHOTONLAB_CONFIG)");
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--seed", common.seed, "override the config seed");
        sub->add_flag("--svg", common.want_svg, "also emit SVG plots");
    };

    CLI::App* spectrum = app.add_subcommand("stack-spectrum",
                                            "R/T/A spectra of the detector stack");
    add_common(spectrum);
    CLI::App* sde = app.add_subcommand("sde-curve", "SDE and dark counts vs bias current");
    add_common(sde);
    CLI::App* herald = app.add_subcommand("herald", "heralded-source figures vs pump power");
    add_common(herald);
    herald->add_option("--pump", pump_arg, "comma-separated pump powers in mW");
    CLI::App* tomo = app.add_subcommand("tomo-pipeline",
                                        "herald, sample, reconstruct, loss-correct");
    add_common(tomo);
    tomo->add_option("--samples", n_samples_arg, "number of quadrature samples");

    std::vector<const char*> argv;
    argv.push_back("photonlab");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (spectrum->parsed()) return cmd_stack_spectrum(common);
        if (sde->parsed()) return cmd_sde_curve(common);
        if (herald->parsed()) return cmd_herald(common, pump_arg);
        if (tomo->parsed()) return cmd_tomo_pipeline(common, n_samples_arg);
        std::cerr << "error: usage: no subcommand\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace photonlab::cli
