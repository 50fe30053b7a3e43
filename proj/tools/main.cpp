#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergolat/ergolat.hpp"

#include "config.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using ergolat::cli::ExperimentConfig;
using ergolat::cli::jsonv;

namespace {

void atomic_write(const fs::path& dir, const std::string& name, const std::string& content) {
    fs::create_directories(dir);
    const fs::path tmp = dir / (".tmp." + name);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, dir / name);
}

void write_json_file(const fs::path& dir, const std::string& name, const jsonv& j) {
    atomic_write(dir, name, j.dump(2) + "\n");
}

void maybe_print(bool json_flag, const jsonv& j) {
    if (json_flag) std::cout << j.dump(2) << "\n";
}

bool within_one_ulp(double a, double b) {
    return a == b || a == std::nextafter(b, a);
}

ergolat::Realization base_realization(const ExperimentConfig& cfg) {
    return ergolat::Realization{ergolat::SequenceStream(cfg.master_seed, cfg.q), 0.0, cfg.bump};
}

std::vector<ergolat::CylinderEvent> make_events(const ergolat::RngKey& key,
                                                std::int64_t n_events) {
    std::vector<ergolat::CylinderEvent> events;
    std::uint64_t ctr = 0;
    for (std::int64_t i = 0; i < n_events; ++i) {
        ergolat::CylinderEvent e;
        const int want = 1 + static_cast<int>(key.raw(ctr++) % 3);
        while (static_cast<int>(e.constraints.size()) < want) {
            const auto site = static_cast<std::int64_t>(key.raw(ctr) % 7) - 3;
            const int spin = key.unit(ctr + 1) < 0.5 ? -1 : 1;
            ctr += 2;
            e.constraints[site] = spin;
        }
        if (key.unit(ctr++) >= 0.5) {
            const double len = 0.25 + 0.5 * key.unit(ctr++);
            const double lo = (1.0 - len) * key.unit(ctr++);
            e.theta_lo = lo;
            e.theta_hi = lo + len;
        }
        e.validate();
        events.push_back(std::move(e));
    }
    return events;
}

jsonv event_to_json(const ergolat::CylinderEvent& e) {
    jsonv sites = jsonv::array();
    for (const auto& [site, spin] : e.constraints)
        sites.push_back(jsonv{{"site", site}, {"spin", spin}});
    return jsonv{{"constraints", sites}, {"theta_lo", e.theta_lo}, {"theta_hi", e.theta_hi}};
}

// ---------------------------------------------------------------------------
// generate: sample the configured realization and write its trace.

int cmd_generate(const ExperimentConfig& cfg, bool json_flag) {
    const ergolat::Realization w = base_realization(cfg);
    const double lo = cfg.scan.window_lo, hi = cfg.scan.window_hi, step = cfg.grid_step;
    const auto n_steps = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));

    std::string csv = "t,omega\n";
    std::vector<std::pair<double, double>> points;
    points.reserve(static_cast<std::size_t>(n_steps) + 1);
    for (std::int64_t j = 0; j <= n_steps; ++j) {
        const double t = lo + static_cast<double>(j) * step;
        const double v = w(t);
        csv += ergolat::format_g17(t) + "," + ergolat::format_g17(v) + "\n";
        points.emplace_back(t, v);
    }

    jsonv doc;
    doc["schema_version"] = ergolat::cli::kSchemaVersion;
    doc["command"] = "generate";
    doc["config"] = ergolat::cli::emit_config(cfg);
    doc["realization"] = w;
    doc["trace_rows"] = n_steps + 1;

    atomic_write(cfg.out_dir, "trace.csv", csv);
    if (cfg.emit_plots)
        atomic_write(cfg.out_dir, "trace.svg",
                     ergolat::cli::line_plot("lattice-sum realization", "t", "omega(t)",
                                             {{"omega", points}}));
    write_json_file(cfg.out_dir, "generate.json", doc);
    maybe_print(json_flag, doc);
    return 0;
}

// ---------------------------------------------------------------------------
// verify: the six property suites, each a pass/fail row in the summary.

jsonv suite_bijection(const ExperimentConfig& cfg) {
    const ergolat::RngKey key = ergolat::RngKey{cfg.master_seed}.sub(0xb17ec7);
    const std::int64_t N = 2000;
    bool pass = true;
    std::int64_t exact_failures = 0, ulp_failures = 0;
    for (std::int64_t i = 0; i < N; ++i) {
        const std::uint64_t seed = key.raw(static_cast<std::uint64_t>(3 * i));
        const double delta = -10.0 + 20.0 * key.unit(static_cast<std::uint64_t>(3 * i + 1));
        const ergolat::Realization w{ergolat::SequenceStream(seed, cfg.q), delta, cfg.bump};
        const ergolat::ProductPoint p = ergolat::h_forward(w);
        const ergolat::Realization w2 = ergolat::h_inverse(p, cfg.bump);
        if (!(ergolat::h_forward(w2) == p)) ++exact_failures;
        for (int jg = 0; jg <= 20; ++jg) {
            const double t = -10.0 + static_cast<double>(jg);
            if (!within_one_ulp(ergolat::realization_eval(w2, t), ergolat::realization_eval(w, t)))
                ++ulp_failures;
        }
    }
    pass = exact_failures == 0 && ulp_failures == 0;
    return jsonv{{"name", "bijection"},
                 {"pass", pass},
                 {"samples", N},
                 {"exact_failures", exact_failures},
                 {"ulp_failures", ulp_failures}};
}

jsonv suite_conjugacy(const ExperimentConfig& cfg) {
    const ergolat::RngKey key = ergolat::RngKey{cfg.master_seed}.sub(0xc07199);
    const std::int64_t N = 2000;
    std::int64_t stream_failures = 0;
    double max_theta_diff = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        const std::uint64_t seed = key.raw(static_cast<std::uint64_t>(3 * i));
        const double theta = key.unit(static_cast<std::uint64_t>(3 * i + 1));
        const double z = -20.0 + 40.0 * key.unit(static_cast<std::uint64_t>(3 * i + 2));
        const ergolat::ProductPoint p{ergolat::SequenceStream(seed, cfg.q), theta};
        const ergolat::Realization w = ergolat::h_inverse(p, cfg.bump);
        const ergolat::ProductPoint via_fn = ergolat::h_forward(ergolat::t_apply(z, w));
        const ergolat::ProductPoint via_skew = ergolat::s_apply(z, p);
        if (!(via_fn.stream == via_skew.stream)) ++stream_failures;
        max_theta_diff = std::max(max_theta_diff, std::abs(via_fn.theta - via_skew.theta));
    }
    const bool pass = stream_failures == 0 && max_theta_diff <= 1e-12;
    return jsonv{{"name", "conjugacy"},
                 {"pass", pass},
                 {"samples", N},
                 {"stream_failures", stream_failures},
                 {"max_theta_diff", max_theta_diff}};
}

jsonv suite_group_law(const ExperimentConfig& cfg) {
    const ergolat::RngKey key = ergolat::RngKey{cfg.master_seed}.sub(0x96a0b1);
    const std::int64_t N = 2000;
    std::int64_t stream_failures = 0;
    double max_theta_diff = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        const std::uint64_t seed = key.raw(static_cast<std::uint64_t>(4 * i));
        const double theta = key.unit(static_cast<std::uint64_t>(4 * i + 1));
        const double z1 = -20.0 + 40.0 * key.unit(static_cast<std::uint64_t>(4 * i + 2));
        const double z2 = -20.0 + 40.0 * key.unit(static_cast<std::uint64_t>(4 * i + 3));
        const ergolat::ProductPoint p{ergolat::SequenceStream(seed, cfg.q), theta};
        const ergolat::ProductPoint joint = ergolat::s_apply(z1 + z2, p);
        const ergolat::ProductPoint stepwise = ergolat::s_apply(z2, ergolat::s_apply(z1, p));
        if (!(joint.stream == stepwise.stream)) ++stream_failures;
        max_theta_diff = std::max(max_theta_diff, std::abs(joint.theta - stepwise.theta));
    }
    const bool pass = stream_failures == 0 && max_theta_diff <= 1e-12;
    return jsonv{{"name", "group_law"},
                 {"pass", pass},
                 {"samples", N},
                 {"stream_failures", stream_failures},
                 {"max_theta_diff", max_theta_diff}};
}

jsonv suite_invariance(const ExperimentConfig& cfg) {
    const ergolat::RngKey key = ergolat::RngKey{cfg.master_seed};
    const auto events = make_events(key.sub(0xe4e271), cfg.invariance.n_events);
    const ergolat::RngKey run_seeds = key.sub(0x147a0b);
    double min_pvalue = 1.0;
    double max_freq_gap = 0.0;
    std::uint64_t run = 0;
    try {
        for (const auto& e : events)
            for (double z : cfg.invariance.shifts) {
                const ergolat::InvarianceReport rep = ergolat::measure_preservation_test(
                    e, z, cfg.q, cfg.invariance.n_samples, run_seeds.raw(run++));
                min_pvalue = std::min(min_pvalue, rep.chi2_pvalue);
                max_freq_gap = std::max({max_freq_gap,
                                         std::abs(rep.freq_before - rep.exact_prob),
                                         std::abs(rep.freq_after - rep.exact_prob)});
            }
    } catch (const std::invalid_argument& err) {
        return jsonv{{"name", "invariance"}, {"pass", false}, {"error", err.what()}};
    }
    const bool pass = min_pvalue > 1e-3;
    return jsonv{{"name", "invariance"},
                 {"pass", pass},
                 {"events", cfg.invariance.n_events},
                 {"shifts", cfg.invariance.shifts},
                 {"n_samples", cfg.invariance.n_samples},
                 {"min_pvalue", min_pvalue},
                 {"max_freq_gap", max_freq_gap}};
}

jsonv suite_period_equivalence(const ExperimentConfig& cfg) {
    const ergolat::RngKey key = ergolat::RngKey{cfg.master_seed}.sub(0xbe10d5);
    const std::int64_t N = 200;
    const std::int64_t len = 64;
    std::int64_t mismatches = 0;
    for (std::int64_t i = 0; i < N; ++i) {
        const ergolat::SequenceStream s(key.raw(static_cast<std::uint64_t>(i)), cfg.q);
        const ergolat::SequenceWindow w = ergolat::SequenceWindow::from_stream(s, 0, len);
        const ergolat::PeriodReport exact = ergolat::detect_exact_periods(w, len / 2);
        for (double eps : {0.5, 1.0, 1.5, 1.99}) {
            const ergolat::PeriodReport almost =
                ergolat::detect_almost_periods_seq(w, eps, len / 2);
            if (almost.periods != exact.periods) ++mismatches;
        }
    }
    return jsonv{{"name", "period_equivalence"},
                 {"pass", mismatches == 0},
                 {"windows", N},
                 {"mismatches", mismatches}};
}

jsonv suite_equicontinuity(const ExperimentConfig& cfg) {
    const ergolat::RngKey key = ergolat::RngKey{cfg.master_seed}.sub(0xe9c071);
    const std::int64_t N = 200;
    bool pass = true;
    double worst_margin = 0.0; // sup_diff - modulus, most positive is worst
    for (double s : {0.01, 0.05, 0.1}) {
        const double bound = ergolat::equicontinuity_modulus(cfg.bump, s);
        for (std::int64_t i = 0; i < N; ++i) {
            const std::uint64_t seed = key.raw(static_cast<std::uint64_t>(2 * i));
            const double delta = -5.0 + 10.0 * key.unit(static_cast<std::uint64_t>(2 * i + 1));
            const ergolat::Realization w{ergolat::SequenceStream(seed, cfg.q), delta, cfg.bump};
            double sup = 0.0;
            for (int jg = 0; jg < 50; ++jg) {
                const double t =
                    -20.0 + 40.0 * key.sub(0x717e5).unit(
                                        static_cast<std::uint64_t>(i * 50 + jg));
                sup = std::max(sup, std::abs(w(t + s) - w(t)));
            }
            worst_margin = std::max(worst_margin, sup - bound);
            // +1e-12 absorbs the rounding of t+s; real violations are ~1e-2.
            if (sup > bound + 1e-12) pass = false;
        }
    }
    return jsonv{{"name", "equicontinuity"},
                 {"pass", pass},
                 {"samples", N},
                 {"worst_margin", worst_margin}};
}

int cmd_verify(const ExperimentConfig& cfg, bool json_flag) {
    jsonv suites = jsonv::array();
    suites.push_back(suite_bijection(cfg));
    suites.push_back(suite_conjugacy(cfg));
    suites.push_back(suite_group_law(cfg));
    suites.push_back(suite_invariance(cfg));
    suites.push_back(suite_period_equivalence(cfg));
    suites.push_back(suite_equicontinuity(cfg));

    bool all = true;
    for (const auto& s : suites) all = all && s.at("pass").get<bool>();

    jsonv doc;
    doc["schema_version"] = ergolat::cli::kSchemaVersion;
    doc["command"] = "verify";
    doc["config"] = ergolat::cli::emit_config(cfg);
    doc["suites"] = suites;
    doc["pass"] = all;
    write_json_file(cfg.out_dir, "verify.json", doc);
    maybe_print(json_flag, doc);
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// decompose: the flagship experiment — project onto lattice harmonics and
// watch the residual refuse to vanish.

int cmd_decompose(const ExperimentConfig& cfg, bool json_flag) {
    const ergolat::DecompositionReport rep = ergolat::wstar_membership_experiment(
        cfg.master_seed, cfg.q, cfg.orders, cfg.radius(), cfg.bump, cfg.grid_step);

    jsonv doc;
    doc["schema_version"] = ergolat::cli::kSchemaVersion;
    doc["command"] = "decompose";
    doc["config"] = ergolat::cli::emit_config(cfg);
    doc["report"] = rep;
    if (!cfg.frequencies.probes.empty()) {
        const ergolat::Realization w = base_realization(cfg);
        doc["off_module_probes"] =
            ergolat::spectrum_scan(w, cfg.frequencies.probes, cfg.radius(), cfg.grid_step);
    }

    std::string csv = "K,residual_l1,residual_b2,predicted_l1\n";
    for (const auto& e : rep.curve)
        csv += std::to_string(e.K) + "," + ergolat::format_g17(e.residual_l1) + "," +
               ergolat::format_g17(e.residual_b2) + "," + ergolat::format_g17(rep.predicted_l1) +
               "\n";

    write_json_file(cfg.out_dir, "decomposition.json", doc);
    atomic_write(cfg.out_dir, "residual_curve.csv", csv);
    if (cfg.emit_plots) {
        std::vector<std::pair<double, double>> l1, b2, pred_l1, pred_b2;
        for (const auto& e : rep.curve) {
            l1.emplace_back(static_cast<double>(e.K), e.residual_l1);
            b2.emplace_back(static_cast<double>(e.K), e.residual_b2);
        }
        const auto k_lo = static_cast<double>(rep.curve.front().K);
        const auto k_hi = static_cast<double>(rep.curve.back().K);
        pred_l1 = {{k_lo, rep.predicted_l1}, {k_hi, rep.predicted_l1}};
        pred_b2 = {{k_lo, rep.predicted_b2}, {k_hi, rep.predicted_b2}};
        atomic_write(cfg.out_dir, "decomposition.svg",
                     ergolat::cli::line_plot("residual vs truncation order", "K", "residual",
                                             {{"residual_l1", l1},
                                              {"predicted_l1", pred_l1},
                                              {"residual_b2", b2},
                                              {"predicted_b2", pred_b2}}));
    }
    maybe_print(json_flag, doc);
    return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scan: almost-period scan of the realization over the configured window.

int cmd_scan(const ExperimentConfig& cfg, bool json_flag) {
    const ergolat::Realization w = base_realization(cfg);
    std::vector<double> p_grid;
    for (std::int64_t p = 1; p <= cfg.scan.p_max; ++p)
        p_grid.push_back(static_cast<double>(p));
    const ergolat::FnAlmostPeriodReport rep = ergolat::almost_period_scan_fn(
        w, cfg.scan.eps, cfg.scan.window_lo, cfg.scan.window_hi, p_grid, cfg.grid_step);

    jsonv doc;
    doc["schema_version"] = ergolat::cli::kSchemaVersion;
    doc["command"] = "scan";
    doc["config"] = ergolat::cli::emit_config(cfg);
    doc["report"] = rep;
    write_json_file(cfg.out_dir, "scan.json", doc);
    maybe_print(json_flag, doc);
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum: Bohr coefficients on the harmonic set plus probe frequencies.

int cmd_spectrum(const ExperimentConfig& cfg, bool json_flag) {
    const ergolat::Realization w = base_realization(cfg);
    std::vector<double> lambdas;
    for (std::int64_t k = -cfg.frequencies.max_harmonic; k <= cfg.frequencies.max_harmonic; ++k)
        lambdas.push_back(2.0 * std::numbers::pi * static_cast<double>(k));
    for (double p : cfg.frequencies.probes) lambdas.push_back(p);
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

    const ergolat::SpectrumScan scan =
        ergolat::spectrum_scan(w, lambdas, cfg.radius(), cfg.grid_step);

    std::string csv = "lambda,re,im,abs,stderr\n";
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i)
        csv += ergolat::format_g17(scan.lambdas[i]) + "," +
               ergolat::format_g17(scan.coefficients[i].real()) + "," +
               ergolat::format_g17(scan.coefficients[i].imag()) + "," +
               ergolat::format_g17(std::abs(scan.coefficients[i])) + "," +
               ergolat::format_g17(scan.stderrs[i]) + "\n";

    jsonv doc;
    doc["schema_version"] = ergolat::cli::kSchemaVersion;
    doc["command"] = "spectrum";
    doc["config"] = ergolat::cli::emit_config(cfg);
    doc["report"] = scan;
    write_json_file(cfg.out_dir, "spectrum.json", doc);
    atomic_write(cfg.out_dir, "spectrum.csv", csv);
    if (cfg.emit_plots) {
        std::vector<std::pair<double, double>> mags;
        for (std::size_t i = 0; i < scan.lambdas.size(); ++i)
            mags.emplace_back(scan.lambdas[i], std::abs(scan.coefficients[i]));
        atomic_write(cfg.out_dir, "spectrum.svg",
                     ergolat::cli::line_plot("coefficient magnitudes", "lambda", "|a(lambda)|",
                                             {{"abs", mags}}));
    }
    maybe_print(json_flag, doc);
    return 0;
}

// ---------------------------------------------------------------------------
// invariance: standalone empirical measure-preservation report.

int cmd_invariance(const ExperimentConfig& cfg, bool json_flag) {
    const ergolat::RngKey key = ergolat::RngKey{cfg.master_seed};
    const auto events = make_events(key.sub(0xe4e271), cfg.invariance.n_events);
    const ergolat::RngKey run_seeds = key.sub(0x147a0b);

    jsonv doc;
    doc["schema_version"] = ergolat::cli::kSchemaVersion;
    doc["command"] = "invariance";
    doc["config"] = ergolat::cli::emit_config(cfg);

    jsonv rows = jsonv::array();
    double min_pvalue = 1.0;
    std::uint64_t run = 0;
    try {
        for (const auto& e : events)
            for (double z : cfg.invariance.shifts) {
                const ergolat::InvarianceReport rep = ergolat::measure_preservation_test(
                    e, z, cfg.q, cfg.invariance.n_samples, run_seeds.raw(run++));
                jsonv row = rep;
                row["event"] = event_to_json(e);
                rows.push_back(std::move(row));
                min_pvalue = std::min(min_pvalue, rep.chi2_pvalue);
            }
    } catch (const std::invalid_argument& err) {
        doc["error"] = err.what();
        doc["pass"] = false;
        write_json_file(cfg.out_dir, "invariance.json", doc);
        maybe_print(json_flag, doc);
        return 1;
    }
    doc["rows"] = rows;
    doc["min_pvalue"] = min_pvalue;
    doc["pass"] = min_pvalue > 1e-3;
    write_json_file(cfg.out_dir, "invariance.json", doc);
    maybe_print(json_flag, doc);
    return doc["pass"].get<bool>() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice-sum shift dynamics laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    std::string out_override;
    bool json_flag = false;
    app.add_option("--config", config_path, "experiment config JSON file");
    CLI::Option* seed_opt = app.add_option("--seed", seed_override, "override the master seed");
    app.add_option("--out", out_override, "override the output directory");
    app.add_flag("--json", json_flag, "print the machine summary to stdout");

    for (const char* name : {"generate", "verify", "decompose", "scan", "spectrum", "invariance"})
        app.add_subcommand(name)->fallthrough();
    app.get_subcommand("generate")->description("sample a realization and write its trace");
    app.get_subcommand("verify")->description("run the structural property suites");
    app.get_subcommand("decompose")->description("harmonic projection residual experiment");
    app.get_subcommand("scan")->description("almost-period scan of the realization");
    app.get_subcommand("spectrum")->description("Bohr coefficients on harmonics and probes");
    app.get_subcommand("invariance")->description("empirical measure-preservation test");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = ergolat::cli::load_config_file(config_path);
        if (seed_opt->count() > 0) cfg.master_seed = seed_override;
        if (!out_override.empty()) cfg.out_dir = out_override;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand("generate")) return cmd_generate(cfg, json_flag);
        if (app.got_subcommand("verify")) return cmd_verify(cfg, json_flag);
        if (app.got_subcommand("decompose")) return cmd_decompose(cfg, json_flag);
        if (app.got_subcommand("scan")) return cmd_scan(cfg, json_flag);
        if (app.got_subcommand("spectrum")) return cmd_spectrum(cfg, json_flag);
        if (app.got_subcommand("invariance")) return cmd_invariance(cfg, json_flag);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
