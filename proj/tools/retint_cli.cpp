#include "retint/config.hpp"
#include "retint/csv_io.hpp"
#include "retint/error.hpp"
#include "retint/ingest.hpp"
#include "retint/pipeline.hpp"
#include "retint/seeding.hpp"
#include "retint/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Command-line overrides; every set field replaces the matching config key.
struct Overrides {
    std::string config_path;
    std::vector<std::string> inputs;
    std::optional<std::string> calendar;
    std::optional<std::string> output_dir;
    std::optional<int> utc_offset_minutes;
    std::vector<double> thresholds;
    std::optional<double> q_min, q_max, q_step;
    std::optional<int> bins_per_decade;
    std::optional<double> region_lo, region_hi;
    std::optional<long long> n_boot;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> fit_mode;
    std::vector<double> moment_orders, spectrum_orders, ess_n, mean_targets;
    std::optional<double> threshold_tol;
    std::optional<bool> drop_overnight, cross_day, refit;
    std::optional<std::string> cv_counts;
    unsigned jobs = 1;
};

void add_run_options(CLI::App& cmd, Overrides& o) {
    cmd.add_option("inputs", o.inputs, "tick CSVs (timestamp,price) or one volatility CSV (day,slot,v)");
    cmd.add_option("--config", o.config_path, "JSON config file; flags override its keys");
    cmd.add_option("--calendar", o.calendar, "calendar JSON (default: 09:30-11:30, 13:00-15:00)");
    cmd.add_option("-o,--output-dir", o.output_dir, "directory for artifacts");
    cmd.add_option("--utc-offset", o.utc_offset_minutes, "exchange offset from UTC in minutes");
    cmd.add_option("-q,--thresholds", o.thresholds, "thresholds in units of sd")->delimiter(',');
    cmd.add_option("--q-min", o.q_min);
    cmd.add_option("--q-max", o.q_max);
    cmd.add_option("--q-step", o.q_step);
    cmd.add_option("--bins-per-decade", o.bins_per_decade);
    cmd.add_option("--region-lo", o.region_lo, "lower <tau> bound of the regression region");
    cmd.add_option("--region-hi", o.region_hi, "upper <tau> bound of the regression region");
    cmd.add_option("--n-boot", o.n_boot, "bootstrap replicates");
    cmd.add_option("--seed", o.seed);
    cmd.add_option("--fit-mode", o.fit_mode, "mle or lsq");
    cmd.add_option("--moment-orders", o.moment_orders)->delimiter(',');
    cmd.add_option("--spectrum-orders", o.spectrum_orders)->delimiter(',');
    cmd.add_option("--ess-n", o.ess_n)->delimiter(',');
    cmd.add_option("--mean-targets", o.mean_targets)->delimiter(',');
    cmd.add_option("--threshold-tol", o.threshold_tol);
    cmd.add_flag("--drop-overnight,!--keep-overnight", o.drop_overnight);
    cmd.add_flag("--cross-day,!--no-cross-day", o.cross_day);
    cmd.add_flag("--refit,!--no-refit", o.refit);
    cmd.add_option("--cv-counts", o.cv_counts, "overlap or whole");
    cmd.add_option("-j,--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw retint::Error(retint::ErrorKind::config, "cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

retint::RunConfig resolve(const Overrides& o) {
    json doc = json::object();
    if (!o.config_path.empty()) {
        const std::string text = read_text(o.config_path);
        if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
            try {
                doc = json::parse(text);
            } catch (const json::exception& e) {
                throw retint::Error(retint::ErrorKind::config, "config '" + o.config_path + "': " + e.what());
            }
        }
        if (!doc.is_object()) throw retint::Error(retint::ErrorKind::config, "config must be a JSON object");
    }
    auto set = [&doc](const char* key, const auto& value) {
        if (value) doc[key] = *value;
    };
    auto set_list = [&doc](const char* key, const auto& values) {
        if (!values.empty()) doc[key] = values;
    };
    set_list("inputs", o.inputs);
    set("calendar", o.calendar);
    set("output_dir", o.output_dir);
    set("utc_offset_minutes", o.utc_offset_minutes);
    set_list("thresholds", o.thresholds);
    set("q_min", o.q_min);
    set("q_max", o.q_max);
    set("q_step", o.q_step);
    set("bins_per_decade", o.bins_per_decade);
    set("region_lo", o.region_lo);
    set("region_hi", o.region_hi);
    set("n_boot", o.n_boot);
    set("seed", o.seed);
    set("fit_mode", o.fit_mode);
    set_list("moment_orders", o.moment_orders);
    set_list("spectrum_orders", o.spectrum_orders);
    set_list("ess_n", o.ess_n);
    set_list("mean_targets", o.mean_targets);
    set("threshold_tol", o.threshold_tol);
    set("drop_overnight", o.drop_overnight);
    set("cross_day", o.cross_day);
    set("refit", o.refit);
    set("cv_counts", o.cv_counts);

    const retint::ConfigResult result = retint::validate_config(doc.dump());
    if (!result.ok()) throw retint::Error(retint::ErrorKind::config, "invalid configuration\n" + result.describe());
    return *result.config;
}

/// Writes one artifact into the output directory and reports its path.
void emit(const retint::RunConfig& config, const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw retint::Error(retint::ErrorKind::io, "cannot create output directory '" + dir.string() + "'");
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw retint::Error(retint::ErrorKind::io, "cannot write '" + path.string() + "'");
    body(out);
    if (!out) throw retint::Error(retint::ErrorKind::io, "error while writing '" + path.string() + "'");
    std::cout << path.string() << "\n";
}

std::vector<retint::IntervalSample> samples_for(const retint::RunConfig& config) {
    return retint::threshold_samples(retint::load_series(config).volatility, config);
}

int cmd_volatility(const Overrides& o) {
    const auto config = resolve(o);
    const auto loaded = retint::load_series(config);
    emit(config, "volatility.csv", [&](std::ostream& os) { retint::write_volatility_csv(os, loaded.volatility); });
    if (loaded.pattern) {
        emit(config, "volatility.json", [&](std::ostream& os) {
            os << retint::volatility_sidecar_json(*loaded.pattern, loaded.volatility.scale);
        });
    }
    return 0;
}

int cmd_intervals(const Overrides& o) {
    const auto config = resolve(o);
    const auto samples = samples_for(config);
    std::vector<retint::ThresholdPdf> pdfs;
    std::vector<retint::ThresholdCdf> cdfs;
    for (const auto& s : samples) {
        pdfs.emplace_back(s.threshold, retint::scaled_pdf(s, config.bins_per_decade));
        cdfs.emplace_back(s.threshold, retint::empirical_cdf(s));
    }
    emit(config, "intervals.csv", [&](std::ostream& os) { retint::write_intervals_csv(os, samples); });
    emit(config, "pdf.csv", [&](std::ostream& os) { retint::write_pdf_csv(os, pdfs); });
    emit(config, "cdf.csv", [&](std::ostream& os) { retint::write_cdf_csv(os, cdfs); });
    return 0;
}

int cmd_ks_matrix(const Overrides& o) {
    const auto config = resolve(o);
    const auto matrix = retint::ks_matrix(samples_for(config), config.cv_counts);
    emit(config, "ks_matrix.csv", [&](std::ostream& os) { retint::write_ks_matrix_csv(os, matrix); });
    std::cout << "verdict: " << (matrix.scaling() ? "scaling" : "multiscaling") << "\n";
    return 0;
}

int cmd_fit(const Overrides& o) {
    const auto config = resolve(o);
    const auto fits = retint::fit_thresholds(samples_for(config), config, o.jobs);
    emit(config, "fits.csv", [&](std::ostream& os) { retint::write_fits_csv(os, fits); });
    emit(config, "fits.json", [&](std::ostream& os) { os << retint::fit_reports_json(fits); });
    return 0;
}

int cmd_moments(const Overrides& o) {
    const auto config = resolve(o);
    const auto bundle = retint::analyze_moments(retint::load_series(config).volatility, config);
    emit(config, "moment_curves.csv", [&](std::ostream& os) { retint::write_moment_curves_csv(os, bundle.curves); });
    emit(config, "alpha_spectrum.csv", [&](std::ostream& os) { retint::write_alpha_spectrum_csv(os, bundle.spectrum); });
    emit(config, "ess.csv", [&](std::ostream& os) { retint::write_ess_csv(os, bundle.ess); });
    emit(config, "moment_order.csv", [&](std::ostream& os) { retint::write_moment_order_csv(os, bundle.by_order); });
    return 0;
}

int cmd_analyze(const Overrides& o) {
    const auto config = resolve(o);
    const std::string summary = retint::run_analyze(config, o.jobs);
    const auto doc = json::parse(summary);
    std::cout << "verdict: " << doc.value("verdict", "unknown") << "\n";
    std::cout << (fs::path(config.output_dir) / "summary.json").string() << "\n";
    return 0;
}

struct SynthOptions {
    std::string kind = "iid_gaussian_abs";
    std::size_t n = 140000;
    std::uint64_t seed = 1;
    double se_gamma = 0.38;
    double se_mean = 10.0;
    std::string source;
    std::string out;
    std::string format = "ticks";
    std::string calendar;
    std::string start = "2004-01-05";
    double return_scale = 1e-3;
};

int cmd_synth(const SynthOptions& s) {
    retint::SynthSpec spec;
    spec.kind = retint::parse_synth_kind(s.kind);
    spec.n = s.n;
    spec.seed = s.seed;
    spec.se_gamma = s.se_gamma;
    spec.se_mean_interval = s.se_mean;
    spec.source_path = s.source;

    std::optional<retint::NormVolSeries> source;
    if (spec.kind == retint::SynthKind::shuffled_from_file) {
        if (s.source.empty()) throw retint::Error(retint::ErrorKind::config, "--source is required for shuffled_from_file");
        retint::RunConfig c;
        c.inputs = {s.source};
        c.calendar = s.calendar;
        source = retint::load_series(c).volatility;
    }
    const retint::NormVolSeries v = retint::generate(spec, source ? &*source : nullptr);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!s.out.empty() && s.out != "-") {
        file.open(s.out, std::ios::binary);
        if (!file) throw retint::Error(retint::ErrorKind::io, "cannot write '" + s.out + "'");
        out = &file;
    }
    if (s.format == "volatility") {
        retint::write_volatility_csv(*out, v);
    } else {
        const auto cal = s.calendar.empty() ? retint::TradingCalendar::chinese_default()
                                            : retint::TradingCalendar::from_json_file(s.calendar);
        std::int64_t start = 0;
        if (!retint::parse_timestamp(s.start, 0, start)) {
            throw retint::Error(retint::ErrorKind::config, "bad --start date '" + s.start + "'");
        }
        const auto ms = retint::prices_from_volatility(v, cal, start / 86400, retint::derive_seed(s.seed, "synth/prices"),
                                                       s.return_scale);
        retint::write_minute_csv(*out, ms, cal);
    }
    if (!*out) throw retint::Error(retint::ErrorKind::io, "error while writing synthetic data");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Return-interval scaling analysis of high-frequency volatility"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "retint 0.1.0");

    Overrides o;
    SynthOptions s;
    std::function<int()> action;

    auto* synth = app.add_subcommand("synth", "generate synthetic data with known interval statistics");
    synth->add_option("--kind", s.kind, "iid_gaussian_abs | shuffled_from_file | se_intervals")->capture_default_str();
    synth->add_option("-n,--length", s.n, "number of volatility values")->capture_default_str();
    synth->add_option("--seed", s.seed)->capture_default_str();
    synth->add_option("--se-gamma", s.se_gamma, "stretching exponent for se_intervals")->capture_default_str();
    synth->add_option("--se-mean", s.se_mean, "mean event gap for se_intervals")->capture_default_str();
    synth->add_option("--source", s.source, "series to shuffle (tick or volatility CSV)");
    synth->add_option("--format", s.format, "ticks (timestamp,price) or volatility (day,slot,v)")
        ->check(CLI::IsMember({"ticks", "volatility"}))
        ->capture_default_str();
    synth->add_option("--calendar", s.calendar, "calendar JSON for tick output");
    synth->add_option("--start", s.start, "first trading date of tick output")->capture_default_str();
    synth->add_option("--return-scale", s.return_scale, "absolute log return per unit volatility")
        ->capture_default_str();
    synth->add_option("-o,--out", s.out, "output file (default stdout)");
    synth->callback([&] { action = [&] { return cmd_synth(s); }; });

    const std::vector<std::pair<const char*, std::pair<const char*, int (*)(const Overrides&)>>> commands{
        {"volatility", {"normalized volatility from ticks", cmd_volatility}},
        {"intervals", {"return intervals, log-binned PDFs and CDFs", cmd_intervals}},
        {"ks-matrix", {"pairwise two-sample KS across thresholds", cmd_ks_matrix}},
        {"fit", {"stretched-exponential fits with bootstrap p-values", cmd_fit}},
        {"moments", {"moment curves, alpha spectrum and ESS exponents", cmd_moments}},
        {"analyze", {"run every stage and write summary.json", cmd_analyze}},
    };
    for (const auto& [name, info] : commands) {
        auto* cmd = app.add_subcommand(name, info.first);
        add_run_options(*cmd, o);
        auto fn = info.second;
        cmd->callback([&action, &o, fn] { action = [&o, fn] { return fn(o); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action();
    } catch (const retint::StageError& e) {
        std::cerr << "retint: stage " << e.stage() << " failed (" << retint::to_string(e.kind()) << "): " << e.what()
                  << "\n";
        return retint::exit_code_for(e.kind());
    } catch (const retint::Error& e) {
        std::cerr << "retint: " << retint::to_string(e.kind()) << ": " << e.what() << "\n";
        return retint::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "retint: " << e.what() << "\n";
        return 4;
    }
}
