#include "retint/pipeline.hpp"

#include "retint/csv_io.hpp"
#include "retint/ingest.hpp"
#include "retint/seeding.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace retint {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool is_volatility_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open input '" + path + "'");
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    return header == "day,slot,v";
}

class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir_.string() + "'");
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw Error(ErrorKind::io, "cannot write '" + (dir_ / name).string() + "'");
        body(out);
        if (!out) throw Error(ErrorKind::io, "error while writing '" + (dir_ / name).string() + "'");
        written_.push_back(name);
    }

    [[nodiscard]] const std::vector<std::string>& written() const noexcept { return written_; }
    [[nodiscard]] const fs::path& dir() const noexcept { return dir_; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
};

json line_json(const LineFit& f) {
    return {{"slope", f.slope}, {"stderr", f.slope_stderr}, {"points", f.points}};
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config: return 2;
        case ErrorKind::io:
        case ErrorKind::format:
        case ErrorKind::empty_series:
        case ErrorKind::degenerate: return 3;
        default: return 4;
    }
}

LoadedSeries load_series(const RunConfig& config) {
    if (config.inputs.empty()) throw Error(ErrorKind::config, "no input files given");
    LoadedSeries loaded;
    if (config.inputs.size() == 1 && is_volatility_csv(config.inputs.front())) {
        loaded.volatility = read_volatility_csv_file(config.inputs.front());
        loaded.raw_returns = loaded.volatility.size();
        return loaded;
    }
    const TradingCalendar cal = config.calendar.empty() ? TradingCalendar::chinese_default()
                                                        : TradingCalendar::from_json_file(config.calendar);
    const TickFormat format{config.utc_offset_minutes};
    std::vector<TickRecord> ticks;
    for (const auto& path : config.inputs) {
        if (is_volatility_csv(path)) {
            throw Error(ErrorKind::format, "'" + path + "' is a volatility CSV; it cannot be mixed with tick inputs");
        }
        auto parsed = parse_ticks_file(path, format);
        ticks.insert(ticks.end(), parsed.ticks.begin(), parsed.ticks.end());
    }
    const MinuteSeries minutes = sample_minutely(ticks, cal);
    const VolSeries raw = compute_volatility(minutes, cal, config.drop_overnight);
    IntradayPattern pattern = intraday_pattern(raw);
    loaded.volatility = normalize(deseasonalize(raw, pattern));
    loaded.pattern = std::move(pattern);
    loaded.raw_returns = raw.size();
    return loaded;
}

std::vector<IntervalSample> threshold_samples(const NormVolSeries& v, const RunConfig& config) {
    std::vector<IntervalSample> samples;
    samples.reserve(config.thresholds.size());
    for (double q : config.thresholds) samples.push_back(extract_intervals(v, q, config.cross_day));
    return samples;
}

std::vector<FitReport> fit_thresholds(std::span<const IntervalSample> samples, const RunConfig& config,
                                      unsigned jobs) {
    std::vector<FitReport> reports;
    for (const auto& s : samples) {
        const std::vector<double> x = s.scaled();
        const SEModel model =
            config.fit_mode == FitMode::mle ? fit_mle(x) : fit_lsq(scaled_pdf(s, config.bins_per_decade));
        BootstrapOptions options;
        options.n_boot = config.n_boot;
        options.seed = derive_seed(config.seed, "bootstrap/q=" + format_number(s.threshold));
        options.refit = config.refit;
        options.jobs = jobs;
        FitReport report = bootstrap_pvalue(x, model, options);
        report.threshold = s.threshold;
        report.mode = config.fit_mode;
        reports.push_back(report);
    }
    return reports;
}

MomentBundle analyze_moments(const NormVolSeries& v, const RunConfig& config) {
    MomentBundle bundle;
    const std::vector<double> grid = config.q_grid();
    for (double m : config.moment_orders) bundle.curves.push_back(moment_curve(v, m, grid));
    for (double m : config.spectrum_orders) {
        bundle.spectrum.push_back({m, fit_alpha(moment_curve(v, m, grid), config.region())});
    }
    for (double n : config.ess_n) {
        for (double m : config.spectrum_orders) bundle.ess.push_back(ess_xi(v, m, n, grid, config.region()));
    }
    if (!config.mean_targets.empty() && !config.spectrum_orders.empty()) {
        bundle.by_order = moment_vs_order(v, config.mean_targets, config.spectrum_orders, config.threshold_tol);
    }
    return bundle;
}

std::string run_analyze(const RunConfig& config, unsigned jobs) {
    if (const auto issues = check_config(config); !issues.empty()) {
        throw Error(ErrorKind::config, issues.front().field + ": " + issues.front().message);
    }
    ArtifactWriter out(config.output_dir);
    json summary;
    summary["schema_version"] = kSummarySchemaVersion;
    summary["config"] = json::parse(config.to_json());
    summary["status"] = "ok";

    std::string stage;
    auto finish = [&] {
        summary["artifacts"] = out.written();
        const std::string text = summary.dump(2) + "\n";
        std::ofstream file(out.dir() / "summary.json", std::ios::binary);
        file << text;
        return text;
    };

    try {
        stage = "volatility";
        const LoadedSeries loaded = load_series(config);
        const NormVolSeries& v = loaded.volatility;
        out.write("volatility.csv", [&](std::ostream& os) { write_volatility_csv(os, v); });
        if (loaded.pattern) {
            out.write("volatility.json",
                      [&](std::ostream& os) { os << volatility_sidecar_json(*loaded.pattern, v.scale); });
        }
        summary["series"] = {{"length", v.size()}, {"sd", v.scale}, {"raw_returns", loaded.raw_returns}};

        stage = "intervals";
        const std::vector<IntervalSample> samples = threshold_samples(v, config);
        std::vector<ThresholdPdf> pdfs;
        std::vector<ThresholdCdf> cdfs;
        json thresholds = json::array();
        for (const auto& s : samples) {
            pdfs.emplace_back(s.threshold, scaled_pdf(s, config.bins_per_decade));
            cdfs.emplace_back(s.threshold, empirical_cdf(s));
            thresholds.push_back({{"q", s.threshold},
                                  {"exceedances", s.exceedances},
                                  {"intervals", s.size()},
                                  {"mean_interval", s.mean_interval}});
        }
        summary["thresholds"] = thresholds;
        out.write("intervals.csv", [&](std::ostream& os) { write_intervals_csv(os, samples); });
        out.write("pdf.csv", [&](std::ostream& os) { write_pdf_csv(os, pdfs); });
        out.write("cdf.csv", [&](std::ostream& os) { write_cdf_csv(os, cdfs); });

        stage = "ks-matrix";
        const KsMatrix matrix = ks_matrix(samples, config.cv_counts);
        out.write("ks_matrix.csv", [&](std::ostream& os) { write_ks_matrix_csv(os, matrix); });
        json pairs = json::array();
        for (const auto& p : matrix.pairs) {
            pairs.push_back({{"q_i", p.q_i},
                             {"q_j", p.q_j},
                             {"ks", p.result.statistic},
                             {"cv", p.result.critical},
                             {"m", p.result.m},
                             {"n", p.result.n},
                             {"decision", p.result.accept ? "accept" : "reject"}});
        }
        summary["ks"] = {{"pairs", pairs}, {"verdict", matrix.scaling() ? "scaling" : "multiscaling"}};
        summary["verdict"] = matrix.scaling() ? "scaling" : "multiscaling";

        stage = "fit";
        const std::vector<FitReport> fits = fit_thresholds(samples, config, jobs);
        out.write("fits.csv", [&](std::ostream& os) { write_fits_csv(os, fits); });
        out.write("fits.json", [&](std::ostream& os) { os << fit_reports_json(fits); });
        summary["fits"] = json::parse(fit_reports_json(fits));

        stage = "moments";
        const MomentBundle moments = analyze_moments(v, config);
        out.write("moment_curves.csv", [&](std::ostream& os) { write_moment_curves_csv(os, moments.curves); });
        out.write("alpha_spectrum.csv", [&](std::ostream& os) { write_alpha_spectrum_csv(os, moments.spectrum); });
        out.write("ess.csv", [&](std::ostream& os) { write_ess_csv(os, moments.ess); });
        out.write("moment_order.csv", [&](std::ostream& os) { write_moment_order_csv(os, moments.by_order); });
        json alpha = json::array();
        for (const auto& row : moments.spectrum) alpha.push_back({{"m", row.m}, {"fit", line_json(row.fit)}});
        json ess = json::array();
        for (const auto& r : moments.ess) {
            ess.push_back({{"m", r.m},
                           {"n", r.n},
                           {"xi", r.xi},
                           {"xi_stderr", r.xi_stderr},
                           {"alpha", r.alpha},
                           {"identity_gap", r.identity_gap},
                           {"points", r.points}});
        }
        summary["moments"] = {{"alpha", alpha}, {"ess", ess}};
    } catch (const Error& e) {
        summary["status"] = "failed";
        summary["failed_stage"] = stage;
        summary["error"] = e.what();
        summary["partial"] = true;
        finish();
        throw StageError(stage, e.kind(), e.what());
    } catch (const std::exception& e) {
        summary["status"] = "failed";
        summary["failed_stage"] = stage;
        summary["error"] = e.what();
        summary["partial"] = true;
        finish();
        throw StageError(stage, ErrorKind::domain, e.what());
    }
    return finish();
}

}  // namespace retint
