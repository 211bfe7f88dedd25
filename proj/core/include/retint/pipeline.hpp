#pragma once

#include "retint/config.hpp"
#include "retint/error.hpp"
#include "retint/intervals.hpp"
#include "retint/kstest.hpp"
#include "retint/moments.hpp"
#include "retint/semodel.hpp"
#include "retint/volatility.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace retint {

/// Version of the summary.json layout written by run_analyze.
inline constexpr int kSummarySchemaVersion = 1;

/// A stage failure; the message is prefixed with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, ErrorKind kind, const std::string& what)
        : Error(kind, stage + ": " + what), stage_(std::move(stage)) {}

    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct LoadedSeries {
    NormVolSeries volatility;
    std::optional<IntradayPattern> pattern;  ///< absent when the input was already normalized
    std::size_t raw_returns = 0;
};

/// Reads the configured inputs. A `day,slot,v` CSV is taken as normalized volatility;
/// `timestamp,price` CSVs (concatenated in order) run through ingest and volatility.
[[nodiscard]] LoadedSeries load_series(const RunConfig& config);

[[nodiscard]] std::vector<IntervalSample> threshold_samples(const NormVolSeries& v, const RunConfig& config);

/// Fits every sample (MLE or binned LSQ per config) and attaches a bootstrap p-value.
[[nodiscard]] std::vector<FitReport> fit_thresholds(std::span<const IntervalSample> samples, const RunConfig& config,
                                                    unsigned jobs);

struct MomentBundle {
    std::vector<MomentCurve> curves;
    std::vector<AlphaRow> spectrum;
    std::vector<EssReport> ess;
    std::vector<OrderCurve> by_order;
};

[[nodiscard]] MomentBundle analyze_moments(const NormVolSeries& v, const RunConfig& config);

/// Runs every stage and writes its artifacts plus summary.json into config.output_dir.
///
/// Returns the summary JSON text. On a stage failure the summary (status "failed")
/// and the artifacts already written are kept, and a StageError is thrown.
std::string run_analyze(const RunConfig& config, unsigned jobs = 1);

/// CLI exit code for an error: 2 config, 3 data, 4 statistical stage.
[[nodiscard]] int exit_code_for(ErrorKind kind) noexcept;

}  // namespace retint
