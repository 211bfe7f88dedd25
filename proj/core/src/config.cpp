#include "retint/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace retint {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& doc, const char* key, T& target, std::vector<ConfigIssue>& issues,
                const char* expected) {
    if (!doc.contains(key)) return;
    try {
        target = doc.at(key).get<T>();
    } catch (const json::exception&) {
        issues.push_back({key, std::string("expected ") + expected});
    }
}

void require_positive_list(const std::vector<double>& values, const char* key, bool allow_empty,
                           std::vector<ConfigIssue>& issues) {
    if (values.empty() && !allow_empty) issues.push_back({key, "must not be empty"});
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            issues.push_back({std::string(key) + "[" + std::to_string(i) + "]", "must be a positive number"});
        }
    }
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "inputs",         "calendar",        "output_dir",    "utc_offset_minutes", "thresholds", "q_min",
        "q_max",          "q_step",          "bins_per_decade", "region_lo",        "region_hi",  "n_boot",
        "seed",           "fit_mode",        "moment_orders", "spectrum_orders",    "ess_n",      "mean_targets",
        "threshold_tol",  "drop_overnight",  "cross_day",     "refit",              "cv_counts"};
    return keys;
}

}  // namespace

std::string_view to_string(CvCounts counts) noexcept { return counts == CvCounts::overlap ? "overlap" : "whole"; }

std::vector<double> RunConfig::q_grid() const {
    std::vector<double> grid;
    if (!(q_step > 0.0) || q_max < q_min) return grid;
    const auto steps = static_cast<long>(std::floor((q_max - q_min) / q_step + 1e-9));
    for (long k = 0; k <= steps; ++k) {
        // Snap to 1e-9 so a 0.1 step lands on 1.3 rather than 1.3000000000000003.
        grid.push_back(std::round((q_min + static_cast<double>(k) * q_step) * 1e9) / 1e9);
    }
    return grid;
}

std::string RunConfig::to_json() const {
    json doc = json::object();
    doc["inputs"] = inputs;
    doc["calendar"] = calendar;
    doc["output_dir"] = output_dir;
    doc["utc_offset_minutes"] = utc_offset_minutes;
    doc["thresholds"] = thresholds;
    doc["q_min"] = q_min;
    doc["q_max"] = q_max;
    doc["q_step"] = q_step;
    doc["bins_per_decade"] = bins_per_decade;
    doc["region_lo"] = region_lo;
    doc["region_hi"] = region_hi;
    doc["n_boot"] = n_boot;
    doc["seed"] = seed;
    doc["fit_mode"] = std::string(to_string(fit_mode));
    doc["moment_orders"] = moment_orders;
    doc["spectrum_orders"] = spectrum_orders;
    doc["ess_n"] = ess_n;
    doc["mean_targets"] = mean_targets;
    doc["threshold_tol"] = threshold_tol;
    doc["drop_overnight"] = drop_overnight;
    doc["cross_day"] = cross_day;
    doc["refit"] = refit;
    doc["cv_counts"] = std::string(to_string(cv_counts));
    return doc.dump(2);
}

std::vector<ConfigIssue> check_config(const RunConfig& c) {
    std::vector<ConfigIssue> issues;
    require_positive_list(c.thresholds, "thresholds", false, issues);
    if (!(c.q_min > 0.0)) issues.push_back({"q_min", "must be positive"});
    if (!(c.q_step > 0.0)) issues.push_back({"q_step", "must be positive"});
    if (!(c.q_max >= c.q_min)) issues.push_back({"q_max", "must be >= q_min"});
    if (c.bins_per_decade < 1) issues.push_back({"bins_per_decade", "must be >= 1"});
    if (!(c.region_lo > 0.0)) issues.push_back({"region_lo", "must be positive"});
    if (!(c.region_hi > c.region_lo)) issues.push_back({"region_hi", "must exceed region_lo"});
    if (c.n_boot < 100) issues.push_back({"n_boot", "n_boot >= 100 required"});
    require_positive_list(c.moment_orders, "moment_orders", true, issues);
    require_positive_list(c.spectrum_orders, "spectrum_orders", true, issues);
    require_positive_list(c.ess_n, "ess_n", true, issues);
    require_positive_list(c.mean_targets, "mean_targets", true, issues);
    for (std::size_t i = 0; i < c.mean_targets.size(); ++i) {
        if (c.mean_targets[i] > 0.0 && c.mean_targets[i] < 1.0) {
            issues.push_back({"mean_targets[" + std::to_string(i) + "]", "must be >= 1"});
        }
    }
    if (!(c.threshold_tol > 0.0)) issues.push_back({"threshold_tol", "must be positive"});
    if (c.utc_offset_minutes < -24 * 60 || c.utc_offset_minutes > 24 * 60) {
        issues.push_back({"utc_offset_minutes", "must lie within one day"});
    }
    return issues;
}

ConfigResult validate_config(std::string_view json_text) {
    ConfigResult result;
    json doc;
    const bool blank = json_text.find_first_not_of(" \t\r\n") == std::string_view::npos;
    if (blank) {
        doc = json::object();
    } else {
        try {
            doc = json::parse(json_text);
        } catch (const json::exception& e) {
            result.issues.push_back({"$", std::string("invalid JSON: ") + e.what()});
            return result;
        }
    }
    if (!doc.is_object()) {
        result.issues.push_back({"$", "config must be a JSON object"});
        return result;
    }
    for (const auto& [key, _] : doc.items()) {
        if (known_keys().count(key) == 0) result.issues.push_back({key, "unknown field"});
    }

    RunConfig c;
    auto& issues = result.issues;
    if (doc.contains("inputs") && doc.at("inputs").is_string()) {
        c.inputs = {doc.at("inputs").get<std::string>()};
    } else {
        read_field(doc, "inputs", c.inputs, issues, "a list of paths");
    }
    read_field(doc, "calendar", c.calendar, issues, "a path string");
    read_field(doc, "output_dir", c.output_dir, issues, "a path string");
    read_field(doc, "utc_offset_minutes", c.utc_offset_minutes, issues, "an integer");
    read_field(doc, "thresholds", c.thresholds, issues, "a list of numbers");
    read_field(doc, "q_min", c.q_min, issues, "a number");
    read_field(doc, "q_max", c.q_max, issues, "a number");
    read_field(doc, "q_step", c.q_step, issues, "a number");
    read_field(doc, "bins_per_decade", c.bins_per_decade, issues, "an integer");
    read_field(doc, "region_lo", c.region_lo, issues, "a number");
    read_field(doc, "region_hi", c.region_hi, issues, "a number");
    if (doc.contains("n_boot") && doc.at("n_boot").is_number_integer() && doc.at("n_boot").get<long long>() < 0) {
        issues.push_back({"n_boot", "n_boot >= 100 required"});
    } else {
        read_field(doc, "n_boot", c.n_boot, issues, "an integer");
    }
    read_field(doc, "seed", c.seed, issues, "a non-negative integer");
    if (doc.contains("fit_mode")) {
        const auto& v = doc.at("fit_mode");
        if (v.is_string() && (v == "mle" || v == "lsq")) {
            c.fit_mode = parse_fit_mode(v.get<std::string>());
        } else {
            issues.push_back({"fit_mode", "must be \"mle\" or \"lsq\""});
        }
    }
    read_field(doc, "moment_orders", c.moment_orders, issues, "a list of numbers");
    read_field(doc, "spectrum_orders", c.spectrum_orders, issues, "a list of numbers");
    read_field(doc, "ess_n", c.ess_n, issues, "a list of numbers");
    read_field(doc, "mean_targets", c.mean_targets, issues, "a list of numbers");
    read_field(doc, "threshold_tol", c.threshold_tol, issues, "a number");
    read_field(doc, "drop_overnight", c.drop_overnight, issues, "a boolean");
    read_field(doc, "cross_day", c.cross_day, issues, "a boolean");
    read_field(doc, "refit", c.refit, issues, "a boolean");
    if (doc.contains("cv_counts")) {
        const auto& v = doc.at("cv_counts");
        if (v == "overlap") {
            c.cv_counts = CvCounts::overlap;
        } else if (v == "whole") {
            c.cv_counts = CvCounts::whole;
        } else {
            issues.push_back({"cv_counts", "must be \"overlap\" or \"whole\""});
        }
    }

    for (auto& issue : check_config(c)) {
        // A field that failed to parse keeps its default; do not report it twice.
        const bool already = std::any_of(issues.begin(), issues.end(),
                                         [&](const ConfigIssue& i) { return i.field == issue.field; });
        if (!already) issues.push_back(std::move(issue));
    }
    if (issues.empty()) result.config = std::move(c);
    return result;
}

std::string ConfigResult::describe() const {
    std::string out;
    for (const auto& i : issues) out += i.field + ": " + i.message + "\n";
    return out;
}

}  // namespace retint
