#include "retint/csv_io.hpp"

#include "retint/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>

namespace retint {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
bool parse_field(std::string_view s, T& out) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return !s.empty() && ec == std::errc{} && ptr == end;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_number(double v, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void write_volatility_csv(std::ostream& out, const NormVolSeries& v) {
    out << "day,slot,v\n";
    for (std::size_t t = 0; t < v.size(); ++t) {
        out << v.day[t] << ',' << v.slot[t] << ',' << format_number(v.values[t], 17) << '\n';
    }
}

NormVolSeries read_volatility_csv(std::istream& in) {
    if (!in) throw Error(ErrorKind::io, "volatility stream is not readable");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::format, "volatility CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "day,slot,v") throw Error(ErrorKind::format, "volatility CSV must start with 'day,slot,v'");
    NormVolSeries v;
    std::size_t row = 1;
    int max_slot = -1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto f = split(line);
        std::int32_t day = 0;
        std::int32_t slot = 0;
        double value = 0.0;
        if (f.size() != 3 || !parse_field(f[0], day) || !parse_field(f[1], slot) || !parse_field(f[2], value) ||
            !(value >= 0.0) || slot < 0) {
            throw Error(ErrorKind::format, "malformed volatility row " + std::to_string(row));
        }
        v.day.push_back(day);
        v.slot.push_back(slot);
        v.values.push_back(value);
        max_slot = std::max(max_slot, slot);
    }
    if (v.values.empty()) throw Error(ErrorKind::empty_series, "volatility CSV has no rows");
    v.slots_per_day = max_slot + 1;
    return v;
}

NormVolSeries read_volatility_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open volatility file '" + path + "'");
    return read_volatility_csv(in);
}

std::string volatility_sidecar_json(const IntradayPattern& pattern, double sd) {
    nlohmann::json doc;
    doc["sd"] = sd;
    doc["days"] = pattern.days;
    auto& slots = doc["pattern"] = nlohmann::json::array();
    for (std::size_t s = 0; s < pattern.level.size(); ++s) {
        slots.push_back({{"slot", s}, {"A", pattern.level[s]}, {"days", pattern.day_count[s]}});
    }
    return doc.dump(2) + "\n";
}

void write_intervals_csv(std::ostream& out, std::span<const IntervalSample> samples) {
    out << "q,tau\n";
    for (const auto& s : samples) {
        const std::string q = format_number(s.threshold);
        for (auto tau : s.intervals) out << q << ',' << tau << '\n';
    }
}

void write_pdf_csv(std::ostream& out, std::span<const ThresholdPdf> tables) {
    out << "q,x,density,count\n";
    for (const auto& [q, t] : tables) {
        for (std::size_t k = 0; k < t.size(); ++k) {
            out << format_number(q) << ',' << format_number(t.x[k]) << ',' << format_number(t.density[k]) << ','
                << t.count[k] << '\n';
        }
    }
}

void write_cdf_csv(std::ostream& out, std::span<const ThresholdCdf> tables) {
    out << "q,x,F\n";
    for (const auto& [q, t] : tables) {
        for (std::size_t k = 0; k < t.x.size(); ++k) {
            out << format_number(q) << ',' << format_number(t.x[k]) << ',' << format_number(t.F[k]) << '\n';
        }
    }
}

void write_ks_matrix_csv(std::ostream& out, const KsMatrix& matrix) {
    out << "q_i,q_j,KS,CV,decision\n";
    for (const auto& p : matrix.pairs) {
        out << format_number(p.q_i) << ',' << format_number(p.q_j) << ',' << format_number(p.result.statistic, 6)
            << ',' << format_number(p.result.critical, 6) << ',' << (p.result.accept ? "accept" : "reject") << '\n';
    }
}

void write_fits_csv(std::ostream& out, std::span<const FitReport> reports) {
    out << "q,c,a,gamma,p\n";
    for (const auto& r : reports) {
        out << format_number(r.threshold) << ',' << format_number(r.model.c, 6) << ',' << format_number(r.model.a, 6)
            << ',' << format_number(r.model.gamma, 6) << ',' << format_number(r.p, 6) << '\n';
    }
}

std::string fit_reports_json(std::span<const FitReport> reports) {
    auto doc = nlohmann::json::array();
    for (const auto& r : reports) {
        doc.push_back({{"q", r.threshold},
                       {"mode", std::string(to_string(r.mode))},
                       {"c", number_or_null(r.model.c)},
                       {"a", number_or_null(r.model.a)},
                       {"gamma", number_or_null(r.model.gamma)},
                       {"n", r.n},
                       {"ks", r.ks},
                       {"p", r.p},
                       {"n_boot", r.n_boot},
                       {"seed", r.seed},
                       {"refit", r.refit},
                       {"dropped", r.dropped}});
    }
    return doc.dump(2) + "\n";
}

void write_moment_curves_csv(std::ostream& out, std::span<const MomentCurve> curves) {
    out << "m,mean_tau,mu\n";
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            out << format_number(c.m) << ',' << format_number(p.mean_interval) << ',' << format_number(p.mu) << '\n';
        }
    }
}

void write_alpha_spectrum_csv(std::ostream& out, std::span<const AlphaRow> rows) {
    out << "m,alpha,stderr\n";
    for (const auto& r : rows) {
        out << format_number(r.m) << ',' << format_number(r.fit.slope) << ',' << format_number(r.fit.slope_stderr)
            << '\n';
    }
}

void write_ess_csv(std::ostream& out, std::span<const EssReport> reports) {
    out << "m,n,xi,alpha\n";
    for (const auto& r : reports) {
        out << format_number(r.m) << ',' << format_number(r.n) << ',' << format_number(r.xi) << ','
            << format_number(r.alpha) << '\n';
    }
}

void write_moment_order_csv(std::ostream& out, std::span<const OrderCurve> curves) {
    out << "target_mean,q,m,mu,mu_analytic\n";
    for (const auto& c : curves) {
        for (std::size_t k = 0; k < c.orders.size(); ++k) {
            out << format_number(c.target_mean) << ',' << format_number(c.threshold) << ','
                << format_number(c.orders[k]) << ',' << format_number(c.mu[k]) << ','
                << (k < c.analytic_mu.size() ? format_number(c.analytic_mu[k]) : std::string()) << '\n';
        }
    }
}

}  // namespace retint
