#pragma once

#include "retint/intervals.hpp"
#include "retint/kstest.hpp"
#include "retint/moments.hpp"
#include "retint/semodel.hpp"
#include "retint/volatility.hpp"

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace retint {

/// "%.*g" with `digits` significant digits; 17 round-trips exactly.
[[nodiscard]] std::string format_number(double v, int digits = 12);

// Normalized volatility: `day,slot,v`.
void write_volatility_csv(std::ostream& out, const NormVolSeries& v);
[[nodiscard]] NormVolSeries read_volatility_csv(std::istream& in);
[[nodiscard]] NormVolSeries read_volatility_csv_file(const std::string& path);

/// JSON sidecar for the volatility stage: sd and the per-slot pattern.
[[nodiscard]] std::string volatility_sidecar_json(const IntradayPattern& pattern, double sd);

using ThresholdPdf = std::pair<double, PdfTable>;
using ThresholdCdf = std::pair<double, CdfTable>;

void write_intervals_csv(std::ostream& out, std::span<const IntervalSample> samples);     // q,tau
void write_pdf_csv(std::ostream& out, std::span<const ThresholdPdf> tables);             // q,x,density,count
void write_cdf_csv(std::ostream& out, std::span<const ThresholdCdf> tables);             // q,x,F
void write_ks_matrix_csv(std::ostream& out, const KsMatrix& matrix);                      // q_i,q_j,KS,CV,decision
void write_fits_csv(std::ostream& out, std::span<const FitReport> reports);               // q,c,a,gamma,p
/// `[{q, mode, c, a, gamma, n, ks, p, n_boot, seed}, ...]`
[[nodiscard]] std::string fit_reports_json(std::span<const FitReport> reports);
void write_moment_curves_csv(std::ostream& out, std::span<const MomentCurve> curves);     // m,mean_tau,mu
void write_alpha_spectrum_csv(std::ostream& out, std::span<const AlphaRow> rows);         // m,alpha,stderr
void write_ess_csv(std::ostream& out, std::span<const EssReport> reports);                // m,n,xi,alpha
void write_moment_order_csv(std::ostream& out, std::span<const OrderCurve> curves);
// target_mean,q,m,mu,mu_analytic

}  // namespace retint
