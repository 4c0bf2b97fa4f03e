#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hiermat/noise.hpp"
#include "hiermat/oracle.hpp"
#include "hiermat/params.hpp"
#include "hiermat/spectra.hpp"

namespace hiermat {

using json = nlohmann::json;

/// Shortest-round-trip double formatting for CSV cells; byte-identical for
/// identical inputs.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

inline json params_json(const HierParams& params) {
    return json{{"p", params.p},
                {"r", params.r},
                {"form", to_string(params.form)},
                {"coeffs", params.coeffs}};
}

inline json spectrum_report_json(const HierParams& params,
                                 const std::vector<SpectralLine>& lines) {
    json j = params_json(params);
    json arr = json::array();
    for (const auto& line : lines)
        arr.push_back(json{{"re", line.value.real()},
                           {"im", line.value.imag()},
                           {"mult", line.multiplicity},
                           {"label", line.label}});
    j["lines"] = std::move(arr);
    return j;
}

inline json verification_report_json(const VerificationReport& report) {
    json j;
    j["params"] = params_json(report.params);
    j["which"] = to_string(report.which);
    j["all_pass"] = report.all_pass();
    json arr = json::array();
    for (const auto& c : report.checks)
        arr.push_back(json{{"name", c.name},
                           {"status", c.pass ? "pass" : "fail"},
                           {"max_residual", c.max_residual},
                           {"detail", c.detail}});
    j["checks"] = std::move(arr);
    return j;
}

inline json moment_report_json(const MomentReport& report) {
    return json{{"mean", report.mean},
                {"variance", report.variance},
                {"n_trials", report.n_trials},
                {"std_error_mean", report.std_error_mean},
                {"source", to_string(report.source)}};
}

/// One row of a beta sweep; the exact-oracle columns are present only when
/// the dimension admits exact evolution.
struct SweepRow {
    double beta = 0.0;
    double mean_analytic = 0.0;
    double var_analytic = 0.0;
    double mean_mc = 0.0;
    double var_mc = 0.0;
    double stderr_mean = 0.0;
    std::uint64_t n_trials = 0;
    int r = 0;
    int p = 0;
    std::uint64_t seed = 0;
    std::optional<double> mean_exact;
    std::optional<double> var_exact;
};

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    const bool with_exact = !rows.empty() && rows.front().mean_exact.has_value();
    out << "beta,mean_analytic,var_analytic,mean_mc,var_mc,stderr_mean,n_trials,r,p,seed";
    if (with_exact) out << ",mean_exact,var_exact";
    out << "\n";
    for (const auto& row : rows) {
        out << format_double(row.beta) << ',' << format_double(row.mean_analytic) << ','
            << format_double(row.var_analytic) << ',' << format_double(row.mean_mc) << ','
            << format_double(row.var_mc) << ',' << format_double(row.stderr_mean) << ','
            << row.n_trials << ',' << row.r << ',' << row.p << ',' << row.seed;
        if (with_exact)
            out << ',' << format_double(*row.mean_exact) << ','
                << format_double(*row.var_exact);
        out << "\n";
    }
}

inline json sweep_rows_json(const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json j{{"beta", row.beta},
               {"mean_analytic", row.mean_analytic},
               {"var_analytic", row.var_analytic},
               {"mean_mc", row.mean_mc},
               {"var_mc", row.var_mc},
               {"stderr_mean", row.stderr_mean},
               {"n_trials", row.n_trials},
               {"r", row.r},
               {"p", row.p},
               {"seed", row.seed}};
        if (row.mean_exact) {
            j["mean_exact"] = *row.mean_exact;
            j["var_exact"] = *row.var_exact;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace hiermat
