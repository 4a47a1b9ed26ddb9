#include "daen/metrics.hpp"

#include "daen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace daen {

std::vector<double> relative_errors(std::span<const double> actual,
                                    std::span<const double> forecast) {
    if (actual.size() != forecast.size())
        throw ContractViolation("relative_errors: " + std::to_string(actual.size()) +
                                " actual values vs " + std::to_string(forecast.size()) +
                                " forecasts");
    std::vector<double> out(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0)
            throw std::domain_error("relative_errors: actual value at position " +
                                    std::to_string(i + 1) + " is zero");
        out[i] = std::abs((actual[i] - forecast[i]) / actual[i]) * 100.0;
    }
    return out;
}

namespace {

void require_non_empty(std::span<const double> errors, const char* what) {
    if (errors.empty()) throw ContractViolation(std::string(what) + ": empty error list");
}

}  // namespace

double max_re(std::span<const double> errors) {
    require_non_empty(errors, "max_re");
    return *std::max_element(errors.begin(), errors.end());
}

double min_re(std::span<const double> errors) {
    require_non_empty(errors, "min_re");
    return *std::min_element(errors.begin(), errors.end());
}

double mae(std::span<const double> errors) {
    require_non_empty(errors, "mae");
    return std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
}

std::vector<CdfPoint> error_cdf(std::span<const double> errors,
                                std::span<const double> thresholds) {
    require_non_empty(errors, "error_cdf");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw ContractViolation("error_cdf: thresholds must be sorted ascending");
    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<CdfPoint> out;
    out.reserve(thresholds.size());
    const double n = static_cast<double>(sorted.size());
    for (double t : thresholds) {
        const auto count = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
        out.push_back({t, static_cast<double>(count) / n});
    }
    return out;
}

EvalResult evaluate(std::span<const double> actual, std::span<const double> forecast) {
    EvalResult r;
    r.actual.assign(actual.begin(), actual.end());
    r.forecast.assign(forecast.begin(), forecast.end());
    r.errors = relative_errors(actual, forecast);
    r.max_re = max_re(r.errors);
    r.min_re = min_re(r.errors);
    r.mae = mae(r.errors);
    return r;
}

double ComparisonReport::at(std::string_view indicator, std::string_view method) const {
    const auto i = std::find(indicators.begin(), indicators.end(), indicator);
    const auto m = std::find(methods.begin(), methods.end(), method);
    if (i == indicators.end() || m == methods.end())
        throw ContractViolation("no report cell for " + std::string(indicator) + "/" +
                                std::string(method));
    return cells[static_cast<std::size_t>(i - indicators.begin())]
                [static_cast<std::size_t>(m - methods.begin())];
}

ComparisonReport comparison_report(const std::vector<MethodResult>& results) {
    if (results.empty()) throw ContractViolation("comparison report needs at least one method");
    ComparisonReport report;
    report.cells.assign(3, {});
    std::set<std::string> seen;
    for (const auto& m : results) {
        if (m.name.empty()) throw ContractViolation("method name must not be empty");
        if (m.name.find(',') != std::string::npos)
            throw ContractViolation("method name '" + m.name + "' contains a comma");
        if (!seen.insert(m.name).second)
            throw ContractViolation("duplicate method name '" + m.name + "'");
        report.methods.push_back(m.name);
        report.cells[0].push_back(m.result.max_re);
        report.cells[1].push_back(m.result.min_re);
        report.cells[2].push_back(m.result.mae);
    }
    return report;
}

void write_eval_csv(std::ostream& out, const EvalResult& result) {
    out << "hour,actual_mw,forecast_mw,re_pct\n";
    char buf[96];
    for (std::size_t i = 0; i < result.errors.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.4f,%.4f,%.4f\n", i + 1, result.actual[i],
                      result.forecast[i], result.errors[i]);
        out << buf;
    }
}

void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& cdf) {
    out << "threshold_pct,cum_fraction\n";
    char buf[64];
    for (const auto& p : cdf) {
        std::snprintf(buf, sizeof buf, "%.2f,%.6f\n", p.threshold, p.fraction);
        out << buf;
    }
}

void write_report_csv(std::ostream& out, const ComparisonReport& report) {
    out << "indicator";
    for (const auto& m : report.methods) out << ',' << m;
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < report.indicators.size(); ++i) {
        out << report.indicators[i];
        for (double v : report.cells[i]) {
            std::snprintf(buf, sizeof buf, ",%.2f", v);
            out << buf;
        }
        out << '\n';
    }
}

void write_forecast_csv(std::ostream& out, std::span<const double> forecast) {
    out << "hour,forecast_mw\n";
    char buf[64];
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.4f\n", i + 1, forecast[i]);
        out << buf;
    }
}

std::vector<double> threshold_grid(double upper, double step) {
    if (!(step > 0.0) || !(upper >= 0.0)) throw ContractViolation("threshold_grid: bad bounds");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor(upper / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) grid.push_back(static_cast<double>(i) * step);
    return grid;
}

}  // namespace daen
