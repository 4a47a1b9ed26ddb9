#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace daen {

// |actual - forecast| / actual * 100 per position. Percentages are plain
// reals: 1.28 means 1.28 %.
std::vector<double> relative_errors(std::span<const double> actual,
                                    std::span<const double> forecast);

double max_re(std::span<const double> errors);
double min_re(std::span<const double> errors);
double mae(std::span<const double> errors);

struct CdfPoint {
    double threshold = 0.0;
    double fraction = 0.0;  // share of errors <= threshold
};

// Empirical CDF at ascending thresholds (inclusive comparison).
std::vector<CdfPoint> error_cdf(std::span<const double> errors, std::span<const double> thresholds);

struct EvalResult {
    std::vector<double> actual;
    std::vector<double> forecast;
    std::vector<double> errors;
    double max_re = 0.0;
    double min_re = 0.0;
    double mae = 0.0;
};

EvalResult evaluate(std::span<const double> actual, std::span<const double> forecast);

struct MethodResult {
    std::string name;
    EvalResult result;
};

// Indicator x method table: rows MaxRe, MinRe, Mae.
struct ComparisonReport {
    std::vector<std::string> methods;
    std::vector<std::string> indicators{"MaxRe", "MinRe", "Mae"};
    std::vector<std::vector<double>> cells;  // [indicator][method]

    double at(std::string_view indicator, std::string_view method) const;
};

// Throws ContractViolation on an empty list, empty name or duplicate name.
ComparisonReport comparison_report(const std::vector<MethodResult>& results);

// hour,actual_mw,forecast_mw,re_pct (hours numbered from 1)
void write_eval_csv(std::ostream& out, const EvalResult& result);
// threshold_pct,cum_fraction
void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& cdf);
// indicator,<method>... with cells rounded to 2 decimals
void write_report_csv(std::ostream& out, const ComparisonReport& report);
// hour,forecast_mw
void write_forecast_csv(std::ostream& out, std::span<const double> forecast);

// Thresholds 0.0, step, 2*step, ... up to and including `upper`.
std::vector<double> threshold_grid(double upper, double step);

}  // namespace daen
