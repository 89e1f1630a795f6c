#pragma once

#include <utility>
#include <vector>

#include "exogait/dsp/filter.hpp"

namespace exogait::dsp {

/// Agreement statistics between two equal-length series.
struct AgreementReport {
    double rmse = 0.0;
    double pearson_r = 0.0;
    bool pearson_defined = true;  // false when either input is constant
    double median_diff = 0.0;
    double iqr_diff = 0.0;
    double loa_low = 0.0;
    double loa_high = 0.0;
    double wilcoxon_p = 1.0;
    bool wilcoxon_defined = true;  // false when all differences are zero
};

double rmse(const std::vector<double>& a, const std::vector<double>& b);

/// Sample Pearson correlation coefficient; requires both inputs nonconstant.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Median (midpoint of the middle two for even n) and interquartile range
/// with linear-interpolation (type-7) quantiles.
std::pair<double, double> median_iqr(std::vector<double> x);

struct BlandAltman {
    double mean_diff;
    double loa_low;
    double loa_high;
};

/// Bland-Altman agreement of d = a - b: mean and mean +/- 1.96 * sd (sample
/// standard deviation, n-1).
BlandAltman bland_altman(const std::vector<double>& a, const std::vector<double>& b);

struct WilcoxonResult {
    double w_plus;
    double p_two_sided;
    int n_nonzero;
    bool exact;
};

/// Wilcoxon signed-rank test on paired samples. Zero differences are
/// dropped; |d| is ranked with average ranks for ties. The two-sided p is
/// exact (full enumeration of sign patterns) for n <= exact_threshold, else
/// a normal approximation with tie and continuity corrections.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b,
                                    int exact_threshold = 20);

/// Full comparison suite over an aligned pair, as emitted by reports.
AgreementReport agreement_report(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace exogait::dsp
