#include "exogait/dsp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace exogait::dsp {

namespace {

void require_pair(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw dsp_error(DspErrorKind::LengthMismatch, "input lengths differ");
    }
    if (a.empty()) throw dsp_error(DspErrorKind::Empty, "inputs are empty");
}

double quantile_type7(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double std_normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    require_pair(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    require_pair(a, b);
    if (a.size() < 2) throw dsp_error(DspErrorKind::Empty, "need at least 2 samples");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw dsp_error(DspErrorKind::ConstantInput, "pearson is undefined for constant input");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::pair<double, double> median_iqr(std::vector<double> x) {
    if (x.empty()) throw dsp_error(DspErrorKind::Empty, "inputs are empty");
    std::sort(x.begin(), x.end());
    const double med = quantile_type7(x, 0.5);
    const double iqr = quantile_type7(x, 0.75) - quantile_type7(x, 0.25);
    return {med, iqr};
}

BlandAltman bland_altman(const std::vector<double>& a, const std::vector<double>& b) {
    require_pair(a, b);
    if (a.size() < 2) throw dsp_error(DspErrorKind::Empty, "need at least 2 samples");
    const double n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, mean - 1.96 * sd, mean + 1.96 * sd};
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b,
                                    int exact_threshold) {
    if (a.size() != b.size()) {
        throw dsp_error(DspErrorKind::LengthMismatch, "input lengths differ");
    }
    std::vector<double> d;
    d.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        if (diff != 0.0) d.push_back(diff);
    }
    if (d.empty()) {
        throw dsp_error(DspErrorKind::AllZeroDiffs, "all paired differences are zero");
    }
    const int n = static_cast<int>(d.size());

    // Rank |d| ascending with average ranks for ties. Doubled ranks are
    // integers (averages of consecutive integers are half-integral).
    std::vector<int> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return std::abs(d[i]) < std::abs(d[j]); });
    std::vector<long long> rank2(d.size());
    std::vector<long long> tie_sizes;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() &&
               std::abs(d[idx[j + 1]]) == std::abs(d[idx[i]])) {
            ++j;
        }
        const long long avg2 = static_cast<long long>(i + j) + 2;  // 2 * mean of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) rank2[idx[k]] = avg2;
        if (j > i) tie_sizes.push_back(static_cast<long long>(j - i + 1));
        i = j + 1;
    }

    long long w2 = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] > 0.0) w2 += rank2[i];
    }
    const long long total2 = static_cast<long long>(n) * (n + 1);  // 2 * n(n+1)/2

    WilcoxonResult res;
    res.w_plus = static_cast<double>(w2) / 2.0;
    res.n_nonzero = n;

    if (n <= exact_threshold) {
        // Exact null distribution of 2*W+ by convolution over the doubled
        // ranks; counts fit in double exactly for n <= 52.
        std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
        counts[0] = 1.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto r = static_cast<std::size_t>(rank2[i]);
            for (std::size_t s = counts.size() - 1; s + 1 > r; --s) {
                counts[s] += counts[s - r];
            }
        }
        const long long hi = std::max(w2, total2 - w2);
        double tail = 0.0;
        for (std::size_t s = static_cast<std::size_t>(hi); s < counts.size(); ++s) {
            tail += counts[s];
        }
        const double p = 2.0 * tail / std::ldexp(1.0, n);
        res.p_two_sided = std::min(1.0, p);
        res.exact = true;
    } else {
        const double w = res.w_plus;
        const double mu = static_cast<double>(n) * (n + 1) / 4.0;
        double var = static_cast<double>(n) * (n + 1) * (2 * n + 1) / 24.0;
        for (long long t : tie_sizes) {
            var -= static_cast<double>(t * t * t - t) / 48.0;
        }
        if (var <= 0.0 || w == mu) {
            res.p_two_sided = 1.0;
        } else {
            const double cc = w > mu ? 0.5 : -0.5;  // continuity correction
            const double z = (w - mu - cc) / std::sqrt(var);
            res.p_two_sided = std::min(1.0, 2.0 * std_normal_sf(std::abs(z)));
        }
        res.exact = false;
    }
    return res;
}

AgreementReport agreement_report(const std::vector<double>& a, const std::vector<double>& b) {
    require_pair(a, b);
    AgreementReport rep;
    rep.rmse = rmse(a, b);
    try {
        rep.pearson_r = pearson(a, b);
    } catch (const dsp_error& e) {
        if (e.kind != DspErrorKind::ConstantInput) throw;
        rep.pearson_defined = false;
    }
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    std::tie(rep.median_diff, rep.iqr_diff) = median_iqr(d);
    if (a.size() >= 2) {
        const auto ba = bland_altman(a, b);
        rep.loa_low = ba.loa_low;
        rep.loa_high = ba.loa_high;
    }
    try {
        rep.wilcoxon_p = wilcoxon_signed_rank(a, b).p_two_sided;
    } catch (const dsp_error& e) {
        if (e.kind != DspErrorKind::AllZeroDiffs) throw;
        rep.wilcoxon_defined = false;
    }
    return rep;
}

}  // namespace exogait::dsp
