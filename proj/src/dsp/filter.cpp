#include "exogait/dsp/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace exogait::dsp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One second-order section, direct form II transposed. b2/a2 are zero for a
// first-order section.
struct Biquad {
    double b0, b1, b2;
    double a1, a2;

    void apply(std::vector<double>& x) const {
        // Steady-state initial conditions for a constant input x[0]; valid
        // because each section has unit DC gain.
        const double x0 = x.empty() ? 0.0 : x.front();
        double s1 = x0 * (1.0 - b0);
        double s2 = x0 * (b2 - a2);
        for (double& v : x) {
            const double in = v;
            const double out = b0 * in + s1;
            s1 = b1 * in - a1 * out + s2;
            s2 = b2 * in - a2 * out;
            v = out;
        }
    }
};

// Butterworth low-pass design via bilinear transform of the analog
// prototype. Returns cascaded sections, each normalized to unit DC gain.
std::vector<Biquad> design_lowpass(const FilterSpec& spec) {
    const double warped = std::tan(kPi * spec.cutoff_hz / spec.sample_rate_hz);
    const int n = spec.order;
    std::vector<Biquad> sections;

    // Conjugate pole pairs of the analog prototype, scaled by the warped
    // cutoff, mapped by z = (1 + s) / (1 - s).
    for (int k = 0; k < n / 2; ++k) {
        const double theta = kPi * (2.0 * (k + 1) + n - 1.0) / (2.0 * n);
        const std::complex<double> pole = warped * std::polar(1.0, theta);
        const std::complex<double> zpole = (1.0 + pole) / (1.0 - pole);
        const double a1 = -2.0 * zpole.real();
        const double a2 = std::norm(zpole);
        const double gain = (1.0 + a1 + a2) / 4.0;
        sections.push_back({gain, 2.0 * gain, gain, a1, a2});
    }
    if (n % 2 == 1) {
        const double zpole = (1.0 - warped) / (1.0 + warped);
        const double a1 = -zpole;
        const double gain = (1.0 + a1) / 2.0;
        sections.push_back({gain, gain, 0.0, a1, 0.0});
    }
    return sections;
}

void validate(const std::vector<double>& x, const FilterSpec& spec) {
    if (spec.order < 1 || spec.order > 8) {
        throw dsp_error(DspErrorKind::BadSpec, "filter order must lie in [1, 8]");
    }
    if (!(spec.cutoff_hz > 0.0) || !(spec.cutoff_hz < spec.sample_rate_hz / 2.0)) {
        throw dsp_error(DspErrorKind::BadSpec, "cutoff must lie in (0, sample_rate/2)");
    }
    if (static_cast<int>(x.size()) <= 3 * spec.order) {
        throw dsp_error(DspErrorKind::TooShort, "input shorter than 3x filter order");
    }
}

}  // namespace

std::vector<double> butterworth_lowpass(const std::vector<double>& x, const FilterSpec& spec) {
    validate(x, spec);
    std::vector<double> y = x;
    for (const Biquad& s : design_lowpass(spec)) s.apply(y);
    return y;
}

std::vector<double> zero_phase_filter(const std::vector<double>& x, const FilterSpec& spec) {
    validate(x, spec);

    // Odd-reflection padding keeps the forward and backward edge transients
    // inside the cropped region, which also makes the operation symmetric
    // under time reversal.
    const auto pad = std::min(x.size() - 1,
                              static_cast<std::size_t>(
                                  3 * (2 * spec.order + 1) *
                                  std::max(1.0, spec.sample_rate_hz / (3.0 * spec.cutoff_hz))));
    std::vector<double> y;
    y.reserve(x.size() + 2 * pad);
    for (std::size_t i = pad; i > 0; --i) y.push_back(2.0 * x.front() - x[i]);
    y.insert(y.end(), x.begin(), x.end());
    for (std::size_t i = 2; i <= pad + 1; ++i) y.push_back(2.0 * x.back() - x[x.size() - i]);

    const auto sections = design_lowpass(spec);
    for (const Biquad& s : sections) s.apply(y);
    std::reverse(y.begin(), y.end());
    for (const Biquad& s : sections) s.apply(y);
    std::reverse(y.begin(), y.end());

    return {y.begin() + static_cast<std::ptrdiff_t>(pad),
            y.begin() + static_cast<std::ptrdiff_t>(pad + x.size())};
}

std::vector<double> decimate(const std::vector<double>& x, double from_hz, double to_hz) {
    if (!(to_hz > 0.0) || from_hz < to_hz) {
        throw dsp_error(DspErrorKind::BadRates, "requires from_hz >= to_hz > 0");
    }
    if (from_hz == to_hz) return x;
    if (x.empty()) return {};

    // Anti-alias before resampling. Order 8 keeps passband droop at
    // 0.3*to_hz below 0.2% after the forward-backward pass.
    std::vector<double> filtered = x;
    const double cutoff = 0.45 * to_hz;
    if (cutoff < 0.499 * from_hz && static_cast<int>(x.size()) > 24) {
        filtered = zero_phase_filter(x, FilterSpec{8, cutoff, from_hz});
    }

    const std::size_t n_out =
        static_cast<std::size_t>(static_cast<double>(x.size() - 1) * to_hz / from_hz) + 1;
    std::vector<double> out(n_out);
    for (std::size_t j = 0; j < n_out; ++j) {
        const double pos = static_cast<double>(j) * from_hz / to_hz;
        const auto i0 = std::min(static_cast<std::size_t>(pos), filtered.size() - 1);
        const auto i1 = std::min(i0 + 1, filtered.size() - 1);
        const double frac = pos - static_cast<double>(i0);
        out[j] = filtered[i0] + frac * (filtered[i1] - filtered[i0]);
    }
    return out;
}

}  // namespace exogait::dsp
