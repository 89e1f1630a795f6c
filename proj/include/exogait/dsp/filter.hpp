#pragma once

#include <stdexcept>
#include <vector>

namespace exogait::dsp {

enum class DspErrorKind {
    TooShort,
    BadSpec,
    BadRates,
    LengthMismatch,
    Empty,
    ConstantInput,
    AllZeroDiffs,
};

struct dsp_error : std::runtime_error {
    DspErrorKind kind;
    dsp_error(DspErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

struct FilterSpec {
    int order = 2;
    double cutoff_hz = 10.0;
    double sample_rate_hz = 130.0;
};

// Defaults for gait channels; gait content lies below 10 Hz.
inline constexpr double kDefaultFsrCutoffHz = 10.0;
inline constexpr double kDefaultAccelCutoffHz = 15.0;

/// Single-pass Butterworth low-pass (analog prototype, bilinear transform,
/// cascaded biquads). DC gain is exactly 1; state is initialized to the
/// steady-state response of x[0], so constant inputs pass unchanged.
std::vector<double> butterworth_lowpass(const std::vector<double>& x, const FilterSpec& spec);

/// Forward-backward application of butterworth_lowpass: zero group delay,
/// squared magnitude response.
std::vector<double> zero_phase_filter(const std::vector<double>& x, const FilterSpec& spec);

/// Downsamples x from from_hz to to_hz: zero-phase low-pass at 0.45*to_hz
/// followed by linear-interpolated resampling onto the to_hz grid. Output
/// length is floor((len-1)*to/from) + 1; equal rates return the input.
std::vector<double> decimate(const std::vector<double>& x, double from_hz, double to_hz);

}  // namespace exogait::dsp
