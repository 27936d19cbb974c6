#pragma once

#include <cstddef>
#include <vector>

// Averaged-periodogram spectra and short-time peak tracking of detected
// photocurrents.

namespace sweeplink {

struct Psd {
    std::vector<double> freq_hz;
    std::vector<double> power_db; // relative dB, floored to stay finite
    double bin_hz = 0.0;
};

// One-sided Welch estimate with a Hann window. Requires x.size() >= nfft and
// power-of-two nfft; hop defaults to nfft/2 when 0.
Psd welch_psd(const std::vector<double>& x, double sample_rate_hz, std::size_t nfft,
              std::size_t hop = 0);

// Frequency of the strongest bin inside [f_lo, f_hi], refined by parabolic
// interpolation on the dB values.
double peak_frequency(const Psd& psd, double f_lo_hz, double f_hi_hz);

struct TrackPoint {
    double t_s = 0.0;
    double f_peak_hz = 0.0;
};

// Short-time spectral peak trajectory: per Hann-windowed segment, the
// interpolated peak inside [f_lo, f_hi]; timestamps at segment centers.
std::vector<TrackPoint> peak_track(const std::vector<double>& x, double sample_rate_hz,
                                   std::size_t nwin, std::size_t hop, double f_lo_hz,
                                   double f_hi_hz);

} // namespace sweeplink
