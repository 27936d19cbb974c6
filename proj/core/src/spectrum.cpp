#include "sweeplink/spectrum.hpp"

#include "sweeplink/fft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace sweeplink {

namespace {

constexpr double kPowerFloor = 1e-30;

std::vector<double> hann(std::size_t n)
{
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    return w;
}

// Mean squared magnitude of the windowed DFT over one segment, one-sided.
std::vector<double> segment_power(const std::vector<double>& x, std::size_t start,
                                  const std::vector<double>& win)
{
    const std::size_t n = win.size();
    std::vector<std::complex<double>> seg(n);
    for (std::size_t i = 0; i < n; ++i) seg[i] = x[start + i] * win[i];
    auto spec = fft(seg);
    std::vector<double> p(n / 2 + 1);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(spec[k]) / (n * n);
    return p;
}

std::size_t strongest_bin(const Psd& psd, double f_lo, double f_hi)
{
    std::size_t best = 0;
    double best_p = -1.0;
    bool found = false;
    for (std::size_t k = 0; k < psd.freq_hz.size(); ++k) {
        if (psd.freq_hz[k] < f_lo || psd.freq_hz[k] > f_hi) continue;
        if (!found || psd.power_db[k] > best_p) {
            best = k;
            best_p = psd.power_db[k];
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("peak_frequency: no bins inside [f_lo, f_hi]");
    return best;
}

double interpolate_peak(const Psd& psd, std::size_t k)
{
    if (k == 0 || k + 1 >= psd.power_db.size()) return psd.freq_hz[k];
    const double a = psd.power_db[k - 1];
    const double b = psd.power_db[k];
    const double c = psd.power_db[k + 1];
    const double denom = a - 2.0 * b + c;
    if (denom >= 0.0) return psd.freq_hz[k]; // not a local maximum in dB
    double delta = 0.5 * (a - c) / denom;
    if (delta > 0.5) delta = 0.5;
    if (delta < -0.5) delta = -0.5;
    return psd.freq_hz[k] + delta * psd.bin_hz;
}

} // namespace

Psd welch_psd(const std::vector<double>& x, double sample_rate_hz, std::size_t nfft,
              std::size_t hop)
{
    if (nfft == 0 || (nfft & (nfft - 1)) != 0)
        throw std::invalid_argument("welch_psd: nfft must be a power of two");
    if (x.size() < nfft) throw std::invalid_argument("welch_psd: signal shorter than nfft");
    if (hop == 0) hop = nfft / 2;

    const auto win = hann(nfft);
    std::vector<double> acc(nfft / 2 + 1, 0.0);
    std::size_t count = 0;
    for (std::size_t start = 0; start + nfft <= x.size(); start += hop) {
        const auto p = segment_power(x, start, win);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += p[k];
        ++count;
    }

    Psd psd;
    psd.bin_hz = sample_rate_hz / static_cast<double>(nfft);
    psd.freq_hz.resize(acc.size());
    psd.power_db.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        psd.freq_hz[k] = k * psd.bin_hz;
        psd.power_db[k] = 10.0 * std::log10(acc[k] / count + kPowerFloor);
    }
    return psd;
}

double peak_frequency(const Psd& psd, double f_lo_hz, double f_hi_hz)
{
    return interpolate_peak(psd, strongest_bin(psd, f_lo_hz, f_hi_hz));
}

std::vector<TrackPoint> peak_track(const std::vector<double>& x, double sample_rate_hz,
                                   std::size_t nwin, std::size_t hop, double f_lo_hz,
                                   double f_hi_hz)
{
    if (nwin == 0 || (nwin & (nwin - 1)) != 0)
        throw std::invalid_argument("peak_track: nwin must be a power of two");
    if (x.size() < nwin) throw std::invalid_argument("peak_track: signal shorter than window");
    if (hop == 0) throw std::invalid_argument("peak_track: hop must be > 0");

    const auto win = hann(nwin);
    std::vector<TrackPoint> track;
    for (std::size_t start = 0; start + nwin <= x.size(); start += hop) {
        const auto p = segment_power(x, start, win);
        Psd psd;
        psd.bin_hz = sample_rate_hz / static_cast<double>(nwin);
        psd.freq_hz.resize(p.size());
        psd.power_db.resize(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            psd.freq_hz[k] = k * psd.bin_hz;
            psd.power_db[k] = 10.0 * std::log10(p[k] + kPowerFloor);
        }
        TrackPoint tp;
        tp.t_s = (start + nwin / 2.0) / sample_rate_hz;
        tp.f_peak_hz = peak_frequency(psd, f_lo_hz, f_hi_hz);
        track.push_back(tp);
    }
    return track;
}

} // namespace sweeplink
