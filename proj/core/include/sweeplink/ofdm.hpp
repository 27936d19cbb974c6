#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

// Baseband OFDM framing for the radio-over-fiber payload: cyclic-prefixed
// symbols on a contiguous subcarrier block placed just above DC, with known
// training symbols interleaved for one-tap equalization.

namespace sweeplink {

enum class Constellation { qpsk, qam16 };

struct OfdmConfig {
    int n_subcarriers = 128;
    double bandwidth_hz = 125e6;
    Constellation constellation = Constellation::qam16;
    double cyclic_prefix_fraction = 1.0 / 16.0;
    int pilot_symbol_period = 16;   // data symbols between training symbols
    double center_offset_hz = -1.0; // band center above DC; < 0 selects
                                    // bandwidth/2 + one subcarrier spacing

    double subcarrier_spacing_hz() const { return bandwidth_hz / n_subcarriers; }
    double resolved_center_offset_hz() const
    {
        return center_offset_hz < 0.0 ? bandwidth_hz / 2.0 + subcarrier_spacing_hz()
                                      : center_offset_hz;
    }
    // Highest occupied frequency (upper edge of the top subcarrier).
    double upper_edge_hz() const
    {
        return resolved_center_offset_hz() + bandwidth_hz / 2.0;
    }
};

void validate(const OfdmConfig& cfg);

// Unit-energy constellation grid (mean squared magnitude 1).
const std::vector<std::complex<double>>& constellation_points(Constellation c);

struct OfdmFrame {
    OfdmConfig cfg;
    double sample_rate_hz = 0.0;
    std::size_t n_fft = 0;
    std::size_t n_cp = 0;
    std::size_t n_symbols = 0;
    std::vector<int> bins;          // subcarrier index -> DFT bin at n_fft
    std::vector<bool> training;     // per OFDM symbol
    std::vector<std::vector<std::complex<double>>> symbols; // reference grid [symbol][subcarrier]
    std::vector<std::complex<double>> envelope; // unit average power, n_symbols*(n_fft+n_cp)

    std::size_t samples_per_symbol() const { return n_fft + n_cp; }
};

// Builds n_symbols cyclic-prefixed symbols at the given sample rate. The
// first symbol and every (pilot_symbol_period+1)-th afterwards carry a fixed
// QPSK training pattern; payload cells are drawn from payload_seed.
// sample_rate must be an integer multiple of the subcarrier spacing.
OfdmFrame ofdm_modulate(const OfdmConfig& cfg, double sample_rate_hz, std::size_t n_symbols,
                        std::uint64_t payload_seed);

struct EvmResult {
    std::vector<double> per_subcarrier_pct; // RMS error over data symbols, % of unit grid
    double avg_pct = 0.0;                   // mean across subcarriers
    bool failed = false;                    // degenerate equalizer or non-finite error
    std::string failure_reason;
};

// Demodulates a detected real-valued waveform aligned with the frame start,
// equalizes per subcarrier with the mean training-symbol response, and
// reports error vector magnitudes against the reference grid.
EvmResult ofdm_demodulate_evm(const OfdmFrame& frame, const std::vector<double>& rf);

} // namespace sweeplink
