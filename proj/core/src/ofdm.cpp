#include "sweeplink/ofdm.hpp"

#include "sweeplink/fft.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sweeplink {

namespace {

constexpr std::uint64_t kTrainingSeed = 0x74726169ULL; // fixed known pattern

std::vector<std::complex<double>> draw_symbols(std::mt19937_64& rng, Constellation c,
                                               std::size_t count)
{
    const auto& points = constellation_points(c);
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    std::vector<std::complex<double>> out(count);
    for (auto& s : out) s = points[pick(rng)];
    return out;
}

} // namespace

void validate(const OfdmConfig& cfg)
{
    if (cfg.n_subcarriers < 1)
        throw std::invalid_argument("OfdmConfig: n_subcarriers must be >= 1");
    if (!(cfg.bandwidth_hz > 0.0))
        throw std::invalid_argument("OfdmConfig: bandwidth_hz must be > 0");
    if (!(cfg.cyclic_prefix_fraction >= 0.0 && cfg.cyclic_prefix_fraction <= 0.5))
        throw std::invalid_argument("OfdmConfig: cyclic_prefix_fraction must lie in [0, 0.5]");
    if (cfg.pilot_symbol_period < 1)
        throw std::invalid_argument("OfdmConfig: pilot_symbol_period must be >= 1");
    if (cfg.center_offset_hz >= 0.0 && cfg.resolved_center_offset_hz() < cfg.bandwidth_hz / 2.0)
        throw std::invalid_argument("OfdmConfig: band must sit fully above DC");
}

const std::vector<std::complex<double>>& constellation_points(Constellation c)
{
    static const std::vector<std::complex<double>> qpsk = [] {
        const double a = 1.0 / std::sqrt(2.0);
        return std::vector<std::complex<double>>{{a, a}, {a, -a}, {-a, a}, {-a, -a}};
    }();
    static const std::vector<std::complex<double>> qam16 = [] {
        std::vector<std::complex<double>> pts;
        const double scale = 1.0 / std::sqrt(10.0); // unit mean energy
        for (double re : {-3.0, -1.0, 1.0, 3.0})
            for (double im : {-3.0, -1.0, 1.0, 3.0}) pts.push_back({re * scale, im * scale});
        return pts;
    }();
    return c == Constellation::qpsk ? qpsk : qam16;
}

OfdmFrame ofdm_modulate(const OfdmConfig& cfg, double sample_rate_hz, std::size_t n_symbols,
                        std::uint64_t payload_seed)
{
    validate(cfg);
    if (n_symbols == 0) throw std::invalid_argument("ofdm_modulate: n_symbols must be > 0");

    const double spacing = cfg.subcarrier_spacing_hz();
    const double ratio = sample_rate_hz / spacing;
    const auto n_fft = static_cast<std::size_t>(std::llround(ratio));
    if (!(sample_rate_hz > 0.0) || std::abs(ratio - static_cast<double>(n_fft)) > 1e-6)
        throw std::invalid_argument(
            "ofdm_modulate: sample_rate must be an integer multiple of the subcarrier spacing");

    OfdmFrame frame;
    frame.cfg = cfg;
    frame.sample_rate_hz = sample_rate_hz;
    frame.n_fft = n_fft;
    frame.n_cp = static_cast<std::size_t>(std::llround(cfg.cyclic_prefix_fraction * n_fft));
    frame.n_symbols = n_symbols;

    const double f_start = cfg.resolved_center_offset_hz() - cfg.bandwidth_hz / 2.0;
    frame.bins.resize(cfg.n_subcarriers);
    for (int k = 0; k < cfg.n_subcarriers; ++k) {
        const double bin = (f_start + k * spacing) / spacing;
        const int b = static_cast<int>(std::llround(bin));
        if (std::abs(bin - b) > 1e-6)
            throw std::invalid_argument("ofdm_modulate: band placement off the DFT grid");
        if (b < 1 || static_cast<std::size_t>(b) >= n_fft / 2)
            throw std::invalid_argument("ofdm_modulate: subcarrier bin outside (0, Nyquist)");
        frame.bins[k] = b;
    }

    std::mt19937_64 training_rng(kTrainingSeed);
    const auto training_pattern =
        draw_symbols(training_rng, Constellation::qpsk, cfg.n_subcarriers);
    std::mt19937_64 payload_rng(payload_seed);

    frame.envelope.reserve(n_symbols * frame.samples_per_symbol());
    for (std::size_t i = 0; i < n_symbols; ++i) {
        const bool is_training = i % (static_cast<std::size_t>(cfg.pilot_symbol_period) + 1) == 0;
        frame.training.push_back(is_training);
        auto cells = is_training
                         ? training_pattern
                         : draw_symbols(payload_rng, cfg.constellation, cfg.n_subcarriers);

        std::vector<std::complex<double>> spec(n_fft, 0.0);
        for (int k = 0; k < cfg.n_subcarriers; ++k) spec[frame.bins[k]] = cells[k];
        auto core = ifft(spec); // x[n] = (1/N) sum_b spec[b] e^{+j2pi b n/N}

        for (std::size_t n = n_fft - frame.n_cp; n < n_fft; ++n) frame.envelope.push_back(core[n]);
        frame.envelope.insert(frame.envelope.end(), core.begin(), core.end());
        frame.symbols.push_back(std::move(cells));
    }

    double power = 0.0;
    for (const auto& v : frame.envelope) power += std::norm(v);
    power /= static_cast<double>(frame.envelope.size());
    if (power > 0.0) {
        const double scale = 1.0 / std::sqrt(power);
        for (auto& v : frame.envelope) v *= scale;
    }
    return frame;
}

EvmResult ofdm_demodulate_evm(const OfdmFrame& frame, const std::vector<double>& rf)
{
    const std::size_t span = frame.n_symbols * frame.samples_per_symbol();
    if (rf.size() < span)
        throw std::invalid_argument("ofdm_demodulate_evm: waveform shorter than the frame");

    const int n_sc = frame.cfg.n_subcarriers;
    EvmResult res;

    // Per-symbol subcarrier values, Y[symbol][k].
    std::vector<std::vector<std::complex<double>>> grid(frame.n_symbols);
    for (std::size_t i = 0; i < frame.n_symbols; ++i) {
        const std::size_t core = i * frame.samples_per_symbol() + frame.n_cp;
        std::vector<std::complex<double>> seg(frame.n_fft);
        for (std::size_t n = 0; n < frame.n_fft; ++n) seg[n] = rf[core + n];
        auto spec = fft(seg);
        grid[i].resize(n_sc);
        for (int k = 0; k < n_sc; ++k)
            grid[i][k] = spec[frame.bins[k]] / static_cast<double>(frame.n_fft);
    }

    // One complex tap per subcarrier from the training symbols.
    std::vector<std::complex<double>> taps(n_sc, 0.0);
    std::size_t n_train = 0;
    for (std::size_t i = 0; i < frame.n_symbols; ++i) {
        if (!frame.training[i]) continue;
        ++n_train;
        for (int k = 0; k < n_sc; ++k) taps[k] += grid[i][k] / frame.symbols[i][k];
    }
    if (n_train == 0) {
        res.failed = true;
        res.failure_reason = "no training symbols in frame";
        return res;
    }
    double tap_power = 0.0;
    for (auto& h : taps) {
        h /= static_cast<double>(n_train);
        tap_power += std::norm(h);
    }
    tap_power /= n_sc;
    for (const auto& h : taps) {
        if (!std::isfinite(h.real()) || !std::isfinite(h.imag()) ||
            std::norm(h) < 1e-12 * tap_power) {
            res.failed = true;
            res.failure_reason = "degenerate equalizer tap";
            return res;
        }
    }

    std::vector<double> err2(n_sc, 0.0);
    std::size_t n_data = 0;
    for (std::size_t i = 0; i < frame.n_symbols; ++i) {
        if (frame.training[i]) continue;
        ++n_data;
        for (int k = 0; k < n_sc; ++k) {
            const auto eq = grid[i][k] / taps[k];
            err2[k] += std::norm(eq - frame.symbols[i][k]);
        }
    }
    if (n_data == 0) {
        res.failed = true;
        res.failure_reason = "no data symbols in frame";
        return res;
    }

    res.per_subcarrier_pct.resize(n_sc);
    double sum = 0.0;
    for (int k = 0; k < n_sc; ++k) {
        // Reference grids are unit-energy, so the error RMS is the EVM.
        res.per_subcarrier_pct[k] = 100.0 * std::sqrt(err2[k] / static_cast<double>(n_data));
        sum += res.per_subcarrier_pct[k];
        if (!std::isfinite(res.per_subcarrier_pct[k])) {
            res.failed = true;
            res.failure_reason = "non-finite error vector";
            return res;
        }
    }
    res.avg_pct = sum / n_sc;
    return res;
}

} // namespace sweeplink
