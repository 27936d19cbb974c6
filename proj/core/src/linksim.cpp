#include "sweeplink/linksim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sweeplink {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

double wrap_unit(double x)
{
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

// Sweep phase in cycles measured from t = 0; valid for negative times so the
// delayed reflection sees the waveform's steady-state history.
double phase_cycles(const SweepWaveform& w, double t_s)
{
    if (t_s >= 0.0) return accumulated_phase(w, 0.0, t_s);
    return -accumulated_phase(w, t_s, 0.0);
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Optical-frequency trajectories of the transmitter and the LO relative to
// the common rest wavelength. With mitigation off both lasers sit still and
// only the LO's deviation mismatch separates them.
struct FieldModel {
    bool swept = false;
    SweepWaveform tx{};
    SweepWaveform lo{};
    double mismatch_hz = 0.0;

    double tx_phase(double t) const { return swept ? phase_cycles(tx, t) : 0.0; }
    double tx_freq(double t) const { return swept ? instantaneous_frequency(tx, t) : 0.0; }
    double lo_phase(double t) const
    {
        return (swept ? phase_cycles(lo, t) : 0.0) + mismatch_hz * t;
    }
    double lo_freq(double t) const
    {
        return (swept ? instantaneous_frequency(lo, t) : 0.0) + mismatch_hz;
    }
};

FieldModel make_fields(const Scenario& sc)
{
    FieldModel fm;
    fm.swept = sc.mitigation_enabled;
    fm.mismatch_hz = sc.lo_deviation_mismatch_hz;
    if (fm.swept) {
        fm.tx = sc.sweep;
        fm.lo = sc.sweep;
        fm.lo.phase_offset = wrap_unit(sc.sweep.phase_offset + sc.sweep_phase_error);
    }
    return fm;
}

struct CarrierSplit {
    double a0 = 0.0; // carrier amplitude share
    double b0 = 0.0; // sideband amplitude share, a0^2 + b0^2 = 1
};

CarrierSplit carrier_split(double carrier_signal_ratio_db)
{
    double ratio = std::pow(10.0, carrier_signal_ratio_db / 10.0);
    double carrier_fraction = ratio / (1.0 + ratio);
    return {std::sqrt(carrier_fraction), std::sqrt(1.0 - carrier_fraction)};
}

struct Reflector {
    double rho = 0.0; // field amplitude at the receiver input
    double delay_s = 0.0;
};

// Reflected amplitudes normalized so the summed reflected power lands
// osrr_db below the received signal power; relative weights follow each
// reflector's return loss.
std::vector<Reflector> make_reflectors(const Scenario& sc)
{
    std::vector<Reflector> out;
    if (sc.odn.reflections.empty() || !std::isfinite(sc.osrr_db)) return out;
    double att = std::pow(10.0, -sc.loss_budget_db / 10.0);
    double total_power = att * std::pow(10.0, -sc.osrr_db / 10.0);
    if (!(total_power > 0.0)) return out;
    double weight_sum = 0.0;
    for (const auto& r : sc.odn.reflections)
        weight_sum += std::pow(10.0, r.reflectance_db / 10.0);
    out.reserve(sc.odn.reflections.size());
    for (const auto& r : sc.odn.reflections) {
        double w = std::pow(10.0, r.reflectance_db / 10.0);
        Reflector ref;
        ref.rho = std::sqrt(total_power * w / weight_sum);
        ref.delay_s = round_trip_delay(r.reach_m, sc.odn.group_index);
        out.push_back(ref);
    }
    return out;
}

std::vector<double> unit_rms_real_envelope(const OfdmFrame& frame)
{
    std::vector<double> s(frame.envelope.size());
    double power = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = frame.envelope[i].real();
        power += s[i] * s[i];
    }
    power /= static_cast<double>(s.size());
    if (!(power > 0.0)) throw std::invalid_argument("linksim: degenerate payload envelope");
    double inv = 1.0 / std::sqrt(power);
    for (double& v : s) v *= inv;
    return s;
}

void remove_dc_and_add_noise(std::vector<double>& x, double noise_rms, std::uint64_t seed)
{
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (double& v : x) v -= mean;
    if (noise_rms > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, noise_rms);
        for (double& v : x) v += noise(rng);
    }
}

} // namespace

void validate(const Scenario& sc)
{
    validate(sc.sweep);
    validate(sc.ofdm);
    if (!sc.odn.reflections.empty()) validate(sc.odn);
    if (!(sc.lock.locking_range_hz > 0.0))
        throw std::invalid_argument("scenario: locking_range_hz must be > 0");
    if (!(sc.sample_rate_hz > 0.0))
        throw std::invalid_argument("scenario: sample_rate_hz must be > 0");
    double top = sc.sweep.deviation_hz + sc.ofdm.upper_edge_hz();
    if (!(sc.sample_rate_hz > 2.0 * top))
        throw std::invalid_argument(
            "scenario: sample_rate_hz must exceed twice the sweep deviation plus the "
            "OFDM band edge");
    if (!(sc.duration_periods > 0.0))
        throw std::invalid_argument("scenario: duration_periods must be > 0");
    if (!(sc.loss_budget_db >= 0.0))
        throw std::invalid_argument("scenario: loss_budget_db must be >= 0");
    if (!(sc.noise_rms >= 0.0))
        throw std::invalid_argument("scenario: noise_rms must be >= 0");
    if (std::isnan(sc.osrr_db))
        throw std::invalid_argument("scenario: osrr_db must not be NaN");
    if (!std::isfinite(sc.carrier_signal_ratio_db))
        throw std::invalid_argument("scenario: carrier_signal_ratio_db must be finite");
    if (!std::isfinite(sc.lo_deviation_mismatch_hz) || sc.lo_deviation_mismatch_hz < 0.0)
        throw std::invalid_argument("scenario: lo_deviation_mismatch_hz must be >= 0");
    if (!std::isfinite(sc.sweep_phase_error))
        throw std::invalid_argument("scenario: sweep_phase_error must be finite");
}

std::size_t scenario_symbol_count(const Scenario& sc)
{
    OfdmFrame probe = ofdm_modulate(sc.ofdm, sc.sample_rate_hz, 1, 0);
    double t_symbol = static_cast<double>(probe.samples_per_symbol()) / sc.sample_rate_hz;
    double span = sc.duration_periods * sc.sweep.period_s();
    auto n = static_cast<std::size_t>(std::ceil(span / t_symbol - 1e-9));
    return std::max<std::size_t>(n, 1);
}

std::vector<std::complex<double>> PropagationResult::total() const
{
    std::vector<std::complex<double>> sum(signal.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = signal[i] + reflection[i];
    return sum;
}

PropagationResult propagate(const Scenario& sc, const std::vector<double>& s)
{
    validate(sc);
    if (s.empty()) throw std::invalid_argument("propagate: empty envelope");
    const std::size_t n = s.size();
    const double dt = 1.0 / sc.sample_rate_hz;
    FieldModel fm = make_fields(sc);
    CarrierSplit cs = carrier_split(sc.carrier_signal_ratio_db);
    double amp_att = std::pow(10.0, -sc.loss_budget_db / 20.0);

    PropagationResult out;
    out.signal.resize(n);
    out.reflection.assign(n, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) * dt;
        double amp = amp_att * (cs.a0 + cs.b0 * s[i]);
        out.signal[i] = std::polar(amp, kTau * fm.tx_phase(t));
    }
    for (const Reflector& r : make_reflectors(sc)) {
        for (std::size_t i = 0; i < n; ++i) {
            double t = static_cast<double>(i) * dt - r.delay_s;
            out.reflection[i] += std::polar(r.rho, kTau * fm.lo_phase(t));
        }
    }
    return out;
}

DetectionResult homodyne_detect(const Scenario& sc, const PropagationResult& prop,
                                std::uint64_t noise_seed)
{
    validate(sc);
    const std::size_t n = prop.signal.size();
    if (n == 0 || prop.reflection.size() != n)
        throw std::invalid_argument("homodyne_detect: mismatched field lengths");
    const double dt = 1.0 / sc.sample_rate_hz;
    FieldModel fm = make_fields(sc);
    CarrierSplit cs = carrier_split(sc.carrier_signal_ratio_db);
    std::vector<Reflector> refl = make_reflectors(sc);
    const double range = sc.lock.locking_range_hz;
    const double carrier_power =
        std::pow(10.0, -sc.loss_budget_db / 10.0) * cs.a0 * cs.a0;

    DetectionResult out;
    out.photocurrent.resize(n);
    out.locked.resize(n);
    double theta = 0.0; // LO phase, radians
    std::size_t locked_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) * dt;
        double nu_sig = fm.tx_freq(t);
        double nu_nat = fm.lo_freq(t);
        bool offset_ok = std::abs(nu_sig - nu_nat) <= range;
        double guard_power = 0.0;
        for (const Reflector& r : refl) {
            double nu_r = fm.lo_freq(t - r.delay_s);
            if (std::abs(nu_r - nu_sig) <= range) guard_power += r.rho * r.rho;
        }
        bool locked = offset_ok && guard_power <= carrier_power;
        if (locked)
            theta = kTau * fm.tx_phase(t);
        else if (i > 0)
            theta += kTau * fm.lo_freq(t - dt) * dt; // phase-continuous free run
        else
            theta = kTau * fm.lo_phase(0.0);
        std::complex<double> rx = prop.signal[i] + prop.reflection[i];
        out.photocurrent[i] = std::norm(rx + std::polar(1.0, theta));
        out.locked[i] = locked ? 1 : 0;
        locked_count += locked ? 1 : 0;
    }
    out.lock_fraction = static_cast<double>(locked_count) / static_cast<double>(n);
    remove_dc_and_add_noise(out.photocurrent, sc.noise_rms, noise_seed);
    return out;
}

LinkResult run_single_case(const Scenario& sc, std::uint64_t noise_seed)
{
    validate(sc);
    OfdmFrame frame =
        ofdm_modulate(sc.ofdm, sc.sample_rate_hz, scenario_symbol_count(sc), sc.payload_seed);
    std::vector<double> s = unit_rms_real_envelope(frame);
    PropagationResult prop = propagate(sc, s);
    DetectionResult det = homodyne_detect(sc, prop, noise_seed);

    LinkResult res;
    res.evm = ofdm_demodulate_evm(frame, det.photocurrent);
    res.lock_fraction = det.lock_fraction;
    res.osrr_db = sc.osrr_db;
    res.budget_db = sc.loss_budget_db;
    res.photocurrent = std::move(det.photocurrent);
    return res;
}

const char* case_name(LinkCase c)
{
    switch (c) {
    case LinkCase::nofr_static: return "nofr_static";
    case LinkCase::nofr_swept: return "nofr_swept";
    case LinkCase::fr_static: return "fr_static";
    case LinkCase::fr_swept: return "fr_swept";
    }
    return "unknown";
}

std::uint64_t case_noise_seed(std::uint64_t payload_seed, std::size_t point_index,
                              LinkCase kase)
{
    return splitmix64(payload_seed ^ (0x6c696e6bULL + point_index * 8191ULL +
                                      static_cast<std::uint64_t>(kase)));
}

std::vector<CasePoint> run_link_experiment(const Scenario& base, ScanKind kind,
                                           const std::vector<double>& values)
{
    validate(base);
    std::vector<double> points = kind == ScanKind::single ? std::vector<double>{0.0} : values;
    if (points.empty()) throw std::invalid_argument("run_link_experiment: empty scan");
    constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

    std::vector<CasePoint> out;
    out.reserve(points.size() * 4);
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        Scenario point = base;
        if (kind == ScanKind::osrr) {
            point.osrr_db = points[pi];
        } else if (kind == ScanKind::budget) {
            // Reflected power stays pinned at the (osrr, budget) anchor, so the
            // effective OSRR falls dB-for-dB as the budget grows.
            point.loss_budget_db = points[pi];
            point.osrr_db = base.osrr_db + base.loss_budget_db - points[pi];
        }
        double baseline_static = kNan;
        double baseline_swept = kNan;
        for (int ci = 0; ci < 4; ++ci) {
            auto kase = static_cast<LinkCase>(ci);
            bool with_fr = kase == LinkCase::fr_static || kase == LinkCase::fr_swept;
            bool swept = kase == LinkCase::nofr_swept || kase == LinkCase::fr_swept;
            Scenario run = point;
            if (!with_fr) run.odn.reflections.clear();
            run.mitigation_enabled = swept;
            LinkResult r = run_single_case(run, case_noise_seed(base.payload_seed, pi, kase));

            CasePoint row;
            row.kase = kase;
            row.osrr_db = point.osrr_db;
            row.budget_db = point.loss_budget_db;
            row.failed = r.evm.failed;
            row.evm_avg_pct = r.evm.failed ? kNan : r.evm.avg_pct;
            row.lock_fraction = r.lock_fraction;
            row.evm = std::move(r.evm);
            if (kase == LinkCase::nofr_static) baseline_static = row.evm_avg_pct;
            if (kase == LinkCase::nofr_swept) baseline_swept = row.evm_avg_pct;
            double baseline = swept ? baseline_swept : baseline_static;
            row.penalty_pct = kase == LinkCase::nofr_static
                                  ? 0.0
                                  : (kase == LinkCase::nofr_swept
                                         ? row.evm_avg_pct - baseline_static
                                         : row.evm_avg_pct - baseline);
            out.push_back(std::move(row));
        }
    }
    return out;
}

PilotResult pilot_beat_spectrum(const Scenario& sc, const PilotConfig& pc,
                                std::uint64_t noise_seed)
{
    validate(sc);
    if (!(pc.freq_hz > 0.0) || pc.freq_hz >= sc.sample_rate_hz / 2.0)
        throw std::invalid_argument("pilot: freq_hz must lie in (0, sample_rate/2)");
    if (pc.window < 64 || (pc.window & (pc.window - 1)) != 0)
        throw std::invalid_argument("pilot: window must be a power of two >= 64");
    if (pc.hop == 0 || pc.hop > pc.window)
        throw std::invalid_argument("pilot: hop must lie in [1, window]");
    if (!std::isfinite(pc.reference_offset_hz))
        throw std::invalid_argument("pilot: reference_offset_hz must be finite");

    const double rate = sc.sample_rate_hz;
    const double dt = 1.0 / rate;
    auto n = static_cast<std::size_t>(
        std::llround(sc.duration_periods * sc.sweep.period_s() * rate));
    n = std::max(n, pc.window);

    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = std::sqrt(2.0) * std::cos(kTau * pc.freq_hz * static_cast<double>(i) * dt);

    PilotResult res;
    std::vector<double> x;
    if (pc.mode == PilotMode::homodyne) {
        PropagationResult prop = propagate(sc, s);
        DetectionResult det = homodyne_detect(sc, prop, noise_seed);
        res.lock_fraction = det.lock_fraction;
        x = std::move(det.photocurrent);
    } else {
        // Direct tap of the swept emission beaten against a stable reference:
        // no fiber, no receiver lock involved.
        FieldModel fm = make_fields(sc);
        CarrierSplit cs = carrier_split(sc.carrier_signal_ratio_db);
        x.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double t = static_cast<double>(i) * dt;
            std::complex<double> emit =
                std::polar(cs.a0 + cs.b0 * s[i], kTau * fm.tx_phase(t));
            std::complex<double> ref = std::polar(1.0, kTau * pc.reference_offset_hz * t);
            x[i] = std::norm(emit + ref);
        }
        remove_dc_and_add_noise(x, sc.noise_rms, noise_seed);
        res.lock_fraction = 1.0;
    }

    double f_hi = pc.track_f_hi_hz > 0.0 ? pc.track_f_hi_hz : 0.495 * rate;
    if (!(pc.track_f_lo_hz >= 0.0) || !(f_hi > pc.track_f_lo_hz))
        throw std::invalid_argument("pilot: invalid track band");
    res.track = peak_track(x, rate, pc.window, pc.hop, pc.track_f_lo_hz, f_hi);
    res.spectrum = welch_psd(x, rate, pc.window, pc.hop);
    return res;
}

} // namespace sweeplink
