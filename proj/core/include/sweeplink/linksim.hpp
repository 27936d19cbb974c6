#pragma once

#include "sweeplink/ofdm.hpp"
#include "sweeplink/planner.hpp"
#include "sweeplink/spectrum.hpp"
#include "sweeplink/waveform.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

// Discrete-time complex-baseband simulation of a coherent link whose
// transmitter and local oscillator share a synchronized frequency sweep.
// The only impairments modeled are the delayed reflection of the LO-side
// emission, an ideal-snap injection-lock guard band, attenuation, and
// additive electrical noise.

namespace sweeplink {

struct LockModel {
    double locking_range_hz = 100e6; // > 0, half-width around the lock target
};

struct Scenario {
    OdnProfile odn;      // reflections may be empty (reflection-free run)
    SweepWaveform sweep; // shared TX/LO waveform; also sets run duration
    OfdmConfig ofdm;
    LockModel lock;

    double sample_rate_hz = 4e9;
    double duration_periods = 1.0;        // run length in sweep periods
    double osrr_db = 5.0;                 // signal-to-reflection power ratio at receiver input
    double loss_budget_db = 26.8;         // signal attenuation
    double carrier_signal_ratio_db = 6.0; // optical carrier vs OFDM sideband power
    double noise_rms = 0.018;             // electrical noise std per sample, LO-beat units
    double lo_deviation_mismatch_hz = 60e6; // LO free-run detuning vs the shared sweep
    double sweep_phase_error = 0.0;       // LO sweep start error, fraction of a period
    bool mitigation_enabled = true;       // false freezes both lasers (static wavelengths)
    std::uint64_t payload_seed = 1;
};

void validate(const Scenario& sc);

// Number of whole OFDM symbols covering duration_periods sweep periods.
std::size_t scenario_symbol_count(const Scenario& sc);

struct PropagationResult {
    std::vector<std::complex<double>> signal;     // attenuated modulated field
    std::vector<std::complex<double>> reflection; // delayed LO-side emissions

    std::vector<std::complex<double>> total() const;
};

// Receiver-input field for a transmitted real envelope s (unit RMS).
// The reflection term carries the LO waveform (detuning included) delayed by
// each reflector's round trip and is scaled so the summed reflected power
// sits osrr_db below the received signal power.
PropagationResult propagate(const Scenario& sc, const std::vector<double>& s);

struct DetectionResult {
    std::vector<double> photocurrent; // DC-removed, noise added
    std::vector<std::uint8_t> locked; // per-sample lock state
    double lock_fraction = 0.0;
};

// Square-law detection against a unit LO. Per sample the LO phase snaps to
// the signal carrier when the carrier sits within the locking range of the
// LO's natural frequency and the crosstalk power inside the guard band does
// not exceed the received carrier power; otherwise the LO free-runs.
DetectionResult homodyne_detect(const Scenario& sc, const PropagationResult& prop,
                                std::uint64_t noise_seed);

struct LinkResult {
    EvmResult evm;
    double lock_fraction = 0.0;
    double osrr_db = 0.0;   // as applied in this run
    double budget_db = 0.0;
    std::vector<double> photocurrent;
};

// Modulate, propagate, detect, demodulate one scenario.
LinkResult run_single_case(const Scenario& sc, std::uint64_t noise_seed);

enum class LinkCase { nofr_static, nofr_swept, fr_static, fr_swept };
const char* case_name(LinkCase c);

struct CasePoint {
    LinkCase kase = LinkCase::nofr_static;
    double osrr_db = 0.0;
    double budget_db = 0.0;
    double evm_avg_pct = 0.0;
    double penalty_pct = 0.0; // vs the matching no-reflection case (swept vs swept,
                              // static vs static; the swept baseline row shows its
                              // own offset vs the static baseline)
    double lock_fraction = 0.0;
    bool failed = false;
    EvmResult evm;
};

enum class ScanKind { single, osrr, budget };

// Noise substream used by run_link_experiment for a given scan point and
// case, derived deterministically from the payload seed.
std::uint64_t case_noise_seed(std::uint64_t payload_seed, std::size_t point_index,
                              LinkCase kase);

// Runs the four comparison cases (reflections on/off x sweep on/off) at each
// scan point. The payload is identical across cases and points; noise uses a
// distinct deterministic substream per (point, case). Budget scans keep the
// absolute reflected power anchored at (osrr_db, loss_budget_db), so the
// effective OSRR degrades dB-for-dB as the budget grows.
std::vector<CasePoint> run_link_experiment(const Scenario& base, ScanKind kind,
                                           const std::vector<double>& values);

enum class PilotMode { homodyne, reference };

struct PilotConfig {
    double freq_hz = 200e6;             // pilot tone modulated on the carrier
    PilotMode mode = PilotMode::homodyne;
    double reference_offset_hz = -200e6; // stable reference position vs nominal carrier
    std::size_t window = 2048;           // short-time FFT length
    std::size_t hop = 1024;
    double track_f_lo_hz = 25e6;         // peak search band
    double track_f_hi_hz = 0.0;          // 0: just below Nyquist
};

struct PilotResult {
    std::vector<TrackPoint> track;
    Psd spectrum;
    double lock_fraction = 1.0;
};

// Replaces the OFDM payload with a single pilot tone. Homodyne mode runs the
// locked receiver chain; reference mode beats the raw swept emission against
// a stable reference carrier (no receiver, no reflections).
PilotResult pilot_beat_spectrum(const Scenario& sc, const PilotConfig& pc,
                                std::uint64_t noise_seed);

} // namespace sweeplink
