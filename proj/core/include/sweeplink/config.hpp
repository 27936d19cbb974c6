#pragma once

#include "sweeplink/linksim.hpp"
#include "sweeplink/ofdm.hpp"
#include "sweeplink/planner.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Flat dotted-key run configuration shared by every CLI command.
//
// File format: one `section.key = value` per line, `#` starts a comment,
// blank lines ignored. Every key has a default; unknown or duplicate keys
// and malformed values are hard errors that name the key and line.

namespace sweeplink {

struct RunConfig {
    // Reflection profile of the distribution network.
    std::vector<double> odn_reaches_m{4300.0};
    std::vector<double> odn_reflectances_db{}; // empty: 0 dB relative weight each
    double odn_group_index = 1.4682;

    // Shared TX/LO sweep. freq 0 picks the optimum for the first reach.
    double sweep_deviation_hz = 1.55e9;
    double sweep_freq_hz = 0.0;
    double sweep_ramp_fraction = 0.0;
    double sweep_phase_offset = 0.0;

    // Overlap geometry. Negative values defer to the OFDM band / lock range.
    double overlap_f_upper_hz = -1.0;
    double overlap_lock_guard_hz = -1.0;
    double overlap_crosstalk_bandwidth_hz = -1.0;
    double overlap_threshold = 0.03125;

    // Sweep-frequency scan window for planning and maps.
    double scan_f_lo_hz = 1e3;
    double scan_f_hi_hz = 45e3;
    double scan_f_step_hz = 50.0;
    std::uint32_t scan_oracle_samples = 65536;

    // Effective band shares mapped by the `map` command.
    std::vector<double> map_pi_values{0.05, 0.10, 0.15, 0.20, 0.25,
                                      0.30, 0.35, 0.40, 0.45, 0.50};

    // Payload framing.
    int ofdm_n_subcarriers = 128;
    double ofdm_bandwidth_hz = 125e6;
    Constellation ofdm_constellation = Constellation::qam16;
    double ofdm_cyclic_prefix_fraction = 1.0 / 16.0;
    int ofdm_pilot_symbol_period = 16;
    double ofdm_center_offset_hz = -1.0;

    // Link simulation.
    double link_sample_rate_hz = 4e9;
    double link_duration_periods = 1.0;
    double link_osrr_db = 5.0;
    double link_loss_budget_db = 26.8;
    double link_carrier_signal_ratio_db = 6.0;
    double link_noise_rms = 0.018;
    double link_lo_deviation_mismatch_hz = 60e6;
    double link_sweep_phase_error = 0.0;
    bool link_mitigation = true;
    double link_locking_range_hz = 100e6;
    std::uint64_t link_payload_seed = 1;
    double link_evm_limit_qpsk_pct = 17.5;  // reporting only
    double link_evm_limit_qam16_pct = 12.5; // reporting only

    // Scan points for the osrr-scan / budget-scan commands.
    std::vector<double> osrr_scan_values{0.8, 2.0, 5.0, 8.0, 11.0, 14.0};
    std::vector<double> budget_scan_values{14.8, 17.8, 20.8, 23.8, 26.8, 29.8};

    // Pilot-tone sweep verification.
    double pilot_freq_hz = 200e6;
    PilotMode pilot_mode = PilotMode::homodyne;
    double pilot_reference_offset_hz = -200e6;
    std::uint32_t pilot_window = 2048;
    std::uint32_t pilot_hop = 1024;
    double pilot_track_f_lo_hz = 25e6;
    double pilot_track_f_hi_hz = 0.0; // 0: just below Nyquist

    bool operator==(const RunConfig&) const = default;
};

// Parses config text; throws std::runtime_error naming the key and line on
// unknown keys, duplicates, or malformed values.
RunConfig parse_config(std::string_view text);

RunConfig load_config_file(const std::string& path);

// Every key in declaration order, shortest round-trip number formatting;
// parse_config(dump_config(c)) == c.
std::string dump_config(const RunConfig& cfg);

// Resolved library inputs. These apply the deferred defaults (overlap band
// from the OFDM bandwidth, guard from the locking range, sweep frequency
// from the first reach's optimum) and run the library validators.
OdnProfile make_odn(const RunConfig& cfg);
SweepWaveform make_sweep(const RunConfig& cfg);
OverlapSpec make_overlap_spec(const RunConfig& cfg);
ScanGrid make_scan_grid(const RunConfig& cfg);
OfdmConfig make_ofdm(const RunConfig& cfg);
Scenario make_scenario(const RunConfig& cfg);
PilotConfig make_pilot(const RunConfig& cfg);

} // namespace sweeplink
