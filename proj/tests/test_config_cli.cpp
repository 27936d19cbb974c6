#include "doctest.h"

#include "sweeplink/commands.hpp"
#include "sweeplink/config.hpp"
#include "sweeplink/csv.hpp"
#include "sweeplink/overlap.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>

using namespace sweeplink;
namespace fs = std::filesystem;

namespace {

std::string thrown_message(const std::function<void()>& f)
{
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& haystack, const std::string& needle)
{
    return haystack.find(needle) != std::string::npos;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag)
        : path(fs::temp_directory_path() / (std::string("sweeplink-test-") + tag))
    {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

} // namespace

TEST_CASE("configuration dump and parse round-trip")
{
    RunConfig def;
    CHECK(parse_config("") == def);
    CHECK(parse_config(dump_config(def)) == def);

    RunConfig cfg;
    cfg.odn_reaches_m = {1200.0, 4300.0, 7000.0};
    cfg.odn_reflectances_db = {0.0, -3.5, -11.0};
    cfg.sweep_freq_hz = 12100.0;
    cfg.sweep_ramp_fraction = 0.125;
    cfg.overlap_threshold = 0.05;
    cfg.map_pi_values = {};
    cfg.ofdm_constellation = Constellation::qpsk;
    cfg.link_mitigation = false;
    cfg.link_payload_seed = 0xdeadbeefcafeULL;
    cfg.pilot_mode = PilotMode::reference;
    cfg.pilot_window = 4096;
    CHECK(parse_config(dump_config(cfg)) == cfg);
    CHECK(contains(dump_config(cfg), "odn.group_index = 1.4682\n"));
}

TEST_CASE("parser tolerates comments, whitespace, and spaced lists")
{
    RunConfig cfg = parse_config("# leading comment\n"
                                 "\n"
                                 "  link.osrr_db = 7.5   # trailing comment\n"
                                 "odn.reaches_m = 4300 , 7000\n"
                                 "link.mitigation = false\n"
                                 "ofdm.constellation = qpsk\n"
                                 "pilot.mode = reference\n");
    CHECK(cfg.link_osrr_db == 7.5);
    REQUIRE(cfg.odn_reaches_m.size() == 2);
    CHECK(cfg.odn_reaches_m[1] == 7000.0);
    CHECK_FALSE(cfg.link_mitigation);
    CHECK(cfg.ofdm_constellation == Constellation::qpsk);
    CHECK(cfg.pilot_mode == PilotMode::reference);
}

TEST_CASE("parser errors name the key and the line")
{
    std::string msg = thrown_message([] { parse_config("foo.bar = 1\n"); });
    CHECK(contains(msg, "config line 1"));
    CHECK(contains(msg, "unknown key 'foo.bar'"));

    msg = thrown_message([] { parse_config("link.osrr_db = 1\nlink.osrr_db = 2\n"); });
    CHECK(contains(msg, "config line 2"));
    CHECK(contains(msg, "duplicate key 'link.osrr_db'"));

    msg = thrown_message([] { parse_config("link.osrr_db = abc\n"); });
    CHECK(contains(msg, "invalid value for 'link.osrr_db'"));

    msg = thrown_message([] { parse_config("just some text\n"); });
    CHECK(contains(msg, "expected 'key = value'"));

    msg = thrown_message([] { parse_config("odn.reaches_m = 1,,2\n"); });
    CHECK(contains(msg, "empty list element"));

    CHECK_THROWS_AS(parse_config("link.mitigation = 1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config("ofdm.constellation = qam64\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config("scan.oracle_samples = -4\n"), std::runtime_error);
}

TEST_CASE("resolvers apply the deferred defaults")
{
    RunConfig cfg;

    SweepWaveform w = make_sweep(cfg);
    double delay = round_trip_delay(4300.0, cfg.odn_group_index);
    CHECK(w.sweep_freq_hz == optimal_sweep_frequency(delay));
    cfg.sweep_freq_hz = 9000.0;
    CHECK(make_sweep(cfg).sweep_freq_hz == 9000.0);

    cfg = RunConfig{};
    OverlapSpec spec = make_overlap_spec(cfg);
    CHECK(spec.f_upper_hz == cfg.ofdm_bandwidth_hz);
    CHECK(spec.lock_guard_hz == cfg.link_locking_range_hz);
    CHECK(spec.deviation_hz == cfg.sweep_deviation_hz);
    cfg.overlap_f_upper_hz = 2e8;
    cfg.overlap_lock_guard_hz = 0.0;
    spec = make_overlap_spec(cfg);
    CHECK(spec.f_upper_hz == 2e8);
    CHECK(spec.lock_guard_hz == 0.0);

    cfg = RunConfig{};
    cfg.odn_reaches_m = {4300.0, 7000.0};
    OdnProfile odn = make_odn(cfg);
    REQUIRE(odn.reflections.size() == 2);
    CHECK(odn.reflections[1].reach_m == 7000.0);
    CHECK(odn.reflections[1].reflectance_db == 0.0);
    cfg.odn_reflectances_db = {0.0};
    CHECK(contains(thrown_message([&] { make_odn(cfg); }),
                   "odn.reflectances_db must match odn.reaches_m"));

    cfg = RunConfig{};
    cfg.scan_f_lo_hz = 0.0;
    CHECK_THROWS_AS(make_scan_grid(cfg), std::runtime_error);

    cfg = RunConfig{};
    cfg.link_osrr_db = 9.0;
    cfg.link_mitigation = false;
    cfg.link_payload_seed = 42;
    Scenario sc = make_scenario(cfg);
    CHECK(sc.osrr_db == 9.0);
    CHECK_FALSE(sc.mitigation_enabled);
    CHECK(sc.payload_seed == 42);
    CHECK(sc.lock.locking_range_hz == cfg.link_locking_range_hz);
    CHECK(sc.sweep.sweep_freq_hz == make_sweep(cfg).sweep_freq_hz);

    cfg.pilot_track_f_lo_hz = 5e7;
    PilotConfig pc = make_pilot(cfg);
    CHECK(pc.track_f_lo_hz == 5e7);
    CHECK(pc.mode == PilotMode::homodyne);
}

TEST_CASE("csv cells use shortest round-trip formatting")
{
    CHECK(csv_number(0.1) == "0.1");
    CHECK(csv_number(11871.468078612275) == "11871.468078612275");
    CHECK(csv_number(std::nan("")) == "");
    CHECK(csv_number(INFINITY) == "inf");
    CHECK(csv_number(static_cast<long long>(-7)) == "-7");

    CsvTable t({"a", "b"});
    t.add_row({"1", "2"});
    t.add_row({csv_number(std::nan("")), "x"});
    CHECK(t.str() == "a,b\n1,2\n,x\n");
    CHECK_THROWS_AS(t.add_row({"only-one"}), std::invalid_argument);
}

TEST_CASE("plan command writes its artifacts and resolves the configuration")
{
    TempDir dir("plan");
    CommandContext ctx;
    ctx.out_dir = dir.str();
    CHECK(run_command("plan", ctx) == kExitOk);

    std::string resolved = read_text_file((dir.path / "resolved.cfg").string());
    CHECK(parse_config(resolved) == ctx.cfg);

    std::string plan = read_text_file((dir.path / "plan.csv").string());
    CHECK(contains(plan, "reach_m,f_opt_hz,sfr_lo_hz,sfr_hi_hz,common_lo_hz,"
                         "common_hi_hz,kappa_hz,worst_overlap\n"));
    CHECK(plan.size() > 80);
}

TEST_CASE("plan command signals an empty search window")
{
    TempDir dir("noplan");
    CommandContext ctx;
    ctx.cfg.scan_f_lo_hz = 100.0;
    ctx.cfg.scan_f_hi_hz = 480.0;
    ctx.cfg.scan_f_step_hz = 20.0;
    ctx.out_dir = dir.str();
    // Every frequency this low leaves the replica inside the signal band.
    CHECK(run_command("plan", ctx) == kExitNoPlan);
    std::string plan = read_text_file((dir.path / "plan.csv").string());
    CHECK(contains(plan, ",,,,,,"));
}

TEST_CASE("sfr command writes one row per usable interval")
{
    TempDir dir("sfr");
    CommandContext ctx;
    ctx.cfg.odn_reaches_m = {4300.0, 7000.0};
    ctx.out_dir = dir.str();
    CHECK(run_command("sfr", ctx) == kExitOk);
    std::string sfr = read_text_file((dir.path / "sfr.csv").string());
    CHECK(contains(sfr, "reach_m,sfr_lo_hz,sfr_hi_hz\n"));
    CHECK(contains(sfr, "\n4300,"));
    CHECK(contains(sfr, "\n7000,"));
}

TEST_CASE("unknown commands are rejected")
{
    TempDir dir("unknown");
    CommandContext ctx;
    ctx.out_dir = dir.str();
    CHECK_THROWS_AS(run_command("bogus", ctx), std::invalid_argument);
}
