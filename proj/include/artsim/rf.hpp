#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "artsim/gridworld.hpp"

namespace artsim {

// All radio constants of the link model. Defaults model a 2.4 GHz WiFi
// link: Friis reference loss at 1 m, log-distance exponent n=3 for
// cluttered enclosed spaces, -88 dBm noise floor, 20 MHz channel.
struct RfParams {
    double transmit_power_dbm = 20.0;
    double tx_gain_db = 0.0;
    double rx_gain_db = 0.0;
    double wavelength_m = 0.12491;
    double reference_distance_m = 1.0;
    double reference_loss_db = 0.0;  // PL(d0); defaults() derives it from Friis
    double path_loss_exponent = 3.0;
    double shadow_sigma_db = 0.0;
    double noise_floor_dbm = -88.0;
    double bandwidth_hz = 20.0e6;

    static RfParams defaults();
    void validate() const;  // throws std::invalid_argument
};

// One signal strength measurement taken by the Scout.
struct SignalSample {
    double rssi_dbm = 0.0;
    Pose pose;
    std::int64_t tick = 0;
};

// Ordered sample log with one retained sample per grid cell (latest wins).
class SignalLog {
public:
    SignalLog(int grid_width, double resolution_m)
        : width_(grid_width), resolution_(resolution_m) {}

    void record(const SignalSample& sample);
    const std::vector<SignalSample>& samples() const { return samples_; }
    bool empty() const { return samples_.empty(); }
    std::size_t size() const { return samples_.size(); }

private:
    int width_;
    double resolution_;
    std::vector<SignalSample> samples_;
    std::unordered_map<std::int64_t, std::size_t> slot_by_cell_;
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Free-space received power (dBm): Pt + Gt + Gr - 20 log10(4 pi d / lambda).
// Throws std::domain_error for d <= 0.
double friis_received_power(const RfParams& params, double distance_m);

// Free-space path loss at distance_m for the given wavelength, in dB.
double free_space_path_loss_db(double distance_m, double wavelength_m);

// Log-distance path loss PL(d0) + 10 n log10(d/d0) + sigma * noise_draw.
// Distances below d0 clamp to d0.
double path_loss_db(const RfParams& params, double distance_m, double noise_draw = 0.0);

// Received power over a signal path of the given length. An infinite
// distance yields the no-link sentinel (-infinity dBm).
double rssi_dbm(const RfParams& params, double signal_path_distance_m, double noise_draw = 0.0);

// Linear SNR from powers in dBm: 10^(rssi/10) / 10^(floor/10).
double snr_linear(double rssi_dbm, double noise_floor_dbm);

// Shannon capacity B log2(1 + SNR) in bits per second. The no-link
// sentinel maps to 0 bps.
double channel_capacity(const RfParams& params, double rssi_dbm);

// Payload transfer duration S/C in seconds; zero capacity yields the
// infinite-time sentinel, zero payload takes zero time.
double transmission_time(const RfParams& params, std::int64_t payload_bits, double rssi_dbm);

// Deterministic standard-normal generator (Box-Muller over a seeded
// xorshift-style stream) so shadow fading replays identically everywhere.
class GaussianDraws {
public:
    explicit GaussianDraws(std::uint64_t seed);
    double next();

private:
    double next_uniform();  // in (0,1)
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace artsim
