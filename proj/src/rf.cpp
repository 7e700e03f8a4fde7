#include "artsim/rf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace artsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RfParams RfParams::defaults() {
    RfParams p;
    p.reference_loss_db = free_space_path_loss_db(p.reference_distance_m, p.wavelength_m);
    return p;
}

void RfParams::validate() const {
    if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
    if (!(reference_distance_m > 0.0)) {
        throw std::invalid_argument("reference distance must be positive");
    }
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
    if (shadow_sigma_db < 0.0) throw std::invalid_argument("shadow sigma must be >= 0");
    if (path_loss_exponent < 2.0) {
        throw std::invalid_argument("path loss exponent must be >= 2 for obstructed environments");
    }
}

void SignalLog::record(const SignalSample& sample) {
    if (!std::isfinite(sample.rssi_dbm)) {
        return;  // no-link sentinel carries no transmit candidate
    }
    const std::int64_t cx = static_cast<std::int64_t>(std::floor(sample.pose.x / resolution_));
    const std::int64_t cy = static_cast<std::int64_t>(std::floor(sample.pose.y / resolution_));
    const std::int64_t key = cy * width_ + cx;
    auto it = slot_by_cell_.find(key);
    if (it == slot_by_cell_.end()) {
        slot_by_cell_.emplace(key, samples_.size());
        samples_.push_back(sample);
    } else {
        samples_[it->second] = sample;
    }
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double free_space_path_loss_db(double distance_m, double wavelength_m) {
    return 20.0 * std::log10(4.0 * M_PI * distance_m / wavelength_m);
}

double friis_received_power(const RfParams& params, double distance_m) {
    if (!(distance_m > 0.0)) {
        throw std::domain_error("friis_received_power: distance must be positive");
    }
    return params.transmit_power_dbm + params.tx_gain_db + params.rx_gain_db -
           free_space_path_loss_db(distance_m, params.wavelength_m);
}

double path_loss_db(const RfParams& params, double distance_m, double noise_draw) {
    const double d = std::max(distance_m, params.reference_distance_m);
    return params.reference_loss_db +
           10.0 * params.path_loss_exponent * std::log10(d / params.reference_distance_m) +
           params.shadow_sigma_db * noise_draw;
}

double rssi_dbm(const RfParams& params, double signal_path_distance_m, double noise_draw) {
    if (std::isinf(signal_path_distance_m)) {
        return -kInf;
    }
    return params.transmit_power_dbm + params.tx_gain_db + params.rx_gain_db -
           path_loss_db(params, signal_path_distance_m, noise_draw);
}

double snr_linear(double rssi_dbm, double noise_floor_dbm) {
    if (rssi_dbm == -kInf) {
        return 0.0;
    }
    return dbm_to_mw(rssi_dbm) / dbm_to_mw(noise_floor_dbm);
}

double channel_capacity(const RfParams& params, double rssi_dbm) {
    const double snr = snr_linear(rssi_dbm, params.noise_floor_dbm);
    return params.bandwidth_hz * std::log2(1.0 + snr);
}

double transmission_time(const RfParams& params, std::int64_t payload_bits, double rssi_dbm) {
    if (payload_bits < 0) {
        throw std::domain_error("transmission_time: payload must be non-negative");
    }
    if (payload_bits == 0) {
        return 0.0;
    }
    const double capacity = channel_capacity(params, rssi_dbm);
    if (!(capacity > 0.0)) {
        return kInf;
    }
    return static_cast<double>(payload_bits) / capacity;
}

GaussianDraws::GaussianDraws(std::uint64_t seed) : state_(seed ^ 0x9E3779B97F4A7C15ULL) {
    if (state_ == 0) {
        state_ = 0x9E3779B97F4A7C15ULL;
    }
}

double GaussianDraws::next_uniform() {
    // splitmix64 step; top 53 bits make a double in (0,1).
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z = z ^ (z >> 31);
    return (static_cast<double>(z >> 11) + 0.5) / 9007199254740992.0;
}

double GaussianDraws::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace artsim
