#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "artsim/rf.hpp"

using namespace artsim;

namespace {

RfParams example_params() {
    // 2.4 GHz link with a 0.125 m wavelength so the reference numbers land
    // on round values: FSPL(1 m) = 20 log10(4 pi / 0.125) = 40.046 dB.
    RfParams p;
    p.transmit_power_dbm = 20.0;
    p.tx_gain_db = 0.0;
    p.rx_gain_db = 0.0;
    p.wavelength_m = 0.125;
    p.reference_distance_m = 1.0;
    p.reference_loss_db = 40.05;
    p.path_loss_exponent = 3.0;
    p.shadow_sigma_db = 0.0;
    p.noise_floor_dbm = -88.0;
    p.bandwidth_hz = 20.0e6;
    return p;
}

}  // namespace

TEST_CASE("friis reference values") {
    const RfParams p = example_params();

    // Hand evaluation: 20 - 20 log10(4 pi * 1 / 0.125).
    const double expected_1m = 20.0 - 20.0 * std::log10(4.0 * M_PI / 0.125);
    const double got_1m = friis_received_power(p, 1.0);
    CHECK(got_1m == doctest::Approx(expected_1m).epsilon(1e-9));
    CHECK(std::abs(got_1m - (-20.05)) < 0.01);

    // Inverse-square law: doubling distance costs 20 log10(2) dB.
    const double drop = friis_received_power(p, 1.0) - friis_received_power(p, 2.0);
    CHECK(drop == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK(std::abs(drop - 6.0206) < 1e-4);

    // At d0 the Friis result defines the reference loss.
    RfParams derived = RfParams::defaults();
    const double at_d0 = friis_received_power(derived, derived.reference_distance_m);
    const double budget = derived.transmit_power_dbm + derived.tx_gain_db + derived.rx_gain_db -
                          derived.reference_loss_db;
    CHECK(at_d0 == doctest::Approx(budget).epsilon(1e-12));

    CHECK_THROWS_AS(friis_received_power(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(friis_received_power(p, -1.0), std::domain_error);
}

TEST_CASE("log-distance path loss") {
    const RfParams p = example_params();

    CHECK(path_loss_db(p, p.reference_distance_m) == doctest::Approx(40.05).epsilon(1e-12));
    // One decade adds 10 n dB.
    CHECK(path_loss_db(p, 10.0) == doctest::Approx(40.05 + 30.0).epsilon(1e-12));
    // Hand evaluation at 100 m.
    CHECK(path_loss_db(p, 100.0) == doctest::Approx(100.05).epsilon(1e-9));
    // Below-d0 distances clamp to d0.
    CHECK(path_loss_db(p, 0.01) == doctest::Approx(40.05).epsilon(1e-12));
}

TEST_CASE("rssi from signal path distance") {
    const RfParams p = example_params();
    CHECK(rssi_dbm(p, 100.0) == doctest::Approx(-80.05).epsilon(1e-9));
    CHECK(rssi_dbm(p, 1.0) == doctest::Approx(-20.05).epsilon(1e-9));
    // Disconnected signal path: no-link sentinel fails every threshold.
    const double no_link = rssi_dbm(p, std::numeric_limits<double>::infinity());
    CHECK(no_link == -std::numeric_limits<double>::infinity());
    CHECK_FALSE(no_link >= -80.0);
}

TEST_CASE("snr and capacity") {
    const RfParams p = example_params();

    CHECK(snr_linear(-88.0, -88.0) == 1.0);
    CHECK(snr_linear(-58.0, -88.0) == doctest::Approx(1000.0).epsilon(1e-9));
    CHECK(snr_linear(-98.0, -88.0) == doctest::Approx(0.1).epsilon(1e-9));

    // SNR = 1 gives exactly B.
    RfParams unity = p;
    unity.noise_floor_dbm = -58.0;
    CHECK(channel_capacity(unity, -58.0) == doctest::Approx(20.0e6).epsilon(1e-12));

    const double cap = channel_capacity(p, -58.0);
    CHECK(cap == doctest::Approx(20.0e6 * std::log2(1001.0)).epsilon(1e-9));
    CHECK(std::abs(cap - 199.35e6) < 0.01e6);

    CHECK(channel_capacity(p, -std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("transmission time") {
    const RfParams p = example_params();

    const double cap = channel_capacity(p, -58.0);
    CHECK(transmission_time(p, static_cast<std::int64_t>(cap), -58.0) ==
          doctest::Approx(1.0).epsilon(1e-6));

    const double t = transmission_time(p, 800'000'000, -58.0);
    CHECK(t == doctest::Approx(8.0e8 / (20.0e6 * std::log2(1001.0))).epsilon(1e-9));
    CHECK(std::abs(t - 4.013) < 0.01);

    CHECK(transmission_time(p, 0, -58.0) == 0.0);
    CHECK(transmission_time(p, 0, -std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(transmission_time(p, 1000, -std::numeric_limits<double>::infinity()) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("monotonicity over random distances") {
    const RfParams p = RfParams::defaults();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(p.reference_distance_m, 500.0);
    std::vector<double> distances(10'000);
    for (double& d : distances) {
        d = dist(rng);
    }
    std::sort(distances.begin(), distances.end());
    for (std::size_t i = 1; i < distances.size(); ++i) {
        if (distances[i] == distances[i - 1]) {
            continue;
        }
        const double r_prev = rssi_dbm(p, distances[i - 1]);
        const double r_next = rssi_dbm(p, distances[i]);
        REQUIRE(r_next < r_prev);
        REQUIRE(transmission_time(p, 8'000'000, r_next) > transmission_time(p, 8'000'000, r_prev));
    }
}

TEST_CASE("log-distance with n=2 degenerates to friis") {
    RfParams p = RfParams::defaults();
    p.path_loss_exponent = 2.0;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(p.reference_distance_m, 1000.0);
    for (int i = 0; i < 1000; ++i) {
        const double d = dist(rng);
        REQUIRE(rssi_dbm(p, d) == doctest::Approx(friis_received_power(p, d)).epsilon(1e-9));
    }
}

TEST_CASE("dbm round trip") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(-120.0, 40.0);
    for (int i = 0; i < 1000; ++i) {
        const double dbm = dist(rng);
        REQUIRE(mw_to_dbm(dbm_to_mw(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
    }
}

TEST_CASE("shadow fading draws replay under a fixed seed") {
    GaussianDraws a(42), b(42), c(43);
    bool any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.next();
        CHECK(va == b.next());
        if (va != c.next()) {
            any_diff = true;
        }
    }
    CHECK(any_diff);

    // Draws look standard-normal-ish: mean near 0, variance near 1.
    GaussianDraws g(123);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 20'000;
    for (int i = 0; i < n; ++i) {
        const double v = g.next();
        sum += v;
        sum_sq += v * v;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sum_sq / n - 1.0) < 0.05);
}

TEST_CASE("sigma zero is bit deterministic") {
    RfParams p = RfParams::defaults();
    CHECK(p.shadow_sigma_db == 0.0);
    const double a = rssi_dbm(p, 123.456, 0.0);
    const double b = rssi_dbm(p, 123.456, 99.0);  // draw value is inert at sigma 0
    CHECK(a == b);
}

TEST_CASE("signal log dedups per cell, latest wins") {
    SignalLog log(100, 0.25);
    log.record({-50.0, {1.0, 1.0}, 1});
    log.record({-60.0, {5.0, 5.0}, 2});
    log.record({-55.0, {1.1, 1.1}, 3});  // same cell as the first sample
    REQUIRE(log.size() == 2);
    CHECK(log.samples()[0].rssi_dbm == -55.0);
    CHECK(log.samples()[0].tick == 3);
    CHECK(log.samples()[1].rssi_dbm == -60.0);

    // Non-finite samples never enter the log.
    log.record({-std::numeric_limits<double>::infinity(), {9.0, 9.0}, 4});
    CHECK(log.size() == 2);
}

TEST_CASE("rf params validation") {
    RfParams p = RfParams::defaults();
    CHECK_NOTHROW(p.validate());
    p.bandwidth_hz = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = RfParams::defaults();
    p.wavelength_m = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = RfParams::defaults();
    p.path_loss_exponent = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = RfParams::defaults();
    p.shadow_sigma_db = -0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
