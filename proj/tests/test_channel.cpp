#include <doctest.h>

#include <numbers>

#include "ddr/channel.hpp"
#include "ddr/zak.hpp"
#include "helpers.hpp"

using namespace ddr;
using ddr::test::max_abs;
using ddr::test::max_abs_diff;
using ddr::test::random_signal;

namespace {
DDGrid small_grid() { return DDGrid(50e-6, 100e3, 500e-6); }
}  // namespace

TEST_CASE("identity channel returns the probe unchanged") {
    DDGrid g = small_grid();
    TimeSignal x = random_signal(g, 1);
    RadarScene scene{{{cplx(1.0), 0.0, 0.0}}};
    TimeSignal y = apply_scene(scene, x);
    CHECK(max_abs_diff(y.samples, x.samples) < 1e-15 * max_abs(x.samples));
}

TEST_CASE("pure delay shifts samples") {
    DDGrid g = small_grid();
    TimeSignal x = random_signal(g, 2);
    const int k0 = 7;
    RadarScene scene{{{cplx(1.0), k0 * g.dtau(), 0.0}}};
    TimeSignal y = apply_scene(scene, x);
    for (std::size_t i = 0; i < y.samples.size(); ++i) {
        cplx want = i >= static_cast<std::size_t>(k0) ? x.samples[i - k0] : cplx(0.0);
        CHECK(std::abs(y.samples[i] - want) < 1e-15 * max_abs(x.samples));
    }
}

TEST_CASE("linearity over targets") {
    DDGrid g = small_grid();
    TimeSignal x = random_signal(g, 3);
    Target t1{cplx(0.7, -0.2), 3 * g.dtau(), 40.0};
    Target t2{cplx(-0.1, 0.9), 11 * g.dtau(), -85.0};
    TimeSignal both = apply_scene(RadarScene{{t1, t2}}, x);
    TimeSignal a = apply_scene(RadarScene{{t1}}, x);
    TimeSignal b = apply_scene(RadarScene{{t2}}, x);
    for (std::size_t i = 0; i < both.samples.size(); ++i)
        CHECK(std::abs(both.samples[i] - a.samples[i] - b.samples[i]) < 1e-12 * max_abs(x.samples));
}

TEST_CASE("DD input-output relation: channel acts by twisted convolution") {
    DDGrid g = small_grid();
    TimeSignal x = random_signal(g, 4);
    // on-grid targets; delays shift within the window so truncation sheds
    // energy only where the DD picture also lacks it -> use a probe padded
    // with zero guard at the end of the window
    for (int i = g.num_samples() - 20; i < g.num_samples(); ++i)
        x.samples[static_cast<std::size_t>(i)] = 0.0;
    RadarScene scene{{{cplx(0.8, 0.1), 4 * g.dtau(), 3 * g.dnu()},
                      {cplx(-0.3, 0.5), 9 * g.dtau(), -5 * g.dnu()}}};
    TimeSignal y = apply_scene(scene, x);
    DDSignal lhs = zak_transform(y, g);
    DDSignal rhs = twisted_convolve(scene_as_impulses(scene, g), zak_transform(x, g));
    CHECK(max_abs_diff(lhs.values, rhs.values) < 1e-8 * max_abs(lhs.values));
}

TEST_CASE("delay beyond the window is rejected") {
    DDGrid g = small_grid();
    TimeSignal x = random_signal(g, 5);
    RadarScene scene{{{cplx(1.0), 2.0 * g.T, 0.0}}};
    CHECK_THROWS_AS(apply_scene(scene, x), ConfigError);
}

TEST_CASE("awgn determinism and infinite-SNR sentinel") {
    DDGrid g = small_grid();
    TimeSignal x = random_signal(g, 6);
    TimeSignal y1 = add_awgn(x, 10.0, 42);
    TimeSignal y2 = add_awgn(x, 10.0, 42);
    for (std::size_t i = 0; i < y1.samples.size(); ++i) CHECK(y1.samples[i] == y2.samples[i]);
    TimeSignal y3 = add_awgn(x, 10.0, 43);
    CHECK(max_abs_diff(y1.samples, y3.samples) > 0.0);

    TimeSignal clean = add_awgn(x, std::numeric_limits<double>::infinity(), 42);
    CHECK(max_abs_diff(clean.samples, x.samples) == 0.0);
}

TEST_CASE("awgn empirical SNR matches the request") {
    DDGrid g = small_grid();
    TimeSignal x = random_signal(g, 7);
    const double snr_db = 13.0;
    double sig = 0.0;
    for (const cplx& s : x.samples) sig += std::norm(s);
    double noise = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        TimeSignal y = add_awgn(x, snr_db, seed);
        for (std::size_t i = 0; i < y.samples.size(); ++i) noise += std::norm(y.samples[i] - x.samples[i]);
    }
    noise /= 100.0;
    const double got_db = 10.0 * std::log10(sig / noise);
    CHECK(std::abs(got_db - snr_db) < 0.5);
}

TEST_CASE("crystallization condition") {
    DDGrid g(100e-6, 4e6, 20e-3);
    RadarScene ok{{{cplx(1.0), 0.0, -4000.0}, {cplx(1.0), 90e-6, 4000.0}}};
    CHECK(crystallization_check(ok, g));
    RadarScene wide{{{cplx(1.0), 0.0, 0.0}, {cplx(1.0), 150e-6, 0.0}}};
    CHECK_FALSE(crystallization_check(wide, g));
    RadarScene single{{{cplx(1.0), 40e-6, 123.0}}};
    CHECK(crystallization_check(single, g));
    CHECK(single.underspread());
}

TEST_CASE("scene JSON round trip") {
    RadarScene s{{{cplx(0.5, -0.25), 1.25e-6, -350.0}, {cplx(1.0, 0.0), 3.0e-6, 175.0}}};
    RadarScene back = scene_from_json(scene_to_json(s));
    REQUIRE(back.targets.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.targets[i].h == s.targets[i].h);
        CHECK(back.targets[i].tau == s.targets[i].tau);
        CHECK(back.targets[i].nu == s.targets[i].nu);
    }
    CHECK_THROWS_AS(scene_from_json("{not json"), ConfigError);
    CHECK_THROWS_AS(scene_from_json("{\"a\":1}"), ConfigError);
}
