#include <doctest.h>

#include "ddr/estimator.hpp"

using namespace ddr;

namespace {

AmbiguitySurface blank_surface(int k0, int l0, int nk, int nl, double dtau, double dnu) {
    AmbiguitySurface s;
    s.patch = DDPatch(k0, l0, nk, nl, dtau, dnu);
    s.res_k = 2;
    s.res_l = 2;
    s.probe_energy = 1.0;
    return s;
}

}  // namespace

TEST_CASE("detect_single finds the argmax and scales the gain") {
    AmbiguitySurface s = blank_surface(0, -5, 10, 11, 1e-6, 100.0);
    s.probe_energy = 2.0;
    s.patch.at(3, -2) = cplx(0.0, 1.5);
    s.patch.at(7, 4) = cplx(0.5, 0.0);
    TargetEstimate e = detect_single(s);
    CHECK(e.tau_hat == doctest::Approx(3e-6));
    CHECK(e.nu_hat == doctest::Approx(-200.0));
    CHECK(e.h_hat == cplx(0.0, 0.75));

    // scaling the surface leaves the location unchanged
    for (cplx& v : s.patch.v) v *= cplx(0.0, -2.0);
    TargetEstimate e2 = detect_single(s);
    CHECK(e2.tau_hat == e.tau_hat);
    CHECK(e2.nu_hat == e.nu_hat);
}

TEST_CASE("detect_single tie-breaking prefers small delay then small |Doppler|") {
    AmbiguitySurface s = blank_surface(0, -5, 10, 11, 1e-6, 100.0);
    s.patch.at(6, 0) = 1.0;
    s.patch.at(2, 3) = 1.0;
    s.patch.at(2, -1) = 1.0;
    TargetEstimate e = detect_single(s);
    CHECK(e.tau_hat == doctest::Approx(2e-6));
    CHECK(e.nu_hat == doctest::Approx(-100.0));
}

TEST_CASE("detect_single rejects an all-zero surface") {
    AmbiguitySurface s = blank_surface(0, 0, 4, 4, 1e-6, 100.0);
    CHECK_THROWS_AS(detect_single(s), NumericalError);
}

TEST_CASE("detect_peaks separates well-spaced targets, merges close ones") {
    AmbiguitySurface s = blank_surface(0, -10, 24, 21, 1e-6, 100.0);
    // two peaks separated by more than one resolution cell (res=2 bins)
    s.patch.at(4, -6) = 1.0;
    s.patch.at(12, 5) = 0.8;
    // a satellite inside the exclusion zone of the first peak
    s.patch.at(5, -5) = 0.7;
    auto peaks = detect_peaks(s, 8, 0.5);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].tau_hat == doctest::Approx(4e-6));
    CHECK(peaks[1].tau_hat == doctest::Approx(12e-6));
    CHECK(peaks[0].peak_mag > peaks[1].peak_mag);

    auto one = detect_peaks(s, 1, 0.5);
    CHECK(one.size() == 1);
    CHECK_THROWS_AS(detect_peaks(s, 4, 1.5), ConfigError);
}

TEST_CASE("detect_peaks on a single impulse") {
    AmbiguitySurface s = blank_surface(0, 0, 8, 8, 1e-6, 100.0);
    s.patch.at(3, 3) = 2.0;
    auto peaks = detect_peaks(s, 4, 0.5);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].peak_mag == doctest::Approx(2.0));
}

TEST_CASE("ghost_removal keeps only matching candidates") {
    auto est = [](double tau, double nu, double mag) {
        TargetEstimate e;
        e.tau_hat = tau;
        e.nu_hat = nu;
        e.peak_mag = mag;
        return e;
    };
    std::vector<TargetEstimate> p1{est(1e-6, -400, 1.0), est(3e-6, 175, 0.9), est(5e-6, 0, 0.8)};
    std::vector<TargetEstimate> p2{est(1.1e-6, -380, 1.0), est(3.05e-6, 150, 0.7)};
    auto kept = ghost_removal(p1, p2, 0.25e-6, 50.0);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].tau_hat == doctest::Approx(1.05e-6));
    CHECK(kept[0].nu_hat == doctest::Approx(-390.0));

    auto same = ghost_removal(p1, p1, 0.25e-6, 50.0);
    CHECK(same.size() == p1.size());
    std::vector<TargetEstimate> far{est(9e-6, 900, 1.0)};
    CHECK(ghost_removal(p1, far, 0.25e-6, 50.0).empty());
}

TEST_CASE("range and velocity conversion") {
    TargetEstimate e;
    e.tau_hat = 1e-6;
    e.nu_hat = -400.0;
    auto [rng, vel] = to_range_velocity(e, 1e9);
    CHECK(rng == doctest::Approx(149.896229));
    CHECK(vel == doctest::Approx(-59.9584916));
    TargetEstimate zero;
    auto [r0, v0] = to_range_velocity(zero, 1e9);
    CHECK(r0 == 0.0);
    CHECK(v0 == 0.0);
    CHECK_THROWS_AS(to_range_velocity(e, 0.0), ConfigError);
}

TEST_CASE("rms_error scoring") {
    const double B = 4e6, T = 20e-3, fc = 1e9;
    RadarScene truth{{{cplx(1.0), 1e-6, 0.0}}};

    std::vector<TargetEstimate> exact{{1e-6, 0.0, cplx(1.0), 1.0}};
    RmsResult r = rms_error(exact, truth, fc, B, T);
    CHECK(r.range_rmse == doctest::Approx(0.0));
    CHECK(r.velocity_rmse == doctest::Approx(0.0));
    CHECK_FALSE(r.missed);

    std::vector<TargetEstimate> off{{1.25e-6, 0.0, cplx(1.0), 1.0}};
    r = rms_error(off, truth, fc, B, T);
    CHECK(r.range_rmse == doctest::Approx(37.4740573).epsilon(1e-6));

    r = rms_error({}, truth, fc, B, T);
    CHECK(r.missed);

    // assignment is order-free
    RadarScene truth2{{{cplx(1.0), 1e-6, 100.0}, {cplx(1.0), 2e-6, -50.0}}};
    std::vector<TargetEstimate> ests{{2.1e-6, -60.0, cplx(1.0), 0.5}, {1.05e-6, 90.0, cplx(1.0), 1.0}};
    RmsResult a = rms_error(ests, truth2, fc, B, T);
    std::swap(ests[0], ests[1]);
    RmsResult b = rms_error(ests, truth2, fc, B, T);
    CHECK(a.range_rmse == doctest::Approx(b.range_rmse));
    CHECK(a.velocity_rmse == doctest::Approx(b.velocity_rmse));

    // a missed second target scores against the nearest estimate
    std::vector<TargetEstimate> only_one{{1e-6, 100.0, cplx(1.0), 1.0}};
    RmsResult m = rms_error(only_one, truth2, fc, B, T);
    CHECK(m.range_rmse > 0.0);
    CHECK_FALSE(m.missed);

    CHECK_THROWS_AS(rms_error(exact, RadarScene{}, fc, B, T), ConfigError);
}
