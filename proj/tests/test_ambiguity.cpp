#include <doctest.h>

#include <numbers>
#include <sstream>

#include "ddr/ambiguity.hpp"
#include "ddr/channel.hpp"
#include "ddr/estimator.hpp"
#include "ddr/zak.hpp"
#include "helpers.hpp"

using namespace ddr;
using ddr::test::max_abs;
using ddr::test::random_signal;

namespace {

DDGrid tiny_grid() { return DDGrid(1e-3, 8e3, 8e-3); }  // M=8, N=8, BT=64

double rel_sup_diff(const DDPatch& a, const DDPatch& b) {
    REQUIRE(a.k0 == b.k0);
    REQUIRE(a.l0 == b.l0);
    REQUIRE(a.nk == b.nk);
    REQUIRE(a.nl == b.nl);
    double scale = std::max(a.peak_abs(), b.peak_abs());
    double m = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m / scale;
}

}  // namespace

TEST_CASE("self-ambiguity origin equals probe energy, bounded everywhere") {
    DDGrid g = tiny_grid();
    TimeSignal x = random_signal(g, 21);
    SearchRegion region{0.0, 10 * g.dtau(), 10 * g.dnu()};
    AmbiguitySurface s = cross_ambiguity_td(x, x, region, g);
    CHECK(std::abs(s.patch.at(0, 0) - cplx(x.energy())) < 1e-9 * x.energy());
    CHECK(s.probe_energy == doctest::Approx(x.energy()));
    CHECK(s.patch.peak_abs() <= s.probe_energy * (1.0 + 1e-6));
}

TEST_CASE("zero received signal gives a zero surface") {
    DDGrid g = tiny_grid();
    TimeSignal x = random_signal(g, 22);
    TimeSignal y = x;
    for (cplx& v : y.samples) v = 0.0;
    AmbiguitySurface s = cross_ambiguity_td(y, x, SearchRegion{0.0, 5 * g.dtau(), 5 * g.dnu()}, g);
    CHECK(s.patch.peak_abs() == 0.0);
}

TEST_CASE("on-grid shifted copy peaks at the shift with full energy") {
    DDGrid g = tiny_grid();
    TimeSignal x = random_signal(g, 23);
    // guard: keep the delayed copy inside the window
    for (int i = g.num_samples() - 8; i < g.num_samples(); ++i) x.samples[static_cast<std::size_t>(i)] = 0.0;
    const int k1 = 3, l1 = -4;
    RadarScene scene{{{cplx(1.0), k1 * g.dtau(), l1 * g.dnu()}}};
    TimeSignal y = apply_scene(scene, x);
    AmbiguitySurface s = cross_ambiguity_td(y, x, SearchRegion{0.0, 6 * g.dtau(), 6 * g.dnu()}, g);
    TargetEstimate e = detect_single(s);
    CHECK(e.tau_hat == doctest::Approx(k1 * g.dtau()));
    CHECK(e.nu_hat == doctest::Approx(l1 * g.dnu()));
    CHECK(std::abs(s.patch.at(k1, l1)) == doctest::Approx(x.energy()).epsilon(1e-9));
}

TEST_CASE("DD cross-ambiguity equals the TD reference (random signals)") {
    DDGrid g = tiny_grid();
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        TimeSignal x = random_signal(g, 30 + seed);
        TimeSignal y = random_signal(g, 40 + seed);
        SearchRegion region{0.0, 6 * g.dtau(), 6 * g.dnu()};
        AmbiguitySurface td = cross_ambiguity_td(y, x, region, g);
        AmbiguitySurface dd = cross_ambiguity_dd(zak_transform(y, g), zak_transform(x, g), region);
        CHECK(rel_sup_diff(td.patch, dd.patch) < 1e-6);
    }
}

TEST_CASE("sparsity mask collects significant pulsone taps") {
    DDGrid g(50e-6, 1e6, 2e-3);
    PulsoneParams p;
    p.filter.B = g.B;
    p.filter.T = g.T;
    auto [x_dd, x_td] = make_pulsone(p, g);
    auto mask = make_sparsity_mask(x_dd);
    CHECK(mask.size() < 60u * g.P * g.Q);
    CHECK(mask.size() >= 9u);

    // masked evaluation stays close to the full sum (default threshold
    // drops taps below 1e-2 of peak)
    RadarScene scene{{{cplx(0.9, 0.1), 5 * g.dtau(), 4 * g.dnu()}}};
    TimeSignal y = apply_scene(scene, x_td);
    DDSignal y_dd = zak_transform(y, g);
    SearchRegion region{0.0, 10 * g.dtau(), 8 * g.dnu()};
    AmbiguitySurface full = cross_ambiguity_dd(y_dd, x_dd, region);
    AmbiguitySurface sparse = cross_ambiguity_dd(y_dd, x_dd, region, &mask);
    CHECK(rel_sup_diff(full.patch, sparse.patch) < 2e-2);
}

TEST_CASE("noise-free cross-ambiguity factors through the scene") {
    // M large enough that the pulse tails (width 5/B on each side) fit
    // inside one delay period, and tau_0 mid-period so the window edges
    // fall in the zero gaps; then delaying the windowed probe loses no
    // energy and the factorization is exact
    DDGrid g(1e-3, 32e3, 8e-3);
    PulsoneParams p;
    p.tau_0 = g.tau_p / 2.0;
    p.filter.B = g.B;
    p.filter.T = g.T;
    auto [x_dd, x_td] = make_pulsone(p, g);
    RadarScene scene{{{cplx(0.6, -0.3), 2 * g.dtau(), 3 * g.dnu()},
                     {cplx(0.2, 0.4), 5 * g.dtau(), -2 * g.dnu()}}};
    TimeSignal y = apply_scene(scene, x_td);
    DDSignal y_dd = zak_transform(y, g);
    // reference the transmitted (windowed) waveform, not the idealized
    // quasi-periodic pulsone, so the shift identity is exact
    DDSignal x_ref = zak_transform(x_td, g);

    SearchRegion region{0.0, 8 * g.dtau(), 6 * g.dnu()};
    AmbiguitySurface ayx = cross_ambiguity_dd(y_dd, x_ref, region);

    // A_xx over a region large enough for every scene shift
    SearchRegion wide{-6 * g.dtau(), 14 * g.dtau(), 10 * g.dnu()};
    AmbiguitySurface axx = cross_ambiguity_dd(x_ref, x_ref, wide);
    DDPatch pred = twisted_convolve(scene_as_impulses(scene, g), axx.patch);

    double scale = ayx.patch.peak_abs();
    double err = 0.0;
    for (int k = ayx.patch.k0; k < ayx.patch.k0 + ayx.patch.nk; ++k)
        for (int l = ayx.patch.l0; l < ayx.patch.l0 + ayx.patch.nl; ++l)
            err = std::max(err, std::abs(ayx.patch.at(k, l) - pred.value_or_zero(k, l)));
    CHECK(err < 1e-8 * scale);
}

TEST_CASE("chirp self-ambiguity oracle matches the TD correlation") {
    DDGrid g(50e-6, 1e6, 2e-3);
    ChirpSchedule sched = single_pair_schedule(g.B, g.T);
    GaussianFilterParams f;
    f.B = g.B;
    f.T = sched.segments[0].duration;
    TimeSignal u = make_filtered_chirp(sched.segments[0], f, g);

    DDGrid seg_grid(g.tau_p, g.B, sched.segments[0].duration);
    SearchRegion region{-10 * seg_grid.dtau(), 10 * seg_grid.dtau(), 10 * seg_grid.dnu()};
    AmbiguitySurface num = cross_ambiguity_td(u, u, region, seg_grid);
    const cplx origin = num.patch.at(0, 0);
    CHECK(std::abs(origin - cplx(1.0)) < 1e-6);

    double err = 0.0;
    for (int k = -10; k <= 10; ++k)
        for (int l = -10; l <= 10; ++l) {
            cplx oracle = chirp_self_ambiguity_oracle(sched.segments[0], f, k * seg_grid.dtau(),
                                                      l * seg_grid.dnu());
            err = std::max(err, std::abs(num.patch.at(k, l) / origin - oracle));
        }
    CHECK(err < 1e-3);
}

TEST_CASE("chirp ambiguity rides the slope line") {
    DDGrid g(50e-6, 1e6, 2e-3);
    ChirpSchedule sched = single_pair_schedule(g.B, g.T);
    GaussianFilterParams f;
    f.B = g.B;
    f.T = sched.segments[0].duration;
    const double a = sched.segments[0].slope;
    const double tau = 6 * 1.0 / (g.P * g.B);
    double on_line = std::abs(chirp_self_ambiguity_oracle(sched.segments[0], f, tau, a * tau));
    double off_line = std::abs(chirp_self_ambiguity_oracle(sched.segments[0], f, tau, a * tau + 4.0 / f.T));
    CHECK(on_line > 0.5);
    CHECK(off_line < 0.5 * on_line);
}

TEST_CASE("pulsone self-ambiguity concentrates on the period lattice") {
    DDGrid g(50e-6, 1e6, 2e-3);
    GaussianFilterParams f;
    f.B = g.B;
    f.T = g.T;
    DDPatch origin_term = pulsone_self_ambiguity_patch(f, g, 0, 0);
    CHECK(std::abs(origin_term.at(0, 0) - cplx(1.0)) < 1e-4);
    // lattice term (1,0) peaks at (tau_p, 0); magnitude dips only by the
    // envelope decorrelation over one period
    DDPatch t10 = pulsone_self_ambiguity_patch(f, g, 1, 0);
    CHECK(std::abs(t10.at(g.pm(), 0)) > 0.99);
    int bk = 0, bl = 0;
    double bm = 0.0;
    for (int k = t10.k0; k < t10.k0 + t10.nk; ++k)
        for (int l = t10.l0; l < t10.l0 + t10.nl; ++l)
            if (std::abs(t10.at(k, l)) > bm) {
                bm = std::abs(t10.at(k, l));
                bk = k;
                bl = l;
            }
    CHECK(std::abs(bk - g.pm()) <= 1);
    CHECK(std::abs(bl) <= 1);
    // Gaussian tails vanish at the cell midpoint
    cplx mid = pulsone_self_ambiguity_oracle(f, g, 0, 0, g.tau_p / 2.0, 0.0);
    CHECK(std::abs(mid) < 1e-6);
}

TEST_CASE("per-cell pulsone ambiguity volume matches the Gaussian closed form") {
    // One period cell holds one lattice blob; for the separable Gaussian
    // filter its squared volume is pi/(sqrt(alpha beta) B T) * E^2 (the
    // full-plane Moyal mass splits across ~BT cells).
    DDGrid g(50e-6, 1e6, 2e-3);
    PulsoneParams p;
    p.filter.B = g.B;
    p.filter.T = g.T;
    auto [x_dd, x_td] = make_pulsone(p, g);
    auto mask = make_sparsity_mask(x_dd, 1e-6);
    SearchRegion region{-g.tau_p / 2.0, g.tau_p / 2.0 - g.dtau(), g.nu_p() / 2.0};
    AmbiguitySurface s = cross_ambiguity_dd(x_dd, x_dd, region, &mask);
    const double et2 = s.probe_energy * s.probe_energy;
    const double closed_form =
        std::numbers::pi / (std::sqrt(p.filter.alpha * p.filter.beta) * g.B * g.T) * et2;
    CHECK(moyal_volume(s) == doctest::Approx(closed_form).epsilon(0.01));
}

TEST_CASE("Moyal identity: full-plane squared-ambiguity volume equals E^2") {
    DDGrid g = tiny_grid();
    PulsoneParams p;
    p.filter.B = g.B;
    p.filter.T = g.T;
    auto [x_dd, x_td] = make_pulsone(p, g);
    // full support: |tau| up to the window length, |nu| up to the sample
    // bandwidth edge (the discrete surface is nu-periodic beyond that)
    SearchRegion region{-g.T, g.T, g.sample_rate() / 2.0};
    AmbiguitySurface s = cross_ambiguity_td(x_td, x_td, region, g);
    // trim the duplicated Doppler edge row
    double vol = moyal_volume(s);
    for (int k = s.patch.k0; k < s.patch.k0 + s.patch.nk; ++k)
        vol -= std::norm(s.patch.at(k, s.patch.l0)) * s.patch.dtau * s.patch.dnu;
    CHECK(vol == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Moyal volume is quadratic under scaling") {
    DDGrid g = tiny_grid();
    TimeSignal x = random_signal(g, 55);
    SearchRegion region{0.0, 4 * g.dtau(), 4 * g.dnu()};
    AmbiguitySurface s = cross_ambiguity_td(x, x, region, g);
    double v1 = moyal_volume(s);
    for (cplx& v : s.patch.v) v *= 3.0;
    CHECK(moyal_volume(s) == doctest::Approx(9.0 * v1).epsilon(1e-12));
}

TEST_CASE("surface CSV export format") {
    DDGrid g = tiny_grid();
    TimeSignal x = random_signal(g, 60);
    AmbiguitySurface s = cross_ambiguity_td(x, x, SearchRegion{0.0, g.dtau(), g.dnu()}, g);
    std::ostringstream os;
    surface_to_csv(s, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "tau_s,nu_hz,re,im,abs");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == s.patch.nk * s.patch.nl);
}

TEST_CASE("region validation") {
    CHECK_THROWS_AS(region_bins(SearchRegion{1.0, 0.0, 1.0}, 0.1, 0.1), ConfigError);
    CHECK_THROWS_AS(region_bins(SearchRegion{0.0, 1.0, -1.0}, 0.1, 0.1), ConfigError);
}
