#include "ddr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <json.hpp>

namespace ddr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fold(const RadarScene& s, double init, double (*pick)(double, const Target&)) {
    double v = init;
    for (const Target& t : s.targets) v = pick(v, t);
    return v;
}

}  // namespace

double RadarScene::tau_min() const {
    return fold(*this, std::numeric_limits<double>::infinity(),
                [](double v, const Target& t) { return std::min(v, t.tau); });
}
double RadarScene::tau_max() const {
    return fold(*this, -std::numeric_limits<double>::infinity(),
                [](double v, const Target& t) { return std::max(v, t.tau); });
}
double RadarScene::nu_min() const {
    return fold(*this, std::numeric_limits<double>::infinity(),
                [](double v, const Target& t) { return std::min(v, t.nu); });
}
double RadarScene::nu_max() const {
    return fold(*this, -std::numeric_limits<double>::infinity(),
                [](double v, const Target& t) { return std::max(v, t.nu); });
}

bool RadarScene::underspread() const {
    if (targets.empty()) return true;
    return (tau_max() - tau_min()) * (nu_max() - nu_min()) < 1.0;
}

TimeSignal apply_scene(const RadarScene& scene, const TimeSignal& x) {
    if (x.sample_rate <= 0.0) throw ConfigError("apply_scene: signal has no sample rate");
    TimeSignal y;
    y.sample_rate = x.sample_rate;
    y.t_start = x.t_start;
    y.samples.assign(x.samples.size(), cplx(0.0));

    const double dt = x.dt();
    for (const Target& tgt : scene.targets) {
        if (tgt.tau < 0.0) throw ConfigError("apply_scene: negative target delay");
        const long long shift = std::llround(tgt.tau / dt);
        const double tau_q = static_cast<double>(shift) * dt;
        if (shift >= static_cast<long long>(x.samples.size()))
            throw ConfigError("apply_scene: target delay exceeds the signal window");
        for (std::size_t i = static_cast<std::size_t>(shift); i < y.samples.size(); ++i) {
            const double t = x.time_at(i);
            y.samples[i] += tgt.h * std::polar(1.0, kTwoPi * tgt.nu * (t - tau_q)) *
                            x.samples[i - static_cast<std::size_t>(shift)];
        }
    }
    return y;
}

TimeSignal add_awgn(const TimeSignal& x, double snr_db, std::uint64_t rng_seed) {
    if (std::isinf(snr_db)) return x;
    double esum = 0.0;
    for (const cplx& s : x.samples) esum += std::norm(s);
    if (esum <= 0.0) throw ConfigError("add_awgn: zero-energy signal");
    const double sigma2 = esum / (static_cast<double>(x.samples.size()) * std::pow(10.0, snr_db / 10.0));
    const double s_re = std::sqrt(sigma2 / 2.0);

    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TimeSignal y = x;
    for (cplx& v : y.samples) {
        const double re = gauss(rng), im = gauss(rng);
        v += cplx(s_re * re, s_re * im);
    }
    return y;
}

bool crystallization_check(const RadarScene& scene, const DDGrid& grid) {
    if (scene.targets.empty()) throw ConfigError("crystallization_check: empty scene");
    return (scene.tau_max() - scene.tau_min()) < grid.tau_p &&
           (scene.nu_max() - scene.nu_min()) < grid.nu_p();
}

DDPatch scene_as_impulses(const RadarScene& scene, const DDGrid& grid) {
    if (scene.targets.empty()) throw ConfigError("scene_as_impulses: empty scene");
    int kmin = 0, kmax = 0, lmin = 0, lmax = 0;
    std::vector<std::pair<int, int>> bins;
    bins.reserve(scene.targets.size());
    for (const Target& t : scene.targets) {
        const int k = static_cast<int>(std::llround(t.tau / grid.dtau()));
        const int l = static_cast<int>(std::llround(t.nu / grid.dnu()));
        bins.emplace_back(k, l);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
        lmin = std::min(lmin, l);
        lmax = std::max(lmax, l);
    }
    DDPatch h(kmin, lmin, kmax - kmin + 1, lmax - lmin + 1, grid.dtau(), grid.dnu());
    const double amp = 1.0 / (grid.dtau() * grid.dnu());
    for (std::size_t i = 0; i < bins.size(); ++i)
        h.at(bins[i].first, bins[i].second) += scene.targets[i].h * amp;
    return h;
}

std::string scene_to_json(const RadarScene& scene) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Target& t : scene.targets)
        arr.push_back({{"h_re", t.h.real()}, {"h_im", t.h.imag()}, {"tau_s", t.tau}, {"nu_hz", t.nu}});
    return arr.dump(2);
}

RadarScene scene_from_json(const std::string& text) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("scene_from_json: ") + e.what());
    }
    if (!arr.is_array()) throw ConfigError("scene_from_json: expected a JSON array");
    RadarScene scene;
    for (const auto& rec : arr) {
        Target t;
        t.h = cplx(rec.at("h_re").get<double>(), rec.at("h_im").get<double>());
        t.tau = rec.at("tau_s").get<double>();
        t.nu = rec.at("nu_hz").get<double>();
        scene.targets.push_back(t);
    }
    return scene;
}

}  // namespace ddr
