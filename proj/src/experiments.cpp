#include "ddr/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include <json.hpp>

#include "ddr/waveforms.hpp"
#include "ddr/zak.hpp"

namespace ddr {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

json scene_json(const RadarScene& scene) {
    json arr = json::array();
    for (const Target& t : scene.targets)
        arr.push_back({{"h_re", t.h.real()}, {"h_im", t.h.imag()}, {"tau_s", t.tau}, {"nu_hz", t.nu}});
    return arr;
}

RadarScene scene_from(const json& arr) {
    RadarScene s;
    for (const json& t : arr)
        s.targets.push_back({cplx(t.at("h_re").get<double>(), t.at("h_im").get<double>()),
                             t.at("tau_s").get<double>(), t.at("nu_hz").get<double>()});
    return s;
}

/// Zeroes the probe outside one schedule segment, keeping the full window
/// so delayed returns correlate against the right time reference.
TimeSignal segment_reference(const TimeSignal& probe, const ChirpParams& seg) {
    TimeSignal out = probe;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const double t = out.time_at(i);
        if (t < seg.start - 1e-12 || t >= seg.start + seg.duration - 1e-12) out.samples[i] = 0.0;
    }
    return out;
}

std::vector<TargetEstimate> top_k(std::vector<TargetEstimate> ests, std::size_t k) {
    std::stable_sort(ests.begin(), ests.end(),
                     [](const TargetEstimate& a, const TargetEstimate& b) { return a.peak_mag > b.peak_mag; });
    if (ests.size() > k) ests.resize(k);
    return ests;
}

/// Snaps each survivor to the nearest steep-pair candidate within tolerance.
/// The steeper slopes turn the same intercept error into half the delay
/// error, so the matched pair2 coordinate is the better estimate.
void refine_with_pair2(std::vector<TargetEstimate>& kept, const std::vector<TargetEstimate>& pair2,
                       double tol_tau, double tol_nu) {
    for (TargetEstimate& e : kept) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pair2.size(); ++j) {
            const double dtau = std::abs(e.tau_hat - pair2[j].tau_hat);
            const double dnu = std::abs(e.nu_hat - pair2[j].nu_hat);
            if (dtau > tol_tau || dnu > tol_nu) continue;
            const double d = dtau / tol_tau + dnu / tol_nu;
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        // delay only: the matched-pair Doppler midpoint is already the
        // better nu estimate
        if (best >= 0) e.tau_hat = pair2[static_cast<std::size_t>(best)].tau_hat;
    }
}

DetectionReport zak_pipeline(const ExperimentConfig& cfg, const RadarScene& scene, std::uint64_t noise_seed,
                             const SearchRegion& region, std::vector<AmbiguitySurface>* surfaces) {
    const DDGrid g = cfg.grid();
    PulsoneParams p;
    // mid-period offset keeps every pulse tail inside the window
    p.tau_0 = (g.pm() / 2) * g.dtau();
    p.filter.alpha = cfg.alpha;
    p.filter.beta = cfg.beta;
    p.filter.B = cfg.B;
    p.filter.T = cfg.T;
    auto [p_dd, p_td] = make_pulsone(p, g);

    TimeSignal y = add_awgn(apply_scene(scene, p_td), cfg.snr_db, noise_seed);
    DDSignal y_dd = zak_transform(y, g);
    DDSignal x_ref = zak_transform(p_td, g);
    std::vector<std::pair<int, int>> mask = make_sparsity_mask(x_ref);
    AmbiguitySurface surf = cross_ambiguity_dd(y_dd, x_ref, region, &mask);

    DetectionReport report;
    report.crystallized = crystallization_check(scene, g);
    const int want = std::max<std::size_t>(scene.targets.size(), 1);
    try {
        report.estimates = detect_peaks(surf, want, 0.02);
    } catch (const NumericalError&) {
        report.estimates.clear();
    }
    if (surfaces) surfaces->push_back(std::move(surf));
    return report;
}

DetectionReport chirp_pipeline(const ExperimentConfig& cfg, const RadarScene& scene, std::uint64_t noise_seed,
                               const SearchRegion& region, std::vector<AmbiguitySurface>* surfaces) {
    const DDGrid g = cfg.grid();
    const bool two_pairs = cfg.waveform == Waveform::chirp_two_pairs;
    const ChirpSchedule sched =
        two_pairs ? two_pairs_schedule(cfg.B, cfg.T) : single_pair_schedule(cfg.B, cfg.T);
    // the chirp segments only cover T/2 or T/4, so tighten the
    // time-limiting filter accordingly; it keeps the segment Doppler
    // bands narrow relative to the search range at small BT
    TimeSignal probe = make_chirp_probe(sched, cfg.alpha, 4.0 * cfg.beta, g);
    TimeSignal y = add_awgn(apply_scene(scene, probe), cfg.snr_db, noise_seed);

    std::vector<AmbiguitySurface> segs;
    for (const ChirpParams& seg : sched.segments)
        segs.push_back(cross_ambiguity_td(y, segment_reference(probe, seg), region, g));

    DetectionReport report;
    report.crystallized = crystallization_check(scene, g);
    const std::size_t want = std::max<std::size_t>(scene.targets.size(), 1);
    const int cand_cap = 36;
    auto pair_candidates = [&](std::size_t up, std::size_t down) {
        try {
            return chirp_intersections(segs[up], segs[down], sched.segments[up].slope,
                                       sched.segments[down].slope, cand_cap);
        } catch (const NumericalError&) {
            return std::vector<TargetEstimate>{};
        }
    };

    if (!two_pairs) {
        // a single pair cannot disambiguate ghosts, so it reports its
        // best want-sized guess by magnitude
        report.estimates = top_k(pair_candidates(0, 1), want);
    } else {
        std::vector<TargetEstimate> pair1 = pair_candidates(0, 1);
        std::vector<TargetEstimate> pair2 = pair_candidates(2, 3);
        std::vector<TargetEstimate> kept = ghost_removal(pair1, pair2, 1.0 / cfg.B, 4.0 / cfg.T);
        report.ghosts_rejected = static_cast<int>(pair1.size() - kept.size());
        if (kept.empty()) {
            kept = pair1;  // degraded fallback, still ranked
            report.estimates = top_k(std::move(kept), want);
        } else {
            refine_with_pair2(kept, pair2, 1.0 / cfg.B, 4.0 / cfg.T);
            report.estimates = top_k(std::move(kept), want);
        }
    }
    if (surfaces)
        for (AmbiguitySurface& s : segs) surfaces->push_back(std::move(s));
    return report;
}

SearchRegion default_region(const ExperimentConfig& cfg, const RadarScene& scene) {
    if (cfg.region.tau_max > cfg.region.tau_min || cfg.region.nu_max > 0.0) return cfg.region;
    const DDGrid g = cfg.grid();
    if (cfg.waveform == Waveform::zak_otfs && scene.targets.empty())
        return {0.0, g.tau_p - g.dtau(), g.nu_p() / 2.0};
    double tau_hi = 8.0 / cfg.B, nu_hi = 8.0 / cfg.T;
    for (const Target& t : scene.targets) {
        tau_hi = std::max(tau_hi, t.tau + 4.0 / cfg.B);
        nu_hi = std::max(nu_hi, std::abs(t.nu) + 4.0 / cfg.T);
    }
    return {0.0, std::min(tau_hi, g.tau_p - g.dtau()), std::min(nu_hi, g.nu_p() / 2.0)};
}

struct Welford {
    int n = 0;
    double mean = 0.0, m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double se() const { return n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0; }
};

RmsRow monte_carlo(const ExperimentConfig& base, Waveform w, const SceneSpec& spec, double snr_db,
                   int rect_index, std::uint64_t series) {
    ExperimentConfig cfg = base;
    cfg.waveform = w;
    cfg.snr_db = snr_db;
    SearchRegion region{0.0, spec.tau_max + 2.0 / cfg.B, spec.nu_max + 2.0 / cfg.T};
    Welford rng_m, vel_m;
    int misses = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t ts = trial_seed(cfg.seed, series * 1000003ULL + trial);
        RadarScene scene = draw_scene(spec, cfg.B, ts);
        DetectionReport rep = run_pipeline(cfg, scene, ts + 1, region);
        RmsResult r = rms_error(rep.estimates, scene, cfg.carrier_hz, cfg.B, cfg.T);
        if (r.missed) {
            ++misses;
            continue;
        }
        rng_m.add(r.range_rmse);
        vel_m.add(r.velocity_rmse);
    }
    RmsRow row;
    row.rect_index = rect_index;
    row.waveform = w;
    row.snr_db = snr_db;
    row.range_rmse = rng_m.mean;
    row.range_se = rng_m.se();
    row.velocity_rmse = vel_m.mean;
    row.velocity_se = vel_m.se();
    row.miss_rate = static_cast<double>(misses) / cfg.trials;
    return row;
}

double fit_loglog_slope(const std::vector<BenchPoint>& pts, bool dd) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(pts.size());
    for (const BenchPoint& p : pts) {
        const double x = std::log(static_cast<double>(p.bt));
        const double y = std::log(dd ? p.dd_seconds : p.td_seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::string waveform_name(Waveform w) {
    switch (w) {
        case Waveform::zak_otfs: return "zak_otfs";
        case Waveform::chirp_single_pair: return "chirp_single_pair";
        case Waveform::chirp_two_pairs: return "chirp_two_pairs";
    }
    throw ConfigError("waveform_name: bad enum");
}

Waveform waveform_from_name(const std::string& name) {
    if (name == "zak_otfs") return Waveform::zak_otfs;
    if (name == "chirp_single_pair") return Waveform::chirp_single_pair;
    if (name == "chirp_two_pairs") return Waveform::chirp_two_pairs;
    throw ConfigError("unknown waveform: " + name);
}

ExperimentConfig ci_profile() {
    ExperimentConfig cfg;
    cfg.B = 1e6;
    cfg.T = 2e-3;
    cfg.tau_p = 50e-6;
    cfg.trials = 30;
    return cfg;
}

ExperimentConfig full_profile() {
    ExperimentConfig cfg;
    cfg.B = 4e6;
    cfg.T = 20e-3;
    cfg.tau_p = 100e-6;
    cfg.trials = 100;
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["waveform"] = waveform_name(cfg.waveform);
    j["B_hz"] = cfg.B;
    j["T_s"] = cfg.T;
    j["tau_p_s"] = cfg.tau_p;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["carrier_hz"] = cfg.carrier_hz;
    j["snr_db"] = std::isinf(cfg.snr_db) ? json("inf") : json(cfg.snr_db);
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    if (cfg.scene.random) {
        j["scene"] = {{"rectangle", {{"tau_max_s", cfg.scene.tau_max},
                                     {"nu_max_hz", cfg.scene.nu_max},
                                     {"count", cfg.scene.target_count},
                                     {"unit_gains", cfg.scene.unit_gains}}}};
    } else {
        j["scene"] = {{"targets", scene_json(cfg.scene.fixed)}};
    }
    if (cfg.region.tau_max > cfg.region.tau_min || cfg.region.nu_max > 0.0)
        j["region"] = {{"tau_min_s", cfg.region.tau_min},
                       {"tau_max_s", cfg.region.tau_max},
                       {"nu_max_hz", cfg.region.nu_max}};
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        ExperimentConfig cfg;
        if (j.contains("waveform")) cfg.waveform = waveform_from_name(j["waveform"].get<std::string>());
        if (j.contains("B_hz")) cfg.B = j["B_hz"].get<double>();
        if (j.contains("T_s")) cfg.T = j["T_s"].get<double>();
        if (j.contains("tau_p_s")) cfg.tau_p = j["tau_p_s"].get<double>();
        if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
        if (j.contains("beta")) cfg.beta = j["beta"].get<double>();
        if (j.contains("carrier_hz")) cfg.carrier_hz = j["carrier_hz"].get<double>();
        if (j.contains("snr_db")) cfg.snr_db = j["snr_db"].is_string() ? kInf : j["snr_db"].get<double>();
        if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("scene")) {
            const json& s = j["scene"];
            if (s.contains("rectangle")) {
                const json& r = s["rectangle"];
                cfg.scene.random = true;
                cfg.scene.tau_max = r.at("tau_max_s").get<double>();
                cfg.scene.nu_max = r.at("nu_max_hz").get<double>();
                if (r.contains("count")) cfg.scene.target_count = r["count"].get<int>();
                if (r.contains("unit_gains")) cfg.scene.unit_gains = r["unit_gains"].get<bool>();
            } else {
                cfg.scene.fixed = scene_from(s.at("targets"));
            }
        }
        if (j.contains("region")) {
            cfg.region.tau_min = j["region"].value("tau_min_s", 0.0);
            cfg.region.tau_max = j["region"].at("tau_max_s").get<double>();
            cfg.region.nu_max = j["region"].at("nu_max_hz").get<double>();
        }
        if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
        cfg.grid();  // validates B, T, tau_p
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
}

SearchRegion rectangle_omega(int index, double B, double T) {
    if (index < 1 || index > 6) throw ConfigError("rectangle_omega: index must be 1..6");
    const double s = static_cast<double>(7 - index);
    return {0.0, 7.5 * s / B, 3.0 * s / T};
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    // splitmix64 over the combined stream id
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RadarScene draw_scene(const SceneSpec& spec, double B, std::uint64_t rng_seed) {
    if (!spec.random) return spec.fixed;
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> utau(0.0, spec.tau_max);
    std::uniform_real_distribution<double> unu(-spec.nu_max, spec.nu_max);
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * std::numbers::pi);
    RadarScene scene;
    for (int i = 0; i < spec.target_count; ++i) {
        const double tau = utau(rng);
        const double nu = unu(rng);
        const double mag = spec.unit_gains ? 1.0 : 1e-7 / std::max(tau, 1.0 / B);
        scene.targets.push_back({std::polar(mag, uphase(rng)), tau, nu});
    }
    return scene;
}

DetectionReport run_pipeline(const ExperimentConfig& cfg, const RadarScene& scene, std::uint64_t noise_seed,
                             const SearchRegion& region, std::vector<AmbiguitySurface>* surfaces) {
    if (cfg.waveform == Waveform::zak_otfs) return zak_pipeline(cfg, scene, noise_seed, region, surfaces);
    return chirp_pipeline(cfg, scene, noise_seed, region, surfaces);
}

void run_heatmap(const ExperimentConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    RadarScene scene = draw_scene(cfg.scene, cfg.B, trial_seed(cfg.seed, 0));
    if (scene.targets.empty()) {
        // demo scene: three spread-phase targets around the resolution scale
        auto ph = [](double m, double deg) { return std::polar(m, deg * std::numbers::pi / 180.0); };
        scene.targets = {{ph(1.0, 0.0), 2.0 / cfg.B, 0.0},
                         {ph(0.8, 120.0), 4.0 / cfg.B, 4.0 / cfg.T},
                         {ph(0.6, 240.0), 6.0 / cfg.B, -6.0 / cfg.T}};
    }
    SearchRegion region = default_region(cfg, scene);
    std::vector<AmbiguitySurface> surfaces;
    DetectionReport rep = run_pipeline(cfg, scene, trial_seed(cfg.seed, 0) + 1, region, &surfaces);

    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        std::ofstream os(fs::path(out_dir) / ("surface_" + std::to_string(i) + ".csv"));
        surface_to_csv(surfaces[i], os);
    }

    json j;
    j["config"] = json::parse(config_to_json(cfg));
    j["scene"] = scene_json(scene);
    j["region"] = {{"tau_min_s", region.tau_min}, {"tau_max_s", region.tau_max}, {"nu_max_hz", region.nu_max}};
    j["crystallized"] = rep.crystallized;
    if (!rep.crystallized && cfg.waveform == Waveform::zak_otfs)
        j["warning"] = "crystallization condition violated; detection may alias";
    j["ghosts_rejected"] = rep.ghosts_rejected;
    j["surfaces"] = surfaces.size();
    json ests = json::array();
    for (const TargetEstimate& e : rep.estimates) {
        auto [rng_m, vel_mps] = to_range_velocity(e, cfg.carrier_hz);
        ests.push_back({{"tau_s", e.tau_hat},
                        {"nu_hz", e.nu_hat},
                        {"h_re", e.h_hat.real()},
                        {"h_im", e.h_hat.imag()},
                        {"peak_mag", e.peak_mag},
                        {"range_m", rng_m},
                        {"velocity_mps", vel_mps}});
    }
    j["estimates"] = ests;
    std::ofstream os(fs::path(out_dir) / "report.json");
    os << j.dump(2) << "\n";
}

std::vector<RmsRow> run_rectangles(const ExperimentConfig& cfg) {
    std::vector<RmsRow> rows;
    for (int i = 1; i <= 6; ++i) {
        SearchRegion omega = rectangle_omega(i, cfg.B, cfg.T);
        SceneSpec spec;
        spec.random = true;
        spec.tau_max = omega.tau_max;
        spec.nu_max = omega.nu_max;
        spec.target_count = 4;
        spec.unit_gains = cfg.scene.unit_gains;
        for (Waveform w : {Waveform::zak_otfs, Waveform::chirp_single_pair, Waveform::chirp_two_pairs})
            rows.push_back(monte_carlo(cfg, w, spec, cfg.snr_db, i, static_cast<std::uint64_t>(i)));
    }
    return rows;
}

std::vector<RmsRow> run_snr_sweep(const ExperimentConfig& cfg, const std::vector<double>& snr_list) {
    SceneSpec spec;
    spec.random = true;
    spec.tau_max = 12.0 / cfg.B;
    spec.nu_max = 12.0 / cfg.T;
    spec.target_count = 4;
    spec.unit_gains = cfg.scene.unit_gains;
    std::vector<RmsRow> rows;
    for (std::size_t si = 0; si < snr_list.size(); ++si)
        for (Waveform w : {Waveform::zak_otfs, Waveform::chirp_single_pair, Waveform::chirp_two_pairs})
            rows.push_back(monte_carlo(cfg, w, spec, snr_list[si], 0, 100 + si));
    return rows;
}

void rms_table_to_csv(const std::vector<RmsRow>& rows, std::ostream& os) {
    os << "rect_index,waveform,snr_db,range_rmse_m,range_se_m,velocity_rmse_mps,velocity_se_mps,miss_rate\n";
    os.precision(12);
    for (const RmsRow& r : rows)
        os << r.rect_index << ',' << waveform_name(r.waveform) << ',' << r.snr_db << ',' << r.range_rmse
           << ',' << r.range_se << ',' << r.velocity_rmse << ',' << r.velocity_se << ',' << r.miss_rate
           << '\n';
}

BenchResult run_complexity_bench(const std::vector<int>& bt_list) {
    if (bt_list.size() < 2) throw ConfigError("run_complexity_bench: need at least two sizes");
    BenchResult result;
    for (int bt : bt_list) {
        if (bt % 32 != 0) throw ConfigError("run_complexity_bench: BT must be a multiple of 32");
        const double tau_p = 1e-3;
        const DDGrid g(tau_p, 32e3, (bt / 32) * 1e-3);
        PulsoneParams p;
        p.tau_0 = (g.pm() / 2) * g.dtau();
        p.filter.B = g.B;
        p.filter.T = g.T;
        auto [p_dd, p_td] = make_pulsone(p, g);
        RadarScene scene{{{cplx(0.7, 0.1), 3 * g.dtau(), 5 * g.dnu()},
                          {cplx(-0.2, 0.5), 11 * g.dtau(), -2 * g.dnu()},
                          {cplx(0.4, -0.4), 20 * g.dtau(), 9 * g.dnu()}}};
        TimeSignal y = apply_scene(scene, p_td);
        DDSignal x_ref = zak_transform(p_td, g);
        std::vector<std::pair<int, int>> mask = make_sparsity_mask(x_ref);
        SearchRegion region{0.0, g.tau_p - g.dtau(), g.nu_p() / 2.0};

        BenchPoint pt;
        pt.bt = bt;
        double t0 = now_seconds();
        DDSignal y_dd = zak_transform(y, g);
        AmbiguitySurface dd = cross_ambiguity_dd(y_dd, x_ref, region, &mask);
        pt.dd_seconds = now_seconds() - t0;
        t0 = now_seconds();
        AmbiguitySurface td = cross_ambiguity_td(y, p_td, region, g);
        pt.td_seconds = now_seconds() - t0;
        // keep the optimizer honest
        if (dd.patch.peak_abs() < 0.0 || td.patch.peak_abs() < 0.0)
            throw NumericalError("run_complexity_bench: negative magnitude");
        result.points.push_back(pt);
    }
    result.dd_slope = fit_loglog_slope(result.points, true);
    result.td_slope = fit_loglog_slope(result.points, false);
    return result;
}

}  // namespace ddr
