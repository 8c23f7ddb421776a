#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ddr/ambiguity.hpp"
#include "ddr/channel.hpp"
#include "ddr/estimator.hpp"
#include "ddr/types.hpp"

namespace ddr {

enum class Waveform { zak_otfs, chirp_single_pair, chirp_two_pairs };

std::string waveform_name(Waveform w);
Waveform waveform_from_name(const std::string& name);

/// Scene source for an experiment: either a fixed target list or a
/// per-trial uniform draw from [0, tau_max] x [-nu_max, nu_max].
struct SceneSpec {
    RadarScene fixed;
    bool random = false;
    double tau_max = 0.0;
    double nu_max = 0.0;
    int target_count = 4;
    bool unit_gains = false;  // else |h| = 1e-7 / max(tau, 1/B), random phase
};

struct ExperimentConfig {
    Waveform waveform = Waveform::zak_otfs;
    double B = 1e6;
    double T = 2e-3;
    double tau_p = 50e-6;
    double alpha = 1.584;
    double beta = 1.584;
    double carrier_hz = 1e9;
    SceneSpec scene;
    double snr_db = std::numeric_limits<double>::infinity();
    int trials = 30;
    std::uint64_t seed = 1;
    // detection window; tau_max <= 0 selects a default per experiment
    SearchRegion region{0.0, 0.0, 0.0};

    DDGrid grid() const { return DDGrid(tau_p, B, T); }
};

/// Desk-scale profile (BT = 2000) and the full-scale profile (BT = 80000).
ExperimentConfig ci_profile();
ExperimentConfig full_profile();

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

/// Shrinking test rectangles Omega_i, i in 1..6:
/// [0, 7.5(7-i)/B] x [-3(7-i)/T, 3(7-i)/T].
SearchRegion rectangle_omega(int index, double B, double T);

/// Deterministic per-trial stream seed derived from (seed, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Uniform draw of spec.target_count targets from the scene rectangle.
RadarScene draw_scene(const SceneSpec& spec, double B, std::uint64_t rng_seed);

/// One full probe -> channel -> cross-ambiguity -> detection pass.
/// Surfaces (one per chirp segment pair member, one for zak_otfs) are
/// appended to *surfaces when given.
DetectionReport run_pipeline(const ExperimentConfig& cfg, const RadarScene& scene,
                             std::uint64_t noise_seed, const SearchRegion& region,
                             std::vector<AmbiguitySurface>* surfaces = nullptr);

/// Writes surface_<i>.csv per segment plus report.json into out_dir.
void run_heatmap(const ExperimentConfig& cfg, const std::string& out_dir);

struct RmsRow {
    int rect_index = 0;
    Waveform waveform = Waveform::zak_otfs;
    double snr_db = 0.0;
    double range_rmse = 0.0;     // mean over trials, meters
    double range_se = 0.0;       // standard error of that mean
    double velocity_rmse = 0.0;  // meters/second
    double velocity_se = 0.0;
    double miss_rate = 0.0;
};

/// Monte Carlo RMS vs rectangle size for all three waveforms.
std::vector<RmsRow> run_rectangles(const ExperimentConfig& cfg);

/// Monte Carlo RMS vs SNR for all three waveforms over a fixed rectangle.
std::vector<RmsRow> run_snr_sweep(const ExperimentConfig& cfg, const std::vector<double>& snr_list);

void rms_table_to_csv(const std::vector<RmsRow>& rows, std::ostream& os);

struct BenchPoint {
    int bt = 0;
    double dd_seconds = 0.0;  // zak transform + masked DD cross-ambiguity
    double td_seconds = 0.0;  // direct TD correlation, same region
};

struct BenchResult {
    std::vector<BenchPoint> points;
    double dd_slope = 0.0;  // log-log regression of seconds vs BT
    double td_slope = 0.0;
};

/// Times both cross-ambiguity paths over the fundamental DD domain.
BenchResult run_complexity_bench(const std::vector<int>& bt_list);

}  // namespace ddr
