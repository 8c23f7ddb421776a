#pragma once

#include <string>

#include "ddr/twisted.hpp"
#include "ddr/types.hpp"

namespace ddr {

/// One point scatterer: complex gain h, delay tau (s), Doppler nu (Hz).
struct Target {
    cplx h;
    double tau = 0.0;
    double nu = 0.0;
};

/// Multi-target DD spreading function h(tau,nu) = sum h_i d(tau-tau_i)d(nu-nu_i).
struct RadarScene {
    std::vector<Target> targets;

    double tau_min() const;
    double tau_max() const;
    double nu_min() const;
    double nu_max() const;
    /// (tau_max - tau_min) * (nu_max - nu_min) < 1.
    bool underspread() const;
};

/**
 * y(t) = sum_i h_i e^{j2pi nu_i (t - tau_i)} x(t - tau_i).
 *
 * Delays are snapped to the nearest 1/(P*B) sample; the snapped delay is
 * used in the Doppler phase too, so on-grid scenes are reproduced exactly.
 * The output keeps x's window, so energy arriving later than t_end is
 * dropped; pad x with guard samples if that matters.
 */
TimeSignal apply_scene(const RadarScene& scene, const TimeSignal& x);

/**
 * Adds i.i.d. circularly-symmetric complex Gaussian noise with per-sample
 * variance sum|x|^2 / (num_samples * 10^(snr_db/10)). Deterministic for a
 * fixed seed; an infinite snr_db returns x unchanged.
 */
TimeSignal add_awgn(const TimeSignal& x, double snr_db, std::uint64_t rng_seed);

/// True iff delay spread < tau_p and Doppler spread < nu_p (aliasing-free
/// DD identification is possible).
bool crystallization_check(const RadarScene& scene, const DDGrid& grid);

/// Scene as a sum of discrete DD impulses on the grid (delays and
/// Dopplers snapped to bins); twisted convolution with this patch is the
/// DD-domain channel action.
DDPatch scene_as_impulses(const RadarScene& scene, const DDGrid& grid);

/// JSON array of {h_re, h_im, tau_s, nu_hz} records.
std::string scene_to_json(const RadarScene& scene);
RadarScene scene_from_json(const std::string& text);

}  // namespace ddr
