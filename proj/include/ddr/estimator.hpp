#pragma once

#include "ddr/ambiguity.hpp"
#include "ddr/channel.hpp"
#include "ddr/types.hpp"

namespace ddr {

struct TargetEstimate {
    double tau_hat = 0.0;
    double nu_hat = 0.0;
    cplx h_hat;        // surface value / E_T
    double peak_mag = 0.0;
};

struct DetectionReport {
    std::vector<TargetEstimate> estimates;  // sorted by descending peak_mag
    int ghosts_rejected = 0;
    bool crystallized = false;
};

/// Grid argmax of |A|; ties break toward smaller delay, then smaller
/// |Doppler|. Throws NumericalError on an all-zero surface.
TargetEstimate detect_single(const AmbiguitySurface& surface);

/**
 * 8-neighborhood local maxima above rel_threshold * global max, accepted
 * greedily in descending magnitude with an exclusion zone of one
 * resolution cell (res_k x res_l bins) around each accepted peak.
 */
std::vector<TargetEstimate> detect_peaks(const AmbiguitySurface& surface, int max_count,
                                         double rel_threshold = 0.5);

/**
 * Chirp-line intersection: each surface concentrates on bands
 * nu = slope * tau + c. Per Doppler row the delay ridge maximum gives an
 * intercept sample; samples cluster into lines, and every up/down line
 * pair intersects in one delay-Doppler candidate (true targets plus
 * ghosts). abs_threshold drops ridge points below that magnitude.
 */
std::vector<TargetEstimate> chirp_intersections(const AmbiguitySurface& up, const AmbiguitySurface& down,
                                                double slope_up, double slope_down, int max_count,
                                                double abs_threshold = 0.0);

/// Keeps pair1 candidates that match a pair2 candidate within
/// (tol_tau, tol_nu); estimates are the matched midpoints.
std::vector<TargetEstimate> ghost_removal(const std::vector<TargetEstimate>& pair1,
                                          const std::vector<TargetEstimate>& pair2,
                                          double tol_tau, double tol_nu);

/// range = c*tau/2, velocity = nu * (c/carrier) / 2.
std::pair<double, double> to_range_velocity(const TargetEstimate& est, double carrier_hz);

struct RmsResult {
    double range_rmse = 0.0;     // meters
    double velocity_rmse = 0.0;  // meters/second
    bool missed = false;         // true when no estimates were available
};

/**
 * Scores estimates against the true scene: optimal one-to-one matching
 * (exhaustive, scenes of up to ~6 targets) minimizing normalized squared
 * DD distance (dtau*B)^2 + (dnu*T)^2; unmatched truths score against
 * their nearest estimate so misses inflate the error.
 */
RmsResult rms_error(const std::vector<TargetEstimate>& estimates, const RadarScene& truth,
                    double carrier_hz, double B, double T);

}  // namespace ddr
