#pragma once

#include <utility>

#include "ddr/twisted.hpp"
#include "ddr/types.hpp"

namespace ddr {

/**
 * Separable Gaussian pulse-shaping filter w(tau,nu) = w1(tau) * w2(nu)
 * limiting bandwidth to roughly B and duration to roughly T. Both
 * factors have unit L2 norm.
 */
struct GaussianFilterParams {
    double alpha = 1.584;
    double beta = 1.584;
    double B = 0.0;
    double T = 0.0;

    double w1(double tau) const;       // (2 alpha B^2/pi)^{1/4} e^{-alpha B^2 tau^2}
    double w2(double nu) const;        // (2 beta T^2/pi)^{1/4} e^{-beta T^2 nu^2}
    double W2(double t) const;         // inverse Fourier transform of w2 (Gaussian)
    cplx w_mf(double tau, double nu) const;  // conj(w(-tau,-nu)) e^{j2pi tau nu}
};

/// One linear-FM segment, c(t) = e^{j pi a (t - center)^2} on
/// [start, start+duration); sweeps slope*duration Hz centered on DC.
struct ChirpParams {
    double slope = 0.0;     // Hz^2, signed
    double duration = 0.0;  // seconds
    double start = 0.0;     // seconds
};

/// Ordered chirp segments partitioning [-T/2, T/2].
struct ChirpSchedule {
    std::vector<ChirpParams> segments;
};

/// Up/down pair: slope +-2B/T over two T/2 halves.
ChirpSchedule single_pair_schedule(double B, double T);
/// Two pairs: slopes (+-2B/T, +-4B/T) over four T/4 quarters.
ChirpSchedule two_pairs_schedule(double B, double T);

struct PulsoneParams {
    double tau_0 = 0.0;  // in [0, tau_p)
    double nu_0 = 0.0;   // in [0, nu_p)
    GaussianFilterParams filter;
};

/// Separable Gaussian taps on a (2*trunc*P+1) x (2*trunc*Q+1) patch
/// centered at the origin; trunc counts 1/B (delay) and 1/T (Doppler)
/// widths retained on each side.
DDPatch gaussian_filter_taps(const GaussianFilterParams& params, const DDGrid& grid, int truncation = 5);

/// w_mf(tau,nu) = conj(w(-tau,-nu)) e^{j2pi tau nu}, tap by tap.
DDPatch matched_filter_of(const DDPatch& w);

/**
 * Time/band-limited chirp u = w1 conv (W2 * c), synthesized directly in
 * the time domain over the segment window and normalized to unit energy.
 * The filter's T should equal the segment duration.
 */
TimeSignal make_filtered_chirp(const ChirpParams& params, const GaussianFilterParams& filter, const DDGrid& grid);

/// Full-window probe for a schedule; each segment carries energy 1/#segments.
TimeSignal make_chirp_probe(const ChirpSchedule& schedule, double alpha, double beta, const DDGrid& grid);

/**
 * Zak-OTFS probe: a filtered DD pulse at (tau_0, nu_0). Returns the DD
 * representation (filter twisted-convolved with the discrete impulse)
 * and its TD realization via the inverse Zak transform, jointly
 * normalized to unit energy.
 */
std::pair<DDSignal, TimeSignal> make_pulsone(const PulsoneParams& params, const DDGrid& grid);

}  // namespace ddr
