#pragma once

#include <iosfwd>
#include <utility>

#include "ddr/twisted.hpp"
#include "ddr/types.hpp"
#include "ddr/waveforms.hpp"

namespace ddr {

/// Delay/Doppler window the detector scans: [tau_min, tau_max] x
/// [-nu_max, nu_max]. Bins are snapped outward to the grid.
struct SearchRegion {
    double tau_min = 0.0;
    double tau_max = 0.0;
    double nu_max = 0.0;
};

/**
 * Sampled cross-ambiguity A_{y,x} over a search region. patch holds the
 * complex values on absolute bins (delay bin k at k/(P*B), Doppler bin l
 * at l/(Q*T)); res_k x res_l bins make up one nominal resolution cell
 * (1/B x 1/T). probe_energy is E_T = A_{x,x}(0,0).
 */
struct AmbiguitySurface {
    DDPatch patch;
    int res_k = 2;
    int res_l = 2;
    double probe_energy = 0.0;
};

/// Inclusive absolute-bin bounds {k_min, k_max, l_max} of a region.
struct RegionBins {
    int k_min = 0, k_max = 0, l_max = 0;
};
RegionBins region_bins(const SearchRegion& region, double dtau, double dnu);

/**
 * Direct time-domain evaluation A(tau,nu) = sum_t y(t) x*(t-tau)
 * e^{-j2pi nu (t-tau)} dt at every region bin. O(region * samples); the
 * reference the fast DD path is checked against. grid supplies the bin
 * widths (its sample rate must match the signals).
 */
AmbiguitySurface cross_ambiguity_td(const TimeSignal& y, const TimeSignal& x, const SearchRegion& region,
                                    const DDGrid& grid);

/// Fundamental-domain bins of x_dd with |value| >= rel_threshold * peak,
/// as (k, l) offsets for the sparse cross-ambiguity sum.
std::vector<std::pair<int, int>> make_sparsity_mask(const DDSignal& x_dd, double rel_threshold = 1e-2);

/**
 * DD-domain evaluation: for each region bin, a sum over the fundamental
 * domain of y_dd * conj(x_dd quasi-periodically shifted) with the
 * e^{-j2pi l (k'-k)/(PQMN)} kernel, scaled by 1/(PQMN). With the full
 * sum this equals cross_ambiguity_td exactly for signals supported on
 * the grid window; with a sparsity mask only the listed x_dd bins
 * contribute and the cost drops to O(region * |mask|).
 */
AmbiguitySurface cross_ambiguity_dd(const DDSignal& y_dd, const DDSignal& x_dd, const SearchRegion& region,
                                    const std::vector<std::pair<int, int>>* mask = nullptr);

/**
 * Closed-form self-ambiguity of a Gaussian-filtered chirp of slope a,
 * normalized so the origin value is 1: a Gaussian Doppler envelope and
 * e^{j pi nu tau} phase times a real 1-D Gaussian integral along the
 * chirp line, evaluated by adaptive quadrature. The segment's window
 * center adds the e^{-j2pi nu t_c} phase of a shifted waveform.
 */
cplx chirp_self_ambiguity_oracle(const ChirpParams& params, const GaussianFilterParams& filter,
                                 double tau, double nu);

/**
 * One period-lattice term of the pulsone self-ambiguity,
 * w *s (e^{j2pi m nu_p tau} w_mf(tau - n tau_p, nu - m nu_p)),
 * as a discrete patch around (n tau_p, m nu_p).
 */
DDPatch pulsone_self_ambiguity_patch(const GaussianFilterParams& filter, const DDGrid& grid, int n, int m);

/// Value of the (n, m) lattice term at an on-grid (tau, nu).
cplx pulsone_self_ambiguity_oracle(const GaussianFilterParams& filter, const DDGrid& grid, int n, int m,
                                   double tau, double nu);

/// Riemann integral of |A|^2 over the surface; equals E_T^2 when the
/// surface captures the full ambiguity mass (Moyal identity).
double moyal_volume(const AmbiguitySurface& surface);

/// CSV rows `tau_s,nu_hz,re,im,abs`, row-major by delay bin.
void surface_to_csv(const AmbiguitySurface& surface, std::ostream& os);

}  // namespace ddr
