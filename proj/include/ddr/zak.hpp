#pragma once

#include "ddr/types.hpp"

namespace ddr {

/**
 * Sampled Zak transform.
 *
 * For each delay bin k the Doppler column is sqrt(tau_p) times the
 * QN-point DFT (kernel e^{-j2pi nl/QN}) of the decimated sample sequence
 * x((k + n*PM)/(P*B)), n indexed by the absolute period number of each
 * sample. Every sample of x that lands on the grid contributes, so guard
 * padding beyond [-T/2, T/2) folds in with the correct phase.
 *
 * Requires x.sample_rate == P*B and t_start on the sample grid.
 */
DDSignal zak_transform(const TimeSignal& x, const DDGrid& grid);

/**
 * Inverse Zak transform: Riemann sum over the Doppler axis of the
 * fundamental domain. Returns the window [-T/2, T/2), P*M*N samples.
 * Exact inverse of zak_transform on that window.
 */
TimeSignal inverse_zak(const DDSignal& x_dd);

/// Quasi-periodic extension: value at any integer (k, l), with the
/// e^{j2pi n nu tau_p} phase for delay-period shifts (Doppler shifts are
/// phase-free).
cplx quasi_periodic_value(const DDSignal& x_dd, int k, int l);

/// Riemann sum over the fundamental domain of a * conj(b); equals the
/// time-domain inner product of the realizations (unitarity).
cplx dd_inner_product(const DDSignal& a, const DDSignal& b);

}  // namespace ddr
