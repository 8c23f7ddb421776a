#pragma once

#include "ddr/types.hpp"

namespace ddr {

/**
 * Aperiodic sampled DD-domain function (filter taps, ambiguity patches)
 * on a rectangle of integer bins [k0, k0+nk) x [l0, l0+nl), bin widths
 * dtau x dnu. Bin indices are absolute: bin k sits at delay k*dtau.
 */
struct DDPatch {
    int k0 = 0, l0 = 0;
    int nk = 0, nl = 0;
    double dtau = 0.0, dnu = 0.0;
    std::vector<cplx> v;  // row-major by delay bin

    DDPatch() = default;
    DDPatch(int k0_, int l0_, int nk_, int nl_, double dtau_, double dnu_)
        : k0(k0_), l0(l0_), nk(nk_), nl(nl_), dtau(dtau_), dnu(dnu_),
          v(static_cast<std::size_t>(nk_) * nl_) {}

    bool contains(int k, int l) const { return k >= k0 && k < k0 + nk && l >= l0 && l < l0 + nl; }
    cplx& at(int k, int l) { return v[static_cast<std::size_t>(k - k0) * nl + (l - l0)]; }
    const cplx& at(int k, int l) const { return v[static_cast<std::size_t>(k - k0) * nl + (l - l0)]; }
    cplx value_or_zero(int k, int l) const { return contains(k, l) ? at(k, l) : cplx(0.0); }

    double peak_abs() const;
};

/// Discrete twisted convolution of two aperiodic patches (Riemann sum with
/// the e^{j2pi nu'(tau - tau')} kernel). Associative, not commutative.
DDPatch twisted_convolve(const DDPatch& a, const DDPatch& b);

/// Twisted convolution of an aperiodic patch with a quasi-periodic DD
/// signal; the result is again quasi-periodic on the same grid.
DDSignal twisted_convolve(const DDPatch& a, const DDSignal& b);

/// Single-bin discrete Dirac impulse: amplitude 1/(dtau*dnu) at (k, l),
/// the identity-building block of the twisted-convolution algebra.
DDPatch dd_delta(int k, int l, double dtau, double dnu);

}  // namespace ddr
