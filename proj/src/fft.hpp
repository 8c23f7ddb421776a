#pragma once

#include <fftw3.h>

#include <complex>
#include <vector>

namespace ddr::detail {

/// Batched in-place 1-D transforms on contiguous rows of length n.
/// sign = FFTW_FORWARD gives the e^{-j2pi nl/N} kernel; no normalization.
inline void fft_rows_inplace(std::complex<double>* data, int howmany, int n, int sign) {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
    fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, p, nullptr, 1, n, p, nullptr, 1, n,
                                        sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

}  // namespace ddr::detail
