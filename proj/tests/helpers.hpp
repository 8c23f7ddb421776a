#pragma once

#include <random>

#include "ddr/types.hpp"

namespace ddr::test {

/// Random complex signal on the canonical window [-T/2, T/2).
inline TimeSignal random_signal(const DDGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TimeSignal x;
    x.sample_rate = g.sample_rate();
    x.t_start = -g.T / 2.0;
    x.samples.resize(static_cast<std::size_t>(g.num_samples()));
    for (cplx& s : x.samples) s = cplx(gauss(rng), gauss(rng));
    return x;
}

inline cplx td_inner(const TimeSignal& a, const TimeSignal& b) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) acc += a.samples[i] * std::conj(b.samples[i]);
    return acc / a.sample_rate;
}

inline double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const cplx& x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace ddr::test
