#include "ddr/zak.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace ddr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Global sample index of x[0] on the t = m/(P*B) grid; throws off-grid.
long long start_index(const TimeSignal& x, const DDGrid& grid) {
    if (std::abs(x.sample_rate - grid.sample_rate()) > 1e-6 * grid.sample_rate())
        throw ConfigError("zak_transform: sample rate does not match grid (P*B)");
    double m0 = x.t_start * grid.sample_rate();
    double r = std::round(m0);
    if (std::abs(m0 - r) > 1e-6)
        throw ConfigError("zak_transform: t_start is not aligned to the sample grid");
    return static_cast<long long>(r);
}

}  // namespace

DDSignal zak_transform(const TimeSignal& x, const DDGrid& grid) {
    const long long m0 = start_index(x, grid);
    const int pm = grid.pm(), qn = grid.qn();
    DDSignal out(grid);

    // Fold samples into per-delay-bin sequences indexed by period number mod QN.
    for (std::size_t s = 0; s < x.samples.size(); ++s) {
        long long m = m0 + static_cast<long long>(s);
        long long k = m % pm;
        if (k < 0) k += pm;
        long long n = (m - k) / pm;
        int nq = static_cast<int>(((n % qn) + qn) % qn);
        out.values[static_cast<std::size_t>(k) * qn + nq] += x.samples[s];
    }

    detail::fft_rows_inplace(out.values.data(), pm, qn, FFTW_FORWARD);

    const double scale = std::sqrt(grid.tau_p);
    for (cplx& v : out.values) v *= scale;
    return out;
}

TimeSignal inverse_zak(const DDSignal& x_dd) {
    const DDGrid& g = x_dd.grid;
    const int pm = g.pm(), qn = g.qn(), n_half = g.N / 2;

    std::vector<cplx> cols = x_dd.values;
    detail::fft_rows_inplace(cols.data(), pm, qn, FFTW_BACKWARD);

    // Sample at t = (k + n*PM)/(P*B) with absolute n = n' - ceil(N/2); the
    // window starts at n = -ceil(N/2) (equal to -T/2 for even N).
    const int nc = (g.N + 1) / 2;
    TimeSignal out;
    out.sample_rate = g.sample_rate();
    out.t_start = -static_cast<double>(nc) * g.tau_p;
    out.samples.resize(static_cast<std::size_t>(g.num_samples()));

    const double scale = std::sqrt(g.tau_p) * g.dnu();
    for (int np = 0; np < g.N; ++np) {
        int n = np - nc;
        int nq = ((n % qn) + qn) % qn;
        for (int k = 0; k < pm; ++k)
            out.samples[static_cast<std::size_t>(np) * pm + k] =
                scale * cols[static_cast<std::size_t>(k) * qn + nq];
    }
    return out;
}

cplx quasi_periodic_value(const DDSignal& x_dd, int k, int l) {
    const int pm = x_dd.grid.pm(), qn = x_dd.grid.qn();
    int km = ((k % pm) + pm) % pm;
    int lm = ((l % qn) + qn) % qn;
    int n = (k - km) / pm;
    cplx v = x_dd.at(km, lm);
    if (n == 0) return v;
    double phase = kTwoPi * static_cast<double>(n) * lm / qn;
    return v * std::polar(1.0, phase);
}

cplx dd_inner_product(const DDSignal& a, const DDSignal& b) {
    if (!a.grid.same_as(b.grid)) throw ConfigError("dd_inner_product: grid mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * std::conj(b.values[i]);
    return acc * (a.grid.dtau() * a.grid.dnu());
}

}  // namespace ddr
