#include "ddr/waveforms.hpp"

#include <cmath>
#include <numbers>

#include "ddr/zak.hpp"

namespace ddr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

double GaussianFilterParams::w1(double tau) const {
    return std::pow(2.0 * alpha * B * B / kPi, 0.25) * std::exp(-alpha * B * B * tau * tau);
}

double GaussianFilterParams::w2(double nu) const {
    return std::pow(2.0 * beta * T * T / kPi, 0.25) * std::exp(-beta * T * T * nu * nu);
}

double GaussianFilterParams::W2(double t) const {
    return std::pow(2.0 * beta * T * T / kPi, 0.25) * std::sqrt(kPi / (beta * T * T)) *
           std::exp(-kPi * kPi * t * t / (beta * T * T));
}

cplx GaussianFilterParams::w_mf(double tau, double nu) const {
    return w1(-tau) * w2(-nu) * std::polar(1.0, kTwoPi * tau * nu);
}

ChirpSchedule single_pair_schedule(double B, double T) {
    ChirpSchedule s;
    s.segments.push_back({2.0 * B / T, T / 2.0, -T / 2.0});
    s.segments.push_back({-2.0 * B / T, T / 2.0, 0.0});
    return s;
}

ChirpSchedule two_pairs_schedule(double B, double T) {
    ChirpSchedule s;
    s.segments.push_back({2.0 * B / T, T / 4.0, -T / 2.0});
    s.segments.push_back({-2.0 * B / T, T / 4.0, -T / 4.0});
    s.segments.push_back({4.0 * B / T, T / 4.0, 0.0});
    s.segments.push_back({-4.0 * B / T, T / 4.0, T / 4.0});
    return s;
}

DDPatch gaussian_filter_taps(const GaussianFilterParams& params, const DDGrid& grid, int truncation) {
    const int hk = truncation * grid.P, hl = truncation * grid.Q;
    DDPatch w(-hk, -hl, 2 * hk + 1, 2 * hl + 1, grid.dtau(), grid.dnu());
    for (int k = -hk; k <= hk; ++k)
        for (int l = -hl; l <= hl; ++l)
            w.at(k, l) = params.w1(k * grid.dtau()) * params.w2(l * grid.dnu());
    return w;
}

DDPatch matched_filter_of(const DDPatch& w) {
    DDPatch out(-(w.k0 + w.nk - 1), -(w.l0 + w.nl - 1), w.nk, w.nl, w.dtau, w.dnu);
    for (int k = out.k0; k < out.k0 + out.nk; ++k)
        for (int l = out.l0; l < out.l0 + out.nl; ++l)
            out.at(k, l) = std::conj(w.at(-k, -l)) *
                           std::polar(1.0, kTwoPi * (k * w.dtau) * (l * w.dnu));
    return out;
}

TimeSignal make_filtered_chirp(const ChirpParams& params, const GaussianFilterParams& filter, const DDGrid& grid) {
    const double a = params.slope, D = params.duration;
    if (D <= 0.0) throw ConfigError("make_filtered_chirp: duration must be positive");
    if (std::abs(a) * D / 2.0 > grid.sample_rate() / 2.0 + 1e-9)
        throw ConfigError("make_filtered_chirp: chirp sweep exceeds the sampling bandwidth");

    const double dt = 1.0 / grid.sample_rate();
    const double tc = params.start + D / 2.0;
    const long long i0 = std::llround(params.start * grid.sample_rate());
    if (std::abs(params.start * grid.sample_rate() - static_cast<double>(i0)) > 1e-6)
        throw ConfigError("make_filtered_chirp: segment start is not on the sample grid");
    const int nsamp = static_cast<int>(std::llround(D * grid.sample_rate()));

    // Riemann sum for u(t) = int w1(s) W2(t-s-tc) c(t-s) ds; the w1 factor
    // confines s to a few 1/B so an oversampled fixed window suffices.
    const int oversample = 8;
    const double ds = dt / oversample;
    const int hs = 5 * grid.P * oversample;

    TimeSignal u;
    u.sample_rate = grid.sample_rate();
    u.t_start = static_cast<double>(i0) * dt;
    u.samples.resize(static_cast<std::size_t>(nsamp));
    for (int i = 0; i < nsamp; ++i) {
        const double t = u.t_start + i * dt;
        cplx acc = 0.0;
        for (int j = -hs; j <= hs; ++j) {
            const double s = j * ds;
            const double ts = t - s;
            acc += filter.w1(s) * filter.W2(ts - tc) *
                   std::polar(1.0, kPi * a * (ts - tc) * (ts - tc));
        }
        u.samples[static_cast<std::size_t>(i)] = acc * ds;
    }

    const double e = u.energy();
    if (e <= 0.0) throw NumericalError("make_filtered_chirp: zero-energy result");
    u.scale(1.0 / std::sqrt(e));
    return u;
}

TimeSignal make_chirp_probe(const ChirpSchedule& schedule, double alpha, double beta, const DDGrid& grid) {
    if (schedule.segments.empty()) throw ConfigError("make_chirp_probe: empty schedule");
    TimeSignal out;
    out.sample_rate = grid.sample_rate();
    out.t_start = -grid.T / 2.0;
    out.samples.assign(static_cast<std::size_t>(grid.num_samples()), cplx(0.0));

    const double seg_energy = 1.0 / static_cast<double>(schedule.segments.size());
    for (const ChirpParams& seg : schedule.segments) {
        GaussianFilterParams f;
        f.alpha = alpha;
        f.beta = beta;
        f.B = grid.B;
        f.T = seg.duration;
        TimeSignal u = make_filtered_chirp(seg, f, grid);
        u.scale(std::sqrt(seg_energy));
        const long long off = std::llround((u.t_start - out.t_start) * grid.sample_rate());
        if (off < 0 || off + static_cast<long long>(u.samples.size()) > static_cast<long long>(out.samples.size()))
            throw ConfigError("make_chirp_probe: segment falls outside [-T/2, T/2)");
        for (std::size_t i = 0; i < u.samples.size(); ++i)
            out.samples[static_cast<std::size_t>(off) + i] += u.samples[i];
    }
    return out;
}

std::pair<DDSignal, TimeSignal> make_pulsone(const PulsoneParams& params, const DDGrid& grid) {
    if (params.tau_0 < 0.0 || params.tau_0 >= grid.tau_p ||
        params.nu_0 < 0.0 || params.nu_0 >= grid.nu_p())
        throw ConfigError("make_pulsone: (tau_0, nu_0) must lie in the fundamental domain");

    GaussianFilterParams f = params.filter;
    if (f.B == 0.0) f.B = grid.B;
    if (f.T == 0.0) f.T = grid.T;

    const int k0 = static_cast<int>(std::llround(params.tau_0 / grid.dtau()));
    const int l0 = static_cast<int>(std::llround(params.nu_0 / grid.dnu()));

    DDSignal impulse(grid);
    impulse.at(k0 % grid.pm(), l0 % grid.qn()) = 1.0 / (grid.dtau() * grid.dnu());

    DDSignal p_dd = twisted_convolve(gaussian_filter_taps(f, grid), impulse);
    TimeSignal p_td = inverse_zak(p_dd);

    const double e = p_td.energy();
    if (e <= 0.0) throw NumericalError("make_pulsone: zero-energy result");
    const double c = 1.0 / std::sqrt(e);
    for (cplx& v : p_dd.values) v *= c;
    p_td.scale(c);
    return {std::move(p_dd), std::move(p_td)};
}

}  // namespace ddr
