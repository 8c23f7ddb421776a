#include "ddr/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "ddr/zak.hpp"

namespace ddr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

long long aligned_start_index(const TimeSignal& x, double rate, const char* who) {
    if (std::abs(x.sample_rate - rate) > 1e-6 * rate)
        throw ConfigError(std::string(who) + ": sample rate mismatch");
    double m = x.t_start * rate;
    double r = std::round(m);
    if (std::abs(m - r) > 1e-6) throw ConfigError(std::string(who) + ": t_start off the sample grid");
    return static_cast<long long>(r);
}

int pos_mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

RegionBins region_bins(const SearchRegion& region, double dtau, double dnu) {
    if (region.tau_min > region.tau_max || region.nu_max < 0.0)
        throw ConfigError("region_bins: need tau_min <= tau_max and nu_max >= 0");
    RegionBins rb;
    rb.k_min = static_cast<int>(std::floor(region.tau_min / dtau + 1e-9));
    rb.k_max = static_cast<int>(std::ceil(region.tau_max / dtau - 1e-9));
    rb.l_max = static_cast<int>(std::ceil(region.nu_max / dnu - 1e-9));
    return rb;
}

AmbiguitySurface cross_ambiguity_td(const TimeSignal& y, const TimeSignal& x, const SearchRegion& region,
                                    const DDGrid& grid) {
    const double rate = grid.sample_rate();
    const long long my0 = aligned_start_index(y, rate, "cross_ambiguity_td(y)");
    const long long mx0 = aligned_start_index(x, rate, "cross_ambiguity_td(x)");
    const double dt = 1.0 / rate, dnu = grid.dnu();
    const RegionBins rb = region_bins(region, dt, dnu);

    AmbiguitySurface out;
    out.res_k = grid.P;
    out.res_l = grid.Q;
    out.probe_energy = x.energy();
    out.patch = DDPatch(rb.k_min, -rb.l_max, rb.k_max - rb.k_min + 1, 2 * rb.l_max + 1, dt, dnu);

    const long long ly = static_cast<long long>(y.samples.size());
    const long long lx = static_cast<long long>(x.samples.size());
    std::vector<cplx> z;
    for (int k = rb.k_min; k <= rb.k_max; ++k) {
        const long long off = static_cast<long long>(k) + mx0 - my0;  // j = i - off
        const long long i_lo = std::max<long long>(0, off);
        const long long i_hi = std::min(ly, lx + off);
        if (i_lo >= i_hi) continue;
        z.assign(static_cast<std::size_t>(i_hi - i_lo), cplx(0.0));
        for (long long i = i_lo; i < i_hi; ++i)
            z[static_cast<std::size_t>(i - i_lo)] =
                y.samples[static_cast<std::size_t>(i)] * std::conj(x.samples[static_cast<std::size_t>(i - off)]);

        for (int l = -rb.l_max; l <= rb.l_max; ++l) {
            // t - tau at sample i is (my0 + i - k) * dt
            const double theta = -kTwoPi * l * dnu * dt;
            const cplx step = std::polar(1.0, theta);
            cplx acc = 0.0;
            cplx ph = std::polar(1.0, theta * static_cast<double>(my0 + i_lo - k));
            for (std::size_t i = 0; i < z.size(); ++i) {
                if ((i & 4095u) == 0 && i > 0)
                    ph = std::polar(1.0, theta * static_cast<double>(my0 + i_lo + static_cast<long long>(i) - k));
                acc += z[i] * ph;
                ph *= step;
            }
            out.patch.at(k, l) = acc * dt;
        }
    }
    return out;
}

std::vector<std::pair<int, int>> make_sparsity_mask(const DDSignal& x_dd, double rel_threshold) {
    double peak = 0.0;
    for (const cplx& v : x_dd.values) peak = std::max(peak, std::abs(v));
    const double thr = rel_threshold * peak;
    std::vector<std::pair<int, int>> mask;
    for (int k = 0; k < x_dd.grid.pm(); ++k)
        for (int l = 0; l < x_dd.grid.qn(); ++l)
            if (std::abs(x_dd.at(k, l)) >= thr) mask.emplace_back(k, l);
    return mask;
}

AmbiguitySurface cross_ambiguity_dd(const DDSignal& y_dd, const DDSignal& x_dd, const SearchRegion& region,
                                    const std::vector<std::pair<int, int>>* mask) {
    const DDGrid& g = y_dd.grid;
    if (!g.same_as(x_dd.grid)) throw ConfigError("cross_ambiguity_dd: grid mismatch");
    const int pm = g.pm(), qn = g.qn();
    const double dtau = g.dtau(), dnu = g.dnu();
    const RegionBins rb = region_bins(region, dtau, dnu);
    const double inv = 1.0 / (static_cast<double>(pm) * qn);
    const double kern = -kTwoPi / (static_cast<double>(pm) * qn);  // exponent per l*(k'-k)

    AmbiguitySurface out;
    out.res_k = g.P;
    out.res_l = g.Q;
    out.probe_energy = std::real(dd_inner_product(x_dd, x_dd));
    out.patch = DDPatch(rb.k_min, -rb.l_max, rb.k_max - rb.k_min + 1, 2 * rb.l_max + 1, dtau, dnu);

    for (int k = rb.k_min; k <= rb.k_max; ++k) {
        for (int l = -rb.l_max; l <= rb.l_max; ++l) {
            cplx acc = 0.0;
            if (mask) {
                for (const auto& [km, lm] : *mask) {
                    const int kk = pos_mod(k + km, pm);
                    const int ll = pos_mod(l + lm, qn);
                    acc += y_dd.at(kk, ll) * std::conj(quasi_periodic_value(x_dd, kk - k, ll - l)) *
                           std::polar(1.0, kern * l * (kk - k));
                }
            } else {
                for (int kp = 0; kp < pm; ++kp) {
                    const int dk = kp - k;
                    const int kmf = pos_mod(dk, pm);
                    const double n = static_cast<double>((dk - kmf) / pm);
                    cplx row = 0.0;
                    for (int lp = 0; lp < qn; ++lp) {
                        const int dlm = pos_mod(lp - l, qn);
                        const cplx xq = x_dd.at(kmf, dlm) * std::polar(1.0, kTwoPi * n * dlm / qn);
                        row += y_dd.at(kp, lp) * std::conj(xq);
                    }
                    acc += row * std::polar(1.0, kern * l * dk);
                }
            }
            out.patch.at(k, l) = acc * inv;
        }
    }
    return out;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    if (depth > 40) throw NumericalError("chirp_self_ambiguity_oracle: quadrature did not converge");
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 0);
}

}  // namespace

cplx chirp_self_ambiguity_oracle(const ChirpParams& params, const GaussianFilterParams& filter,
                                 double tau, double nu) {
    const double a = params.slope;
    const double aB2 = filter.alpha * filter.B * filter.B;
    const double bT2 = filter.beta * filter.T * filter.T;
    if (aB2 <= 0.0 || bT2 <= 0.0) throw ConfigError("chirp_self_ambiguity_oracle: filter B, T must be set");

    auto integrand = [&](double tau0, double nu0) {
        return [=](double s) {
            const double d1 = tau0 - s;
            const double d2 = nu0 - a * s;
            return std::exp(-0.5 * aB2 * d1 * d1 - 0.5 * bT2 * d2 * d2 - 0.5 * kPi * kPi * s * s / bT2);
        };
    };

    auto line_integral = [&](double tau0, double nu0) {
        // Union of the three Gaussian factors' supports, split at the centers
        // so the adaptive rule cannot step over a narrow product bump.
        std::vector<double> c{tau0, 0.0};
        std::vector<double> w{1.0 / std::sqrt(aB2), std::sqrt(bT2) / kPi};
        if (a != 0.0) {
            c.push_back(nu0 / a);
            w.push_back(1.0 / (std::abs(a) * std::sqrt(bT2)));
        }
        const double wmin = *std::min_element(w.begin(), w.end());
        double lo = c[0], hi = c[0];
        for (std::size_t i = 0; i < c.size(); ++i) {
            lo = std::min(lo, c[i] - 8.0 * w[i]);
            hi = std::max(hi, c[i] + 8.0 * w[i]);
        }
        std::vector<double> pts{lo};
        std::vector<double> cs = c;
        std::sort(cs.begin(), cs.end());
        for (double x : cs)
            if (x > pts.back() && x < hi) pts.push_back(x);
        pts.push_back(hi);
        const auto f = integrand(tau0, nu0);
        const double tol = 1e-10 * wmin;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += integrate(f, pts[i], pts[i + 1], tol);
        return acc;
    };

    const double raw0 = line_integral(0.0, 0.0);
    if (raw0 <= 0.0) throw NumericalError("chirp_self_ambiguity_oracle: degenerate origin value");
    const double env = std::exp(-0.5 * kPi * kPi * nu * nu / aB2);
    const double tc = params.start + params.duration / 2.0;
    return env * (line_integral(tau, nu) / raw0) *
           std::polar(1.0, kPi * nu * tau - kTwoPi * nu * tc);
}

DDPatch pulsone_self_ambiguity_patch(const GaussianFilterParams& filter, const DDGrid& grid, int n, int m) {
    const DDPatch w = gaussian_filter_taps(filter, grid);
    const int hk = (w.nk - 1) / 2, hl = (w.nl - 1) / 2;
    const int kc = n * grid.pm(), lc = m * grid.qn();
    DDPatch g(kc - hk, lc - hl, w.nk, w.nl, grid.dtau(), grid.dnu());
    const double m_nu_p = m * grid.nu_p();
    for (int k = g.k0; k < g.k0 + g.nk; ++k) {
        const double tau = k * grid.dtau();
        for (int l = g.l0; l < g.l0 + g.nl; ++l) {
            const double nu = l * grid.dnu();
            g.at(k, l) = std::polar(1.0, kTwoPi * m_nu_p * tau) *
                         filter.w_mf(tau - n * grid.tau_p, nu - m * grid.nu_p());
        }
    }
    return twisted_convolve(w, g);
}

cplx pulsone_self_ambiguity_oracle(const GaussianFilterParams& filter, const DDGrid& grid, int n, int m,
                                   double tau, double nu) {
    const DDPatch p = pulsone_self_ambiguity_patch(filter, grid, n, m);
    const int k = static_cast<int>(std::llround(tau / grid.dtau()));
    const int l = static_cast<int>(std::llround(nu / grid.dnu()));
    return p.value_or_zero(k, l);
}

double moyal_volume(const AmbiguitySurface& surface) {
    double acc = 0.0;
    for (const cplx& v : surface.patch.v) acc += std::norm(v);
    return acc * surface.patch.dtau * surface.patch.dnu;
}

void surface_to_csv(const AmbiguitySurface& surface, std::ostream& os) {
    os << "tau_s,nu_hz,re,im,abs\n";
    os.precision(12);
    const DDPatch& p = surface.patch;
    for (int k = p.k0; k < p.k0 + p.nk; ++k)
        for (int l = p.l0; l < p.l0 + p.nl; ++l) {
            const cplx v = p.at(k, l);
            os << k * p.dtau << ',' << l * p.dnu << ',' << v.real() << ',' << v.imag() << ','
               << std::abs(v) << '\n';
        }
}

}  // namespace ddr
