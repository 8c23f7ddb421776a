#include "ddr/twisted.hpp"

#include <cmath>
#include <numbers>

#include "ddr/zak.hpp"

namespace ddr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_commensurate(double da, double db, const char* what) {
    if (std::abs(da - db) > 1e-9 * std::max(std::abs(da), std::abs(db)))
        throw ConfigError(std::string("twisted_convolve: ") + what + " bin widths differ");
}

}  // namespace

double DDPatch::peak_abs() const {
    double p = 0.0;
    for (const cplx& x : v) p = std::max(p, std::abs(x));
    return p;
}

DDPatch twisted_convolve(const DDPatch& a, const DDPatch& b) {
    check_commensurate(a.dtau, b.dtau, "delay");
    check_commensurate(a.dnu, b.dnu, "Doppler");

    DDPatch out(a.k0 + b.k0, a.l0 + b.l0, a.nk + b.nk - 1, a.nl + b.nl - 1, a.dtau, a.dnu);
    const double cell = a.dtau * a.dnu;
    for (int ka = a.k0; ka < a.k0 + a.nk; ++ka) {
        for (int la = a.l0; la < a.l0 + a.nl; ++la) {
            cplx av = a.at(ka, la);
            if (av == cplx(0.0)) continue;
            av *= cell;
            const double nu_a = la * a.dnu;
            for (int kb = b.k0; kb < b.k0 + b.nk; ++kb) {
                const cplx twist = std::polar(1.0, kTwoPi * nu_a * (kb * a.dtau));
                const cplx f = av * twist;
                for (int lb = b.l0; lb < b.l0 + b.nl; ++lb)
                    out.at(ka + kb, la + lb) += f * b.at(kb, lb);
            }
        }
    }
    return out;
}

DDSignal twisted_convolve(const DDPatch& a, const DDSignal& b) {
    const DDGrid& g = b.grid;
    check_commensurate(a.dtau, g.dtau(), "delay");
    check_commensurate(a.dnu, g.dnu(), "Doppler");

    DDSignal out(g);
    const double cell = a.dtau * a.dnu;
    for (int ka = a.k0; ka < a.k0 + a.nk; ++ka) {
        for (int la = a.l0; la < a.l0 + a.nl; ++la) {
            cplx av = a.at(ka, la);
            if (av == cplx(0.0)) continue;
            av *= cell;
            const double nu_a = la * a.dnu;
            for (int k = 0; k < g.pm(); ++k) {
                const cplx f = av * std::polar(1.0, kTwoPi * nu_a * ((k - ka) * a.dtau));
                for (int l = 0; l < g.qn(); ++l)
                    out.at(k, l) += f * quasi_periodic_value(b, k - ka, l - la);
            }
        }
    }
    return out;
}

DDPatch dd_delta(int k, int l, double dtau, double dnu) {
    DDPatch d(k, l, 1, 1, dtau, dnu);
    d.v[0] = 1.0 / (dtau * dnu);
    return d;
}

}  // namespace ddr
