#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddr {

using cplx = std::complex<double>;

/// Invalid grid / parameter combinations (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failures such as non-converging quadrature (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kSpeedOfLight = 299792458.0;

/**
 * Sampling geometry of the discrete delay-Doppler grid.
 *
 * The delay period tau_p fixes the Doppler period nu_p = 1/tau_p. The
 * bandwidth B and duration T must satisfy M = B*tau_p and N = T/tau_p
 * integer, so the fundamental domain [0,tau_p) x [0,nu_p) carries P*M
 * delay bins of width 1/(P*B) and Q*N Doppler bins of width 1/(Q*T).
 */
struct DDGrid {
    double tau_p = 0.0;
    double B = 0.0;
    double T = 0.0;
    int P = 2;
    int Q = 2;
    int M = 0;
    int N = 0;

    DDGrid() = default;

    DDGrid(double tau_p_, double B_, double T_, int P_ = 2, int Q_ = 2)
        : tau_p(tau_p_), B(B_), T(T_), P(P_), Q(Q_) {
        if (tau_p <= 0 || B <= 0 || T <= 0 || P < 1 || Q < 1)
            throw ConfigError("DDGrid: tau_p, B, T must be positive and P, Q >= 1");
        M = round_to_int(B * tau_p, "B*tau_p");
        N = round_to_int(T / tau_p, "T*nu_p");
        if (M < 1 || N < 1) throw ConfigError("DDGrid: M and N must be >= 1");
    }

    double nu_p() const { return 1.0 / tau_p; }
    double sample_rate() const { return static_cast<double>(P) * B; }
    double dtau() const { return 1.0 / (P * B); }
    double dnu() const { return 1.0 / (Q * T); }
    int pm() const { return P * M; }
    int qn() const { return Q * N; }
    /// Samples covering [-T/2, T/2).
    int num_samples() const { return P * M * N; }

    bool same_as(const DDGrid& o) const {
        return P == o.P && Q == o.Q && M == o.M && N == o.N &&
               close(tau_p, o.tau_p) && close(B, o.B) && close(T, o.T);
    }

private:
    static bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

    static int round_to_int(double x, const char* what) {
        double r = std::round(x);
        if (std::abs(x - r) > 1e-6 * std::max(1.0, std::abs(x)))
            throw ConfigError(std::string("DDGrid: ") + what + " = " + std::to_string(x) + " is not an integer");
        return static_cast<int>(r);
    }
};

/// Complex baseband samples at rate P*B; sample 0 sits at t_start.
struct TimeSignal {
    std::vector<cplx> samples;
    double sample_rate = 0.0;
    double t_start = 0.0;

    double dt() const { return 1.0 / sample_rate; }
    double time_at(std::size_t i) const { return t_start + static_cast<double>(i) / sample_rate; }

    /// sum |s|^2 / sample_rate, the Riemann integral of |x(t)|^2.
    double energy() const {
        double e = 0.0;
        for (const cplx& s : samples) e += std::norm(s);
        return e / sample_rate;
    }

    void scale(double c) {
        for (cplx& s : samples) s *= c;
    }
};

/**
 * Quasi-periodic DD-domain samples on the fundamental domain grid.
 * values is row-major by delay bin: values[k*QN + l], k in [0,PM), l in [0,QN).
 * Off-domain values follow the quasi-periodicity phase law (see
 * quasi_periodic_value in zak.hpp).
 */
struct DDSignal {
    DDGrid grid;
    std::vector<cplx> values;

    DDSignal() = default;
    explicit DDSignal(const DDGrid& g) : grid(g), values(static_cast<std::size_t>(g.pm()) * g.qn()) {}

    cplx& at(int k, int l) { return values[static_cast<std::size_t>(k) * grid.qn() + l]; }
    const cplx& at(int k, int l) const { return values[static_cast<std::size_t>(k) * grid.qn() + l]; }
};

}  // namespace ddr
