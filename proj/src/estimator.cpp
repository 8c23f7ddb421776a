#include "ddr/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddr {

namespace {

struct Peak {
    int k, l;
    double mag;
    cplx val;
};

TargetEstimate to_estimate(const Peak& p, const DDPatch& patch, double energy) {
    TargetEstimate e;
    e.tau_hat = p.k * patch.dtau;
    e.nu_hat = p.l * patch.dnu;
    e.peak_mag = p.mag;
    e.h_hat = energy > 0.0 ? p.val / energy : cplx(0.0);
    return e;
}

}  // namespace

TargetEstimate detect_single(const AmbiguitySurface& surface) {
    const DDPatch& p = surface.patch;
    Peak best{0, 0, 0.0, cplx(0.0)};
    bool found = false;
    for (int k = p.k0; k < p.k0 + p.nk; ++k) {
        for (int l = p.l0; l < p.l0 + p.nl; ++l) {
            const double mag = std::abs(p.at(k, l));
            if (mag == 0.0) continue;
            bool take = false;
            if (!found || mag > best.mag * (1.0 + 1e-12)) {
                take = true;
            } else if (mag >= best.mag * (1.0 - 1e-12)) {
                take = k < best.k || (k == best.k && std::abs(l) < std::abs(best.l));
            }
            if (take) {
                best = {k, l, mag, p.at(k, l)};
                found = true;
            }
        }
    }
    if (!found) throw NumericalError("detect_single: all-zero surface");
    return to_estimate(best, p, surface.probe_energy);
}

std::vector<TargetEstimate> detect_peaks(const AmbiguitySurface& surface, int max_count,
                                         double rel_threshold) {
    if (rel_threshold <= 0.0 || rel_threshold >= 1.0)
        throw ConfigError("detect_peaks: rel_threshold must be in (0,1)");
    const DDPatch& p = surface.patch;
    const double gmax = p.peak_abs();
    if (gmax == 0.0 || max_count <= 0) return {};
    const double thr = rel_threshold * gmax;

    std::vector<Peak> cand;
    for (int k = p.k0; k < p.k0 + p.nk; ++k) {
        for (int l = p.l0; l < p.l0 + p.nl; ++l) {
            const double mag = std::abs(p.at(k, l));
            if (mag < thr) continue;
            bool is_max = true;
            for (int dk = -1; dk <= 1 && is_max; ++dk)
                for (int dl = -1; dl <= 1; ++dl) {
                    if (dk == 0 && dl == 0) continue;
                    if (std::abs(p.value_or_zero(k + dk, l + dl)) > mag) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) cand.push_back({k, l, mag, p.at(k, l)});
        }
    }
    std::stable_sort(cand.begin(), cand.end(), [](const Peak& a, const Peak& b) { return a.mag > b.mag; });

    std::vector<Peak> accepted;
    for (const Peak& c : cand) {
        bool clear = true;
        for (const Peak& a : accepted)
            if (std::abs(c.k - a.k) <= surface.res_k && std::abs(c.l - a.l) <= surface.res_l) {
                clear = false;
                break;
            }
        if (!clear) continue;
        accepted.push_back(c);
        if (static_cast<int>(accepted.size()) >= max_count) break;
    }

    std::vector<TargetEstimate> out;
    out.reserve(accepted.size());
    for (const Peak& a : accepted) out.push_back(to_estimate(a, p, surface.probe_energy));
    return out;
}

namespace {

struct Line {
    double intercept;  // c in nu = slope*tau + c
    double mag;        // strongest ridge sample supporting the line
    double weight;
};

// Ridge samples: per delay column, local Doppler maxima above threshold;
// each sample votes for the line through it. Samples then cluster by
// intercept.
std::vector<Line> extract_lines(const AmbiguitySurface& s, double slope, double abs_threshold) {
    const DDPatch& p = s.patch;
    const double gmax = p.peak_abs();
    const double thr = std::max(abs_threshold, 0.05 * gmax);

    struct Sample {
        double c, mag;
    };
    std::vector<Sample> samples;
    for (int k = p.k0; k < p.k0 + p.nk; ++k) {
        const double tau = k * p.dtau;
        for (int l = p.l0; l < p.l0 + p.nl; ++l) {
            const double mag = std::abs(p.at(k, l));
            if (mag < thr) continue;
            const double up = std::abs(p.value_or_zero(k, l + 1));
            const double dn = std::abs(p.value_or_zero(k, l - 1));
            if (mag < dn || mag < up) continue;
            samples.push_back({l * p.dnu - slope * tau, mag});
        }
    }
    if (samples.empty()) return {};
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.c < b.c; });

    // Hough-style vote: histogram the intercepts (bin = one grid step of
    // c), take local maxima of the vote mass, and refine each as the
    // weighted mean of nearby samples. Gap-based clustering is too
    // fragile here: stray sidelobe maxima bridge the gaps between bands.
    const double bin = std::max(std::abs(slope) * p.dtau, p.dnu);
    const double c0 = samples.front().c;
    const int nb = static_cast<int>(std::floor((samples.back().c - c0) / bin)) + 1;
    std::vector<double> votes(static_cast<std::size_t>(nb), 0.0);
    for (const Sample& sm : samples) {
        const int b = std::min(nb - 1, static_cast<int>(std::floor((sm.c - c0) / bin)));
        votes[static_cast<std::size_t>(b)] += sm.mag;
    }
    auto vote_at = [&](int b) { return b >= 0 && b < nb ? votes[static_cast<std::size_t>(b)] : 0.0; };

    std::vector<Line> lines;
    for (int b = 0; b < nb; ++b) {
        const double v = vote_at(b);
        if (v <= 0.0 || v < vote_at(b - 1) || v <= vote_at(b + 1)) continue;
        const double center = c0 + (b + 0.5) * bin;
        double wsum = 0.0, csum = 0.0, mag = 0.0;
        int count = 0;
        for (const Sample& sm : samples) {
            if (std::abs(sm.c - center) > 1.25 * bin) continue;
            wsum += sm.mag;
            csum += sm.mag * sm.c;
            mag = std::max(mag, sm.mag);
            ++count;
        }
        if (count < 3) continue;  // a real band supports many columns
        lines.push_back({csum / wsum, mag, wsum});
    }
    return lines;
}

}  // namespace

std::vector<TargetEstimate> chirp_intersections(const AmbiguitySurface& up, const AmbiguitySurface& down,
                                                double slope_up, double slope_down, int max_count,
                                                double abs_threshold) {
    if (slope_up == slope_down) throw ConfigError("chirp_intersections: slopes must differ");
    const std::vector<Line> lu = extract_lines(up, slope_up, abs_threshold);
    const std::vector<Line> ld = extract_lines(down, slope_down, abs_threshold);

    const DDPatch& p = up.patch;
    const double tau_lo = p.k0 * p.dtau - 0.5 * p.dtau;
    const double tau_hi = (p.k0 + p.nk - 1) * p.dtau + 0.5 * p.dtau;
    const double nu_hi = (p.l0 + p.nl - 1) * p.dnu + 0.5 * p.dnu;
    const double nu_lo = p.l0 * p.dnu - 0.5 * p.dnu;

    std::vector<TargetEstimate> out;
    for (const Line& a : lu) {
        for (const Line& b : ld) {
            const double tau = (b.intercept - a.intercept) / (slope_up - slope_down);
            const double nu = slope_up * tau + a.intercept;
            if (tau < tau_lo || tau > tau_hi || nu < nu_lo || nu > nu_hi) continue;
            TargetEstimate e;
            e.tau_hat = tau;
            e.nu_hat = nu;
            e.peak_mag = std::min(a.mag, b.mag);
            e.h_hat = up.probe_energy > 0.0 ? cplx(e.peak_mag / up.probe_energy, 0.0) : cplx(0.0);
            out.push_back(e);
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const TargetEstimate& a, const TargetEstimate& b) { return a.peak_mag > b.peak_mag; });
    if (static_cast<int>(out.size()) > max_count) out.resize(static_cast<std::size_t>(max_count));
    return out;
}

std::vector<TargetEstimate> ghost_removal(const std::vector<TargetEstimate>& pair1,
                                          const std::vector<TargetEstimate>& pair2,
                                          double tol_tau, double tol_nu) {
    std::vector<bool> used(pair2.size(), false);
    std::vector<TargetEstimate> out;
    for (const TargetEstimate& a : pair1) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pair2.size(); ++j) {
            if (used[j]) continue;
            const double dtau = std::abs(a.tau_hat - pair2[j].tau_hat);
            const double dnu = std::abs(a.nu_hat - pair2[j].nu_hat);
            if (dtau > tol_tau || dnu > tol_nu) continue;
            const double d = dtau / tol_tau + dnu / tol_nu;
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        if (best < 0) continue;
        used[static_cast<std::size_t>(best)] = true;
        TargetEstimate e = a;
        e.tau_hat = 0.5 * (a.tau_hat + pair2[static_cast<std::size_t>(best)].tau_hat);
        e.nu_hat = 0.5 * (a.nu_hat + pair2[static_cast<std::size_t>(best)].nu_hat);
        e.peak_mag = std::min(a.peak_mag, pair2[static_cast<std::size_t>(best)].peak_mag);
        out.push_back(e);
    }
    return out;
}

std::pair<double, double> to_range_velocity(const TargetEstimate& est, double carrier_hz) {
    if (carrier_hz <= 0.0) throw ConfigError("to_range_velocity: carrier must be positive");
    return {kSpeedOfLight * est.tau_hat / 2.0, est.nu_hat * (kSpeedOfLight / carrier_hz) / 2.0};
}

namespace {

// Exhaustive injective truth->estimate assignment; when truths outnumber
// estimates, the surplus truths (skips) reuse their nearest estimate.
double best_assignment(const std::vector<std::vector<double>>& cost, std::size_t ti,
                       std::vector<bool>& used, std::size_t skips_left, std::vector<int>& pick,
                       std::vector<int>& best_pick, double acc, double best) {
    const std::size_t nt = cost.size();
    if (ti == nt) {
        if (acc < best) best_pick = pick;
        return std::min(acc, best);
    }
    if (acc >= best) return best;
    const std::size_t ne = cost[ti].size();
    for (std::size_t j = 0; j < ne; ++j) {
        if (used[j]) continue;
        used[j] = true;
        pick[ti] = static_cast<int>(j);
        best = best_assignment(cost, ti + 1, used, skips_left, pick, best_pick, acc + cost[ti][j], best);
        used[j] = false;
    }
    if (skips_left > 0) {
        std::size_t j_min = 0;
        for (std::size_t j = 1; j < ne; ++j)
            if (cost[ti][j] < cost[ti][j_min]) j_min = j;
        pick[ti] = static_cast<int>(j_min);
        best = best_assignment(cost, ti + 1, used, skips_left - 1, pick, best_pick, acc + cost[ti][j_min], best);
    }
    return best;
}

}  // namespace

RmsResult rms_error(const std::vector<TargetEstimate>& estimates, const RadarScene& truth,
                    double carrier_hz, double B, double T) {
    if (truth.targets.empty()) throw ConfigError("rms_error: empty truth scene");
    RmsResult r;
    if (estimates.empty()) {
        r.missed = true;
        r.range_rmse = std::numeric_limits<double>::quiet_NaN();
        r.velocity_rmse = std::numeric_limits<double>::quiet_NaN();
        return r;
    }

    std::vector<TargetEstimate> est = estimates;
    std::stable_sort(est.begin(), est.end(),
                     [](const TargetEstimate& a, const TargetEstimate& b) { return a.peak_mag > b.peak_mag; });
    if (est.size() > 12) est.resize(12);

    const std::size_t nt = truth.targets.size(), ne = est.size();
    std::vector<std::vector<double>> cost(nt, std::vector<double>(ne));
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < ne; ++j) {
            const double dk = (truth.targets[i].tau - est[j].tau_hat) * B;
            const double dl = (truth.targets[i].nu - est[j].nu_hat) * T;
            cost[i][j] = dk * dk + dl * dl;
        }

    std::vector<bool> used(ne, false);
    std::vector<int> pick(nt, -1), best_pick(nt, -1);
    best_assignment(cost, 0, used, nt > ne ? nt - ne : 0, pick, best_pick,
                    0.0, std::numeric_limits<double>::infinity());

    const double lam = kSpeedOfLight / carrier_hz;
    double se_r = 0.0, se_v = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const TargetEstimate& e = est[static_cast<std::size_t>(best_pick[i])];
        const double er = kSpeedOfLight * (truth.targets[i].tau - e.tau_hat) / 2.0;
        const double ev = (truth.targets[i].nu - e.nu_hat) * lam / 2.0;
        se_r += er * er;
        se_v += ev * ev;
    }
    r.range_rmse = std::sqrt(se_r / static_cast<double>(nt));
    r.velocity_rmse = std::sqrt(se_v / static_cast<double>(nt));
    return r;
}

}  // namespace ddr
