#pragma once

// Test-side oracles, independent of the library's root-finding path:
// Durand-Kerner simultaneous iteration, bisection, quadrature and small
// statistics helpers.  Everything here is deterministic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

#include "stochnewton/markov.hpp"
#include "stochnewton/rng.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline cplx horner(const std::vector<cplx>& coeffs, cplx z) {
    cplx acc = coeffs.back();
    for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

// Durand-Kerner simultaneous root iteration on ascending coefficients.
inline std::vector<cplx> durand_kerner(std::vector<cplx> coeffs,
                                       int iters = 500) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    for (auto& c : coeffs) c /= coeffs.back();
    std::vector<cplx> roots(n);
    cplx seed(0.4, 0.9);
    cplx p = 1.0;
    for (int i = 0; i < n; ++i) {
        roots[i] = p;
        p *= seed;
    }
    for (int it = 0; it < iters; ++it) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            cplx dr = horner(coeffs, roots[i]) / denom;
            roots[i] -= dr;
            worst = std::max(worst, std::abs(dr));
        }
        if (worst < 1e-14) break;
    }
    return roots;
}

inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (f(lo) * f(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Midpoint quadrature of f over the area-uniform disk |w - c| <= r.
inline double disk_quadrature(const std::function<double(cplx)>& f, cplx c,
                              double r, int n_rad = 400, int n_ang = 400) {
    double sum = 0.0;
    for (int i = 0; i < n_rad; ++i) {
        // equal-area radial bands
        double u = (i + 0.5) / n_rad;
        double rho = r * std::sqrt(u);
        for (int j = 0; j < n_ang; ++j) {
            double th = 2.0 * std::numbers::pi * (j + 0.5) / n_ang;
            sum += f(c + std::polar(rho, th));
        }
    }
    return sum / (static_cast<double>(n_rad) * n_ang);
}

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
};

inline Moments moments(const std::vector<double>& xs) {
    Moments m;
    if (xs.empty()) return m;
    double s = 0.0;
    for (double x : xs) s += x;
    m.mean = s / xs.size();
    double v = 0.0;
    for (double x : xs) v += (x - m.mean) * (x - m.mean);
    m.sd = xs.size() > 1 ? std::sqrt(v / (xs.size() - 1)) : 0.0;
    m.se = m.sd / std::sqrt(static_cast<double>(xs.size()));
    return m;
}

// Frozen reference values (computed with the long-double oracles above).
inline constexpr double kHurleyRealRoot = -1.7692923542386314;
inline constexpr double kHurleyPairRe = 0.8846461771193157;
inline constexpr double kHurleyPairIm = 0.5897428050222055;
inline constexpr double kChiSimpleDisk075 = -0.7876820724517809;
inline constexpr double kHalfLog3 = 0.5493061443340549;
inline constexpr double kChiIbMix = -0.1961658506023452;

// Brute-force Markov reference: boolean reachability for classes, return
// times of boolean matrix powers for periods, and lazy-chain power
// iteration for stationary vectors.  Deliberately avoids the library's
// BFS/gcd and Gaussian elimination routes.
struct BruteChain {
    std::vector<std::vector<double>> p;
    std::vector<std::vector<char>> reach;

    explicit BruteChain(const stochnewton::LabeledChain& c) {
        int n = c.state_count();
        p.assign(n, std::vector<double>(n, 0.0));
        for (int j = 0; j < c.label_count(); ++j)
            for (int s = 0; s < n; ++s)
                p[s][c.label_maps[j][s]] += c.label_probs[j];
        reach.assign(n, std::vector<char>(n, 0));
        for (int s = 0; s < n; ++s) reach[s][s] = 1;
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t)
                if (p[s][t] > 0) reach[s][t] = 1;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
    }

    std::vector<std::vector<int>> closed_classes() const {
        int n = static_cast<int>(p.size());
        std::vector<char> used(n, 0);
        std::vector<std::vector<int>> out;
        for (int s = 0; s < n; ++s) {
            if (used[s]) continue;
            std::vector<int> cls;
            for (int t = 0; t < n; ++t)
                if (reach[s][t] && reach[t][s]) cls.push_back(t);
            if (*std::min_element(cls.begin(), cls.end()) != s) continue;
            bool closed = true;
            for (int u : cls) {
                used[u] = 1;
                for (int t = 0; t < n; ++t)
                    if (p[u][t] > 0 && !(reach[s][t] && reach[t][s]))
                        closed = false;
            }
            if (closed) out.push_back(cls);
        }
        return out;
    }

    int period_of(const std::vector<int>& cls) const {
        int n = static_cast<int>(p.size());
        std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i][j] = p[i][j] > 0;
        std::vector<std::vector<char>> cur = a;
        int g = 0;
        int base = cls[0];
        for (int step = 1; step <= 2 * n * n + 2; ++step) {
            if (cur[base][base]) g = std::gcd(g, step);
            std::vector<std::vector<char>> nxt(n, std::vector<char>(n, 0));
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    if (cur[i][k])
                        for (int j = 0; j < n; ++j)
                            if (a[k][j]) nxt[i][j] = 1;
            cur = std::move(nxt);
        }
        return std::max(g, 1);
    }

    std::vector<double> stationary_of(const std::vector<int>& cls) const {
        int k = static_cast<int>(cls.size());
        std::vector<std::vector<double>> q(k, std::vector<double>(k, 0.0));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                q[i][j] = 0.5 * p[cls[i]][cls[j]] + (i == j ? 0.5 : 0.0);
        std::vector<double> v(k, 1.0 / k), nxt(k);
        for (int it = 0; it < 4000; ++it) {
            for (int j = 0; j < k; ++j) {
                double s = 0.0;
                for (int i = 0; i < k; ++i) s += v[i] * q[i][j];
                nxt[j] = s;
            }
            v.swap(nxt);
        }
        return v;
    }

    // Cyclic classes as residues of hitting times from the smallest state,
    // read off explicit boolean matrix powers.
    std::vector<std::vector<int>> cyclic_classes_of(const std::vector<int>& cls,
                                                    int period) const {
        int n = static_cast<int>(p.size());
        std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i][j] = p[i][j] > 0;
        std::vector<std::vector<char>> cur = a;
        std::vector<int> residue(n, -1);
        int base = cls[0];
        residue[base] = 0;
        for (int step = 1; step <= 2 * n * n + 2; ++step) {
            for (int s : cls)
                if (cur[base][s] && residue[s] < 0) residue[s] = step % period;
            std::vector<std::vector<char>> nxt(n, std::vector<char>(n, 0));
            for (int i = 0; i < n; ++i)
                for (int k2 = 0; k2 < n; ++k2)
                    if (cur[i][k2])
                        for (int j = 0; j < n; ++j)
                            if (a[k2][j]) nxt[i][j] = 1;
            cur = std::move(nxt);
        }
        std::vector<std::vector<int>> classes(period);
        for (int s : cls) classes[residue[s]].push_back(s);
        for (auto& c : classes) std::sort(c.begin(), c.end());
        return classes;
    }
};

// Random labeled chain with 2..8 states and 1..4 labels, deterministic in
// the trial index.
inline stochnewton::LabeledChain random_labeled_chain(int trial,
                                                      std::uint64_t key = 301) {
    stochnewton::LabeledChain c;
    int n = 2 + static_cast<int>(stochnewton::rng::word(key, trial, 0, 0, 0) % 7);
    int L = 1 + static_cast<int>(stochnewton::rng::word(key, trial, 0, 0, 1) % 4);
    double total = 0.0;
    for (int j = 0; j < L; ++j) {
        double w = 0.1 + stochnewton::rng::uniform01(key, trial, 1, j, 0);
        c.label_probs.push_back(w);
        total += w;
    }
    for (double& w : c.label_probs) w /= total;
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < c.label_probs.size(); ++j)
        s += c.label_probs[j];
    c.label_probs.back() = 1.0 - s;
    for (int j = 0; j < L; ++j) {
        std::vector<int> map(n);
        for (int st = 0; st < n; ++st)
            map[st] =
                static_cast<int>(stochnewton::rng::word(key, trial, 2, j, st) % n);
        c.label_maps.push_back(std::move(map));
    }
    return c;
}

}  // namespace oracle
