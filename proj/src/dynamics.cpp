#include "stochnewton/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochnewton/errors.hpp"
#include "stochnewton/rng.hpp"

namespace stochnewton {

namespace {

constexpr double kSnapTolerance = 1e-6;
constexpr long kCycleBudget = 200000;     // DFS work / cycle count cap
constexpr long kAssignmentBudget = 1000000;
constexpr int kMaxSetPoints = 24;

int snap_to_state(const std::vector<SphericalPoint>& states, SphericalPoint y) {
    int best = -1;
    double best_d = kSnapTolerance;
    for (std::size_t i = 0; i < states.size(); ++i) {
        double d = chordal_distance(states[i], y);
        if (d <= best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

double atom_norm(const GeneratorFamily& family, const GeneratorAtom& a,
                 SphericalPoint z) {
    return family.sphere_norm(a.branch, a.lambda, z);
}

}  // namespace

const char* to_string(SetClassification c) {
    switch (c) {
        case SetClassification::Attracting: return "attracting";
        case SetClassification::Expanding: return "expanding";
        case SetClassification::Mixed: return "mixed";
        case SetClassification::SuperattractingPresent: return "superattracting";
    }
    return "?";
}

const char* to_string(QuadraticType t) {
    switch (t) {
        case QuadraticType::Ia: return "Ia";
        case QuadraticType::Ib: return "Ib";
        case QuadraticType::Ic: return "Ic";
    }
    return "?";
}

std::vector<GeneratorAtom> atoms_from_measure(const LambdaMeasure& tau) {
    if (tau.kind() != LambdaMeasure::Kind::FiniteSupport)
        throw BadConfig("atoms_from_measure needs a finite-support measure");
    std::vector<GeneratorAtom> atoms;
    for (const auto& a : tau.atoms())
        atoms.push_back(GeneratorAtom{0, a.lambda, a.prob});
    return atoms;
}

SetClassification classify_minimal_set(const GeneratorFamily& family,
                                       const std::vector<GeneratorAtom>& atoms,
                                       const std::vector<SphericalPoint>& set_points,
                                       bool* sampled_fallback) {
    if (sampled_fallback) *sampled_fallback = false;
    const int k = static_cast<int>(set_points.size());

    // A zero derivative anywhere on the set dominates every cycle product.
    for (const auto& a : atoms)
        for (const auto& pt : set_points)
            if (atom_norm(family, a, pt) == 0.0)
                return SetClassification::SuperattractingPresent;

    // Labeled edges u -> v with per-label spherical norms at u.
    std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
    std::vector<std::vector<std::vector<double>>> edge_norms(
        k, std::vector<std::vector<double>>(k));
    for (int u = 0; u < k; ++u)
        for (const auto& a : atoms) {
            SphericalPoint y = family.apply(a.branch, a.lambda, set_points[u]);
            int v = snap_to_state(set_points, y);
            if (v < 0) continue;  // leaves the set; not a loop contribution
            adj[u][v] = 1;
            edge_norms[u][v].push_back(atom_norm(family, a, set_points[u]));
        }

    std::vector<int> all(k);
    for (int i = 0; i < k; ++i) all[i] = i;

    bool scan_ok = k <= kMaxSetPoints;
    bool observed = false;
    double sup = 0.0, inf = std::numeric_limits<double>::infinity();
    if (scan_ok) {
        std::vector<std::vector<int>> cycles;
        scan_ok = enumerate_simple_cycles(adj, all, kCycleBudget, cycles);
        if (scan_ok) {
            long assignments = 0;
            for (const auto& cyc : cycles) {
                const int len = static_cast<int>(cyc.size());
                // enumerate label choices per edge of the cycle
                std::vector<int> choice(len, 0);
                auto norms_at = [&](int e) -> const std::vector<double>& {
                    int u = cyc[e], v = cyc[(e + 1) % len];
                    return edge_norms[u][v];
                };
                bool done = false;
                while (!done) {
                    double prod = 1.0;
                    for (int e = 0; e < len; ++e) prod *= norms_at(e)[choice[e]];
                    sup = std::max(sup, prod);
                    inf = std::min(inf, prod);
                    observed = true;
                    if (++assignments > kAssignmentBudget) {
                        scan_ok = false;
                        done = true;
                        break;
                    }
                    int e = 0;
                    while (e < len) {
                        if (++choice[e] < static_cast<int>(norms_at(e).size())) break;
                        choice[e] = 0;
                        ++e;
                    }
                    if (e == len) done = true;
                }
                if (!scan_ok) break;
            }
        }
    }

    if (!scan_ok) {
        // Monte Carlo multiplier sampling along random return words.
        if (sampled_fallback) *sampled_fallback = true;
        sup = 0.0;
        inf = std::numeric_limits<double>::infinity();
        observed = false;
        const int kWords = 20000;
        for (int w = 0; w < kWords; ++w) {
            int s = static_cast<int>(rng::word(77, w, 0, 0, 0) % k);
            int v = s;
            double prod = 1.0;
            for (int step = 1; step <= 4 * k; ++step) {
                double u01 = rng::uniform01(77, w, 1, step, 0);
                double acc = 0.0;
                const GeneratorAtom* pick = &atoms.back();
                for (const auto& a : atoms) {
                    acc += a.prob;
                    if (u01 < acc) { pick = &a; break; }
                }
                prod *= atom_norm(family, *pick, set_points[v]);
                SphericalPoint y = family.apply(pick->branch, pick->lambda, set_points[v]);
                int nxt = snap_to_state(set_points, y);
                if (nxt < 0) break;
                v = nxt;
                if (v == s) {
                    sup = std::max(sup, prod);
                    inf = std::min(inf, prod);
                    observed = true;
                    break;
                }
            }
        }
    }

    if (!observed) return SetClassification::Mixed;
    if (sup < 1.0) return SetClassification::Attracting;
    if (inf > 1.0) return SetClassification::Expanding;
    return SetClassification::Mixed;
}

std::vector<MinimalSetReport> markov_decompose(
    const GeneratorFamily& family, const std::vector<GeneratorAtom>& atoms) {
    if (atoms.empty()) throw BadConfig("markov_decompose needs atoms");
    double psum = 0.0;
    for (const auto& a : atoms) psum += a.prob;
    if (std::abs(psum - 1.0) > 1e-12)
        throw BadConfig("atom probabilities must sum to 1");

    std::vector<SphericalPoint> states = family.invariant_points();

    LabeledChain chain;
    chain.label_probs.reserve(atoms.size());
    for (const auto& a : atoms) chain.label_probs.push_back(a.prob);
    chain.label_maps.assign(atoms.size(),
                            std::vector<int>(states.size(), -1));
    for (std::size_t j = 0; j < atoms.size(); ++j)
        for (std::size_t s = 0; s < states.size(); ++s) {
            SphericalPoint y =
                family.apply(atoms[j].branch, atoms[j].lambda, states[s]);
            int t = snap_to_state(states, y);
            if (t < 0)
                throw NoFiniteInvariantSet(
                    "generator image of an invariant point left the point set");
            chain.label_maps[j][s] = t;
        }

    ChainDecomposition dec = decompose_chain(chain);

    std::vector<MinimalSetReport> reports;
    for (const ChainClass& cls : dec.closed_classes) {
        MinimalSetReport rep;
        std::vector<int> global_to_local(states.size(), -1);
        for (std::size_t i = 0; i < cls.states.size(); ++i) {
            global_to_local[cls.states[i]] = static_cast<int>(i);
            rep.points.push_back(states[cls.states[i]]);
        }
        rep.period = cls.period;
        for (const auto& cc : cls.cyclic_classes) {
            std::vector<int> local;
            for (int s : cc) local.push_back(global_to_local[s]);
            rep.cyclic_classes.push_back(std::move(local));
        }
        rep.stationary_measures = cls.stationary;

        // chi(tau, L) against the canonical measure (1/p) sum_k omega_k.
        double chi = 0.0;
        bool minus_inf = false;
        for (int kcl = 0; kcl < rep.period && !minus_inf; ++kcl) {
            const auto& cc = rep.cyclic_classes[kcl];
            const auto& om = rep.stationary_measures[kcl];
            for (std::size_t i = 0; i < cc.size() && !minus_inf; ++i) {
                if (om[i] == 0.0) continue;
                const SphericalPoint& pt = rep.points[cc[i]];
                for (const auto& a : atoms) {
                    double nrm = atom_norm(family, a, pt);
                    if (nrm == 0.0) {
                        minus_inf = true;
                        break;
                    }
                    chi += (om[i] / rep.period) * a.prob * std::log(nrm);
                }
            }
        }
        rep.lyapunov.minus_infinity = minus_inf;
        rep.lyapunov.value = minus_inf ? -std::numeric_limits<double>::infinity() : chi;
        rep.lyapunov.exact = true;

        rep.classification = classify_minimal_set(family, atoms, rep.points,
                                                  &rep.multiplier_scan_sampled);
        reports.push_back(std::move(rep));
    }
    return reports;
}

Lyapunov lyapunov_fixed_point(const LambdaMeasure& tau,
                              const GeneratorFamily& family, SphericalPoint x,
                              int multiplicity) {
    const bool finite_tau = tau.kind() == LambdaMeasure::Kind::FiniteSupport;
    if (!finite_tau && family.branch_count() > 1)
        throw BadConfig("continuous measures need a single-branch family");

    // Fixed-point check over the support (atoms, or probes of the disk).
    std::vector<GeneratorAtom> probes;
    if (finite_tau) {
        probes = atoms_from_measure(tau);
    } else {
        cplx c = tau.center();
        double r = tau.radius();
        for (cplx d : {cplx(0, 0), cplx(r, 0), cplx(-r, 0), cplx(0, r), cplx(0, -r)})
            probes.push_back(GeneratorAtom{0, c + d, 0.2});
    }
    if (!family.is_common_fixed_point(x, probes))
        throw NotFixedPoint("point is not fixed by the family over the support");

    Lyapunov out;

    if (family.kind() == GeneratorFamily::Kind::RelaxedNewton) {
        const Polynomial& g = family.polynomial();
        int d = g.degree();
        if (x.infinite) {
            // |1 - lambda/d|^{-1} integrates to log d minus the potential at d.
            if (!finite_tau) {
                out.value = std::log(static_cast<double>(d)) -
                            tau.log_potential(cplx(static_cast<double>(d), 0.0));
                return out;
            }
        } else if (!finite_tau) {
            int m = multiplicity > 0 ? multiplicity : estimate_multiplicity(g, x.value);
            out.value = tau.log_potential(cplx(static_cast<double>(m), 0.0)) -
                        std::log(static_cast<double>(m));
            return out;
        }
    }

    if (family.kind() == GeneratorFamily::Kind::Quadratic && !finite_tau &&
        !x.infinite && std::abs(x.value) < 1e-12) {
        // Derivative at 0 is lambda itself.
        out.value = tau.log_potential(cplx(0.0, 0.0));
        return out;
    }

    if (finite_tau) {
        double chi = 0.0;
        for (const auto& a : atoms_from_measure(tau)) {
            double nrm = family.sphere_norm(a.branch, a.lambda, x);
            if (nrm == 0.0) {
                out.minus_infinity = true;
                out.value = -std::numeric_limits<double>::infinity();
                return out;
            }
            chi += a.prob * std::log(nrm);
        }
        out.value = chi;
        return out;
    }

    // Monte Carlo fallback for continuous measures without a closed form.
    const long n = 1000000;
    SampleStream stream(tau, 0);
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        double nrm = family.sphere_norm(0, stream.next(), x);
        if (nrm == 0.0) {
            out.minus_infinity = true;
            out.value = -std::numeric_limits<double>::infinity();
            return out;
        }
        double v = std::log(nrm);
        sum += v;
        sumsq += v * v;
    }
    out.value = sum / n;
    out.std_error = std::sqrt(std::max(0.0, sumsq / n - out.value * out.value) / n);
    out.exact = false;
    return out;
}

QuadraticClassification classify_quadratic_measure(const LambdaMeasure& tau) {
    QuadraticClassification out;
    GeneratorFamily fam = GeneratorFamily::quadratic();

    // Exponent at the fixed point 0 (the derivative there is lambda).
    if (tau.kind() == LambdaMeasure::Kind::FiniteSupport) {
        double chi = 0.0;
        bool minus_inf = false;
        for (const auto& a : tau.atoms()) {
            if (std::abs(a.lambda) == 0.0) {
                minus_inf = true;
                break;
            }
            chi += a.prob * std::log(std::abs(a.lambda));
        }
        out.chi.minus_infinity = minus_inf;
        out.chi.value = minus_inf ? -std::numeric_limits<double>::infinity() : chi;
    } else {
        out.chi.value = tau.log_potential(cplx(0.0, 0.0));
    }

    // Monte Carlo probe for an attractor separated from both 0 and infinity.
    // The first start is the family's critical point 1/2: an attracting
    // cycle of any single generator pulls in its critical orbit, so the
    // deterministic type II examples are caught without luck.
    const int kStarts = 50, kOrbitsPerStart = 20, kSteps = 600, kTail = 60;
    int interior_hits = 0;
    for (int s = 0; s < kStarts; ++s) {
        cplx z0 = s == 0 ? cplx(0.5, 0.0)
                         : cplx(4.0 * rng::uniform01(1234, s, 0, 0, 0) - 2.0,
                                4.0 * rng::uniform01(1234, s, 0, 0, 1) - 2.0);
        for (int o = 0; o < kOrbitsPerStart; ++o) {
            SphericalPoint z = SphericalPoint::at(z0);
            SampleStream stream(tau, static_cast<std::uint64_t>(s) * 1000 + o);
            double min_sep = 2.0;
            bool tail_ok = true;
            for (int n = 0; n < kSteps; ++n) {
                z = fam.apply(0, stream.next(), z);
                if (n >= kSteps - kTail) {
                    double d0 = chordal_distance(z, SphericalPoint::at(cplx(0, 0)));
                    double dinf = chordal_distance(z, SphericalPoint::inf());
                    min_sep = std::min({min_sep, d0, dinf});
                    if (z.infinite) tail_ok = false;
                }
            }
            if (tail_ok && min_sep > 0.05) ++interior_hits;
        }
    }
    out.ii_candidate = interior_hits > 0;

    if (tau.sup_abs() < 1.0) {
        out.type = QuadraticType::Ia;  // every generator contracts at 0
        return out;
    }
    double se = out.chi.std_error;
    if (!out.chi.minus_infinity && std::abs(out.chi.value) <= std::max(3.0 * se, 1e-15))
        throw ZeroLyapunov("exponent at 0 indistinguishable from zero");
    out.type = (out.chi.minus_infinity || out.chi.value < 0.0) ? QuadraticType::Ib
                                                               : QuadraticType::Ic;
    return out;
}

}  // namespace stochnewton
