// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Tolerances and thresholds are fixed here, not tunable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "stochnewton/basin.hpp"
#include "stochnewton/dynamics.hpp"
#include "stochnewton/engine.hpp"
#include "stochnewton/errors.hpp"
#include "stochnewton/json_io.hpp"
#include "stochnewton/montecarlo.hpp"

using namespace stochnewton;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail,
            double seconds) {
    std::printf("%s  criterion %2d (%s): %s  [%.2fs]\n", ok ? "PASS" : "FAIL",
                idx, name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::vector<cplx> separated_roots(int deg, std::uint64_t key, int trial,
                                  double radius, double min_sep) {
    std::vector<cplx> roots;
    for (std::uint64_t attempt = 0; static_cast<int>(roots.size()) < deg;
         ++attempt) {
        cplx cand(2.0 * radius * rng::uniform01(key, trial, 1, attempt, 0) - radius,
                  2.0 * radius * rng::uniform01(key, trial, 1, attempt, 1) - radius);
        bool far = true;
        for (cplx r : roots)
            if (std::abs(r - cand) < min_sep) far = false;
        if (far) roots.push_back(cand);
    }
    return roots;
}

// ---------------------------------------------------------------- 1
void criterion_multipliers() {
    Timer t;
    int checked = 0;
    double worst_root = 0.0, worst_inf = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        int deg = 2 + static_cast<int>(rng::word(901, trial, 0, 0, 0) % 6);
        auto roots = separated_roots(deg, 901, trial, 0.8, 0.2);
        // every third polynomial gets a double root
        int mult = 1;
        if (trial % 3 == 0 && deg >= 3) {
            roots[1] = roots[0];
            mult = 2;
        }
        Polynomial g = Polynomial::from_roots(roots);
        SampleStream s(LambdaMeasure::uniform_disk(0.75, 901 + trial), trial);
        cplx lambda = s.next();
        cplx x = roots[0];

        // Richardson-extrapolated central difference: large enough h to sit
        // above the cancellation floor of g near a double root, with the
        // h^2 truncation term eliminated.
        auto nm = [&](cplx z) { return newton_map(g, lambda, z); };
        auto central = [&](double h) { return (nm(x + h) - nm(x - h)) / (2.0 * h); };
        double h = 1e-3;
        cplx fd = (4.0 * central(h / 2) - central(h)) / 3.0;
        cplx expect = 1.0 - lambda / static_cast<double>(mult);
        worst_root = std::max(worst_root, std::abs(fd - expect));

        // spherical norm at infinity via the 1/z chart, numerically
        auto chart = [&](cplx w) { return 1.0 / nm(1.0 / w); };
        auto chart_central = [&](double hh) {
            return (chart(cplx(hh, 0)) - chart(cplx(-hh, 0))) / (2.0 * hh);
        };
        cplx fprime0 = (4.0 * chart_central(h / 2) - chart_central(h)) / 3.0;
        double expect_inf =
            1.0 / std::abs(1.0 - lambda / static_cast<double>(deg));
        worst_inf = std::max(worst_inf, std::abs(std::abs(fprime0) - expect_inf));
        ++checked;
    }
    bool ok = checked == 50 && worst_root < 1e-6 && worst_inf < 1e-8;
    std::ostringstream d;
    d << "50 triples, |fd - (1-lambda/m)| max " << worst_root
      << ", norm-at-inf err max " << worst_inf;
    report(1, "multiplier formulas", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 2
void criterion_lyapunov_mc() {
    Timer t;
    double exact = std::log(0.75) - 0.5;
    auto tau = LambdaMeasure::uniform_disk(0.75, 777);
    SampleStream s(tau, 0);
    const long n = 1000000;
    double sum = 0, sumsq = 0;
    for (long i = 0; i < n; ++i) {
        double v = std::log(std::abs(cplx(1, 0) - s.next()));
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / n;
    double se = std::sqrt(std::max(0.0, sumsq / n - mean * mean) / n);
    bool ok = std::abs(mean - exact) < 3.0 * se &&
              std::abs(exact - oracle::kChiSimpleDisk075) < 1e-12;
    std::ostringstream d;
    d << "closed form " << exact << ", MC " << mean << " (se " << se << ")";
    report(2, "Lyapunov closed form vs Monte Carlo", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 3
void criterion_all_roots() {
    Timer t;
    int pairs = 0, good = 0;
    for (int trial = 0; trial < 20; ++trial) {
        int deg = 3 + static_cast<int>(rng::word(903, trial, 0, 0, 0) % 8);
        auto roots = separated_roots(deg, 903, trial, 0.85, 0.05);
        Polynomial g = Polynomial::from_roots(roots);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            ++pairs;
            auto tau = LambdaMeasure::uniform_disk(0.75, 1000 + seed);
            EngineConfig cfg;
            try {
                auto found = find_all_roots(g, tau, cfg);
                if (static_cast<int>(found.size()) != deg) continue;
                bool all_ok = true;
                std::vector<char> used(deg, 0);
                for (const auto& r : found) {
                    if (r.residual >= 1e-8) all_ok = false;
                    int best = -1;
                    double bd = 1e9;
                    for (int i = 0; i < deg; ++i) {
                        double dd = std::abs(r.value - roots[i]);
                        if (!used[i] && dd < bd) {
                            bd = dd;
                            best = i;
                        }
                    }
                    if (best < 0 || bd > 1e-6) all_ok = false;
                    else used[best] = 1;
                }
                if (all_ok) ++good;
            } catch (const IncompleteFactorization&) {
            }
        }
    }
    bool ok = good >= 199;
    std::ostringstream d;
    d << good << "/" << pairs << " (poly, seed) pairs complete at 1e-8";
    report(3, "almost-sure convergence to all roots", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 4
void criterion_trap() {
    Timer t;
    Polynomial trap = Polynomial::parse("2 - 2z + z^3");
    EngineConfig cfg;
    OrbitOutcome det = deterministic_newton(trap, cplx(0, 0), cfg);
    bool det_ok =
        det.status == OrbitStatus::DetectedCycle && det.cycle_length == 2;

    auto tau = LambdaMeasure::uniform_disk(0.75, 44);
    long converged = 0;
    for (long run = 0; run < 1000; ++run) {
        OrbitOutcome o = run_random_orbit(trap, tau, cplx(0, 0), {}, cfg, run);
        if (o.status == OrbitStatus::ConvergedToRoot) ++converged;
    }
    bool ok = det_ok && converged >= 999;
    std::ostringstream d;
    d << "deterministic cycle length " << det.cycle_length << ", randomized "
      << converged << "/1000";
    report(4, "Hurley trap", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 5
void criterion_rate() {
    Timer t;
    Polynomial g = Polynomial::parse("-1 + z^2");
    auto tau = LambdaMeasure::uniform_disk(0.75, 55);
    EngineConfig cfg;
    cfg.record_trace = true;
    double sum = 0;
    int used = 0;
    std::uint64_t run = 0;
    while (used < 500 && run < 1500) {
        OrbitOutcome o = run_random_orbit(g, tau, cplx(1e5, 0), {}, cfg, run++);
        if (o.status != OrbitStatus::ConvergedToRoot) continue;
        if (o.log_distance_trace.size() < 50) continue;
        sum += empirical_rate(o.log_distance_trace).slope;
        ++used;
    }
    double mean = used > 0 ? sum / used : 0.0;
    bool ok = used == 500 && std::abs(mean - oracle::kChiSimpleDisk075) <= 0.1;
    std::ostringstream d;
    d << "mean tail slope " << mean << " vs chi " << oracle::kChiSimpleDisk075
      << " over " << used << " traces";
    report(5, "empirical rate vs Lyapunov exponent", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 6
void criterion_sum_rule() {
    Timer t;
    bool ok = true;
    double worst = 0.0;
    for (const char* poly : {"-1 + z^2", "2 - 2z + z^3"}) {
        Polynomial g = Polynomial::parse(poly);
        auto tau = LambdaMeasure::uniform_disk(0.75, 66);
        EngineConfig cfg;
        cfg.max_iterations = 5000;
        auto roots = find_all_roots(g, tau, cfg);
        for (int s = 0; s < 25; ++s) {
            cplx z(4.0 * rng::uniform01(906, s, 0, 0, 0) - 2.0,
                   4.0 * rng::uniform01(906, s, 0, 0, 1) - 2.0);
            TEstimate e = estimate_T(g, tau, z, 2000, roots, cfg,
                                     static_cast<std::uint64_t>(s) * 2000);
            double leak = e.escape + e.unresolved;
            worst = std::max(worst, leak);
            if (leak > 0.01) ok = false;
        }
    }
    std::ostringstream d;
    d << "max escape+unresolved over 50 starts = " << worst;
    report(6, "sum rule at desk scale", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 7
void criterion_exceptional_set() {
    Timer t;
    int polys_done = 0;
    long near_runs = 0, near_ok = 0;
    bool exact_all = true;
    for (int trial = 0; polys_done < 10 && trial < 30; ++trial) {
        int deg = 3 + static_cast<int>(rng::word(907, trial, 0, 0, 0) % 4);
        auto roots = separated_roots(deg, 907, trial, 0.8, 0.1);
        Polynomial g = Polynomial::from_roots(roots);
        Polynomial dg = g.derivative();

        // critical points from the independent oracle, polished on g'
        auto crit = oracle::durand_kerner(dg.coeffs());
        std::vector<cplx> critical;
        for (cplx c : crit) {
            for (int it = 0; it < 8; ++it) {
                auto [v, dv] = dg.eval_with_deriv(c);
                if (std::abs(dv) < 1e-18) break;
                c -= v / dv;
            }
            if (std::abs(g.eval(c)) > 1e-6 * g.coeff_scale_at(c))
                critical.push_back(c);
        }
        if (critical.empty()) continue;
        ++polys_done;

        auto tau = LambdaMeasure::uniform_disk(0.75, 70 + trial);
        EngineConfig cfg;
        for (cplx c : critical) {
            OrbitOutcome o = run_random_orbit(g, tau, c, {}, cfg, 0);
            if (o.status != OrbitStatus::HitCriticalPoint) exact_all = false;
            for (int run = 0; run < 40; ++run) {
                double ang = 2.0 * 3.14159265358979323846 * run / 40.0;
                cplx z = c + std::polar(1e-3, ang);
                OrbitOutcome p = run_random_orbit(g, tau, z, {}, cfg, run);
                ++near_runs;
                if (p.status == OrbitStatus::ConvergedToRoot) ++near_ok;
            }
        }
    }
    double frac = near_runs > 0 ? static_cast<double>(near_ok) / near_runs : 0.0;
    bool ok = polys_done == 10 && exact_all && frac >= 0.99;
    std::ostringstream d;
    d << "exact starts all critical: " << (exact_all ? "yes" : "no")
      << ", nearby convergence " << near_ok << "/" << near_runs;
    report(7, "exceptional set", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 8
void criterion_markov_oracle() {
    Timer t;
    int chains = 0;
    bool all_ok = true;
    double worst_meas = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        LabeledChain c = oracle::random_labeled_chain(trial, 908);
        auto dec = decompose_chain(c);
        oracle::BruteChain brute(c);
        auto oracle_classes = brute.closed_classes();
        if (dec.closed_classes.size() != oracle_classes.size()) {
            all_ok = false;
            continue;
        }
        for (std::size_t i = 0; i < oracle_classes.size(); ++i) {
            const auto& mine = dec.closed_classes[i];
            if (mine.states != oracle_classes[i]) all_ok = false;
            if (mine.period != brute.period_of(oracle_classes[i])) all_ok = false;
            auto cyc =
                brute.cyclic_classes_of(oracle_classes[i], mine.period);
            if (mine.cyclic_classes != cyc) all_ok = false;
            auto pi = brute.stationary_of(oracle_classes[i]);
            std::vector<double> mix(mine.states.size(), 0.0);
            for (int k = 0; k < mine.period; ++k)
                for (std::size_t j = 0; j < mine.cyclic_classes[k].size(); ++j) {
                    int st = mine.cyclic_classes[k][j];
                    auto it = std::lower_bound(mine.states.begin(),
                                               mine.states.end(), st);
                    mix[it - mine.states.begin()] +=
                        mine.stationary[k][j] / mine.period;
                }
            for (std::size_t j = 0; j < mix.size(); ++j) {
                worst_meas = std::max(worst_meas, std::abs(mix[j] - pi[j]));
                if (std::abs(mix[j] - pi[j]) > 1e-10) all_ok = false;
            }
        }
        ++chains;
    }
    bool ok = chains == 100 && all_ok;
    std::ostringstream d;
    d << chains << " chains, worst stationary deviation " << worst_meas;
    report(8, "Markov decomposition vs brute force", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 9
void criterion_quadratic_classes() {
    Timer t;
    bool ok = true;
    std::string note;

    auto ic = classify_quadratic_measure(LambdaMeasure::finite_support(
        {{cplx(0.5, 0), 0.5}, {cplx(6, 0), 0.5}}, 0));
    if (ic.type != QuadraticType::Ic) ok = false;
    if (std::abs(ic.chi.value - oracle::kHalfLog3) > 1e-12) ok = false;

    auto ib = classify_quadratic_measure(LambdaMeasure::finite_support(
        {{cplx(0.5, 0), 0.8}, {cplx(6, 0), 0.2}}, 0));
    if (ib.type != QuadraticType::Ib) ok = false;

    auto ia = classify_quadratic_measure(
        LambdaMeasure::finite_support({{cplx(0.5, 0), 1.0}}, 0));
    if (ia.type != QuadraticType::Ia) ok = false;

    std::ostringstream d;
    d << "Ic chi " << ic.chi.value << " (target " << oracle::kHalfLog3
      << "), Ib chi " << ib.chi.value << ", Ia ok";
    report(9, "quadratic family classification", ok, d.str(), t.seconds());
}

// ---------------------------------------------------------------- 10
void criterion_reproducibility() {
    Timer t;
    bool ok = true;

    // criterion-3 style artifact: roots as a JSON document
    {
        Polynomial g = Polynomial::parse("2 - 2z + z^3");
        auto run = [&] {
            auto tau = LambdaMeasure::uniform_disk(0.75, 123);
            auto roots = find_all_roots(g, tau, EngineConfig{});
            nlohmann::json j;
            for (const auto& r : roots)
                j.push_back({r.value.real(), r.value.imag(), r.residual});
            return j.dump();
        };
        if (run() != run()) ok = false;
    }

    // criterion-4 style artifact: trap tallies
    {
        Polynomial trap = Polynomial::parse("2 - 2z + z^3");
        auto tau = LambdaMeasure::uniform_disk(0.75, 9);
        auto run = [&] {
            long conv = 0;
            for (long i = 0; i < 200; ++i)
                if (run_random_orbit(trap, tau, cplx(0, 0), {}, EngineConfig{}, i)
                        .status == OrbitStatus::ConvergedToRoot)
                    ++conv;
            return conv;
        };
        if (run() != run()) ok = false;
    }

    // criterion-5 style artifact: traced slopes
    {
        Polynomial g = Polynomial::parse("-1 + z^2");
        auto tau = LambdaMeasure::uniform_disk(0.75, 31);
        EngineConfig cfg;
        cfg.record_trace = true;
        auto run = [&] {
            std::ostringstream os;
            for (std::uint64_t i = 0; i < 40; ++i) {
                OrbitOutcome o = run_random_orbit(g, tau, cplx(1e5, 0), {}, cfg, i);
                if (o.status == OrbitStatus::ConvergedToRoot &&
                    o.log_distance_trace.size() >= 50)
                    os.precision(17);
                if (o.log_distance_trace.size() >= 50)
                    os << empirical_rate(o.log_distance_trace).slope << ";";
            }
            return os.str();
        };
        if (run() != run()) ok = false;
    }

    // criterion-6 style artifact: per-start tallies and a basin CSV
    {
        Polynomial g = Polynomial::parse("-1 + z^2");
        auto tau = LambdaMeasure::uniform_disk(0.75, 7);
        EngineConfig cfg;
        auto roots = find_all_roots(g, tau, cfg);
        auto run = [&] {
            TEstimate e = estimate_T(g, tau, cplx(0.3, 1.1), 500, roots, cfg, 0);
            std::ostringstream os;
            os.precision(17);
            for (double p : e.per_root) os << p << ",";
            os << e.escape << "," << e.unresolved;
            GridSpec spec;
            spec.nx = 12;
            spec.ny = 12;
            BasinGrid grid = render_basin(g, tau, spec, 5, roots, cfg);
            write_basin_csv(grid, os);
            return os.str();
        };
        if (run() != run()) ok = false;
    }

    report(10, "seeded reproducibility", ok,
           ok ? "identical artifacts across reruns" : "artifacts diverged",
           t.seconds());
}

}  // namespace

int main() {
    std::printf("acceptance suite, library version %s\n", "0.1.0");
    criterion_multipliers();
    criterion_lyapunov_mc();
    criterion_all_roots();
    criterion_trap();
    criterion_rate();
    criterion_sum_rule();
    criterion_exceptional_set();
    criterion_markov_oracle();
    criterion_quadratic_classes();
    criterion_reproducibility();
    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
