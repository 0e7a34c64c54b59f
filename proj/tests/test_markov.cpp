#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "stochnewton/dynamics.hpp"
#include "stochnewton/markov.hpp"
#include "stochnewton/rng.hpp"

using namespace stochnewton;

namespace {

using oracle::BruteChain;
using oracle::random_labeled_chain;

}  // namespace

TEST_CASE("two-state swap chain has period 2") {
    LabeledChain c;
    c.label_probs = {1.0};
    c.label_maps = {{1, 0}};
    auto dec = decompose_chain(c);
    REQUIRE(dec.closed_classes.size() == 1);
    const auto& cls = dec.closed_classes[0];
    CHECK(cls.period == 2);
    REQUIRE(cls.cyclic_classes.size() == 2);
    CHECK(cls.cyclic_classes[0] == std::vector<int>{0});
    CHECK(cls.cyclic_classes[1] == std::vector<int>{1});
    CHECK(cls.stationary[0][0] == doctest::Approx(1.0));
}

TEST_CASE("transient states feed the closed class") {
    // 0 -> 1 -> 1; 2 -> 0 or 1
    LabeledChain c;
    c.label_probs = {0.5, 0.5};
    c.label_maps = {{1, 1, 0}, {1, 1, 1}};
    auto dec = decompose_chain(c);
    REQUIRE(dec.closed_classes.size() == 1);
    CHECK(dec.closed_classes[0].states == std::vector<int>{1});
    CHECK(dec.transient_states == std::vector<int>{0, 2});
}

TEST_CASE("one-step operator pushes each stationary vector to the next") {
    for (int trial = 0; trial < 40; ++trial) {
        LabeledChain c = random_labeled_chain(trial);
        auto dec = decompose_chain(c);
        for (const auto& cls : dec.closed_classes) {
            for (int k = 0; k < cls.period; ++k) {
                const auto& from = cls.cyclic_classes[k];
                const auto& to = cls.cyclic_classes[(k + 1) % cls.period];
                const auto& om = cls.stationary[k];
                const auto& expect = cls.stationary[(k + 1) % cls.period];
                // push om through the one-step matrix
                std::vector<double> pushed(to.size(), 0.0);
                for (std::size_t i = 0; i < from.size(); ++i)
                    for (std::size_t j = 0; j < to.size(); ++j)
                        pushed[j] += om[i] * dec.one_step[from[i]][to[j]];
                double mass = 0.0;
                for (std::size_t j = 0; j < to.size(); ++j) {
                    CHECK(std::abs(pushed[j] - expect[j]) < 1e-12);
                    mass += pushed[j];
                }
                CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("decomposition agrees with the brute-force oracle") {
    for (int trial = 0; trial < 40; ++trial) {
        LabeledChain c = random_labeled_chain(100 + trial);
        auto dec = decompose_chain(c);
        BruteChain brute(c);

        auto oracle_classes = brute.closed_classes();
        REQUIRE(dec.closed_classes.size() == oracle_classes.size());
        for (std::size_t i = 0; i < oracle_classes.size(); ++i) {
            const auto& mine = dec.closed_classes[i];
            CHECK(mine.states == oracle_classes[i]);
            CHECK(mine.period == brute.period_of(oracle_classes[i]));

            // class-level stationary measure: mixture of the cyclic ones
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
            for (std::size_t j = 0; j < mix.size(); ++j)
                CHECK(std::abs(mix[j] - pi[j]) < 1e-10);
        }
    }
}

TEST_CASE("rotation family: two-cycle with equidistributed measure") {
    auto fam = GeneratorFamily::rotation(2, {1});
    std::vector<GeneratorAtom> atoms{{0, cplx(0.3, 0.0), 1.0}};
    auto reports = markov_decompose(fam, atoms);
    REQUIRE(reports.size() == 2);  // {1,-1} and {infinity}

    const MinimalSetReport* pair = nullptr;
    const MinimalSetReport* inf = nullptr;
    for (const auto& r : reports)
        (r.points.size() == 2 ? pair : inf) = &r;
    REQUIRE(pair != nullptr);
    REQUIRE(inf != nullptr);

    CHECK(pair->period == 2);
    REQUIRE(pair->cyclic_classes.size() == 2);
    for (const auto& cc : pair->cyclic_classes) CHECK(cc.size() == 1);
    for (const auto& om : pair->stationary_measures)
        CHECK(om[0] == doctest::Approx(1.0));

    // chi = (log|1+2l| + log|1-2l|)/2 against the hand-derived derivative
    double expect = 0.5 * (std::log(std::abs(1.0 + 2.0 * 0.3)) +
                           std::log(std::abs(1.0 - 2.0 * 0.3)));
    CHECK(pair->lyapunov.value == doctest::Approx(expect).epsilon(1e-12));

    CHECK(inf->period == 1);
    CHECK(inf->lyapunov.minus_infinity);
    CHECK(inf->classification == SetClassification::SuperattractingPresent);
}

TEST_CASE("quadratic family minimal sets are {0} and {infinity}") {
    auto fam = GeneratorFamily::quadratic();
    std::vector<GeneratorAtom> atoms{{0, cplx(0.5, 0), 0.5}, {0, cplx(6, 0), 0.5}};
    auto reports = markov_decompose(fam, atoms);
    REQUIRE(reports.size() == 2);
    bool saw_zero = false, saw_inf = false;
    for (const auto& r : reports) {
        REQUIRE(r.points.size() == 1);
        CHECK(r.period == 1);
        if (r.points[0].infinite) {
            saw_inf = true;
            CHECK(r.classification == SetClassification::SuperattractingPresent);
        } else {
            saw_zero = true;
            CHECK(std::abs(r.points[0].value) < 1e-12);
            CHECK(r.lyapunov.value ==
                  doctest::Approx(oracle::kHalfLog3).epsilon(1e-12));
            CHECK(r.classification == SetClassification::Mixed);
        }
    }
    CHECK(saw_zero);
    CHECK(saw_inf);
}

TEST_CASE("relaxed Newton minimal sets: one per root plus infinity") {
    Polynomial g({cplx(-1, 0), cplx(0, 0), cplx(1, 0)});
    auto fam = GeneratorFamily::relaxed_newton(g, {cplx(-1, 0), cplx(1, 0)});
    std::vector<GeneratorAtom> atoms{{0, cplx(0.8, 0.1), 0.4},
                                     {0, cplx(1.3, -0.2), 0.6}};
    auto reports = markov_decompose(fam, atoms);
    REQUIRE(reports.size() == 3);
    int attracting = 0, expanding = 0;
    for (const auto& r : reports) {
        REQUIRE(r.points.size() == 1);
        CHECK(r.period == 1);
        if (r.points[0].infinite) {
            CHECK(r.classification == SetClassification::Expanding);
            ++expanding;
        } else {
            CHECK(r.classification == SetClassification::Attracting);
            CHECK(r.lyapunov.value < 0.0);
            ++attracting;
        }
    }
    CHECK(attracting == 2);
    CHECK(expanding == 1);
}

TEST_CASE("embedded Markov family reshuffles its point set") {
    // Q = {0, 1}; P1 swaps them (P1(z) = 1 - z), P2 is identity.
    std::vector<cplx> pts{cplx(0, 0), cplx(1, 0)};
    Polynomial swap_map({cplx(1, 0), cplx(-1, 0)});
    Polynomial ident({cplx(0, 0), cplx(1, 0)});
    auto fam = GeneratorFamily::embedded_markov(pts, {swap_map, ident});
    std::vector<GeneratorAtom> atoms{{0, cplx(0.2, 0), 0.5},
                                     {1, cplx(0.2, 0), 0.5}};
    auto reports = markov_decompose(fam, atoms);
    // swap + hold on {0,1} gives an aperiodic two-point minimal set, plus inf
    REQUIRE(reports.size() == 2);
    for (const auto& r : reports) {
        if (r.points.size() == 2) {
            CHECK(r.period == 1);
            REQUIRE(r.cyclic_classes.size() == 1);
            CHECK(r.stationary_measures[0][0] == doctest::Approx(0.5));
            CHECK(r.stationary_measures[0][1] == doctest::Approx(0.5));
        }
    }
}

TEST_CASE("simple cycle enumeration on a 3-cycle with a chord") {
    // edges: 0->1, 1->2, 2->0, 1->0
    std::vector<std::vector<char>> adj(3, std::vector<char>(3, 0));
    adj[0][1] = adj[1][2] = adj[2][0] = adj[1][0] = 1;
    std::vector<std::vector<int>> cycles;
    REQUIRE(enumerate_simple_cycles(adj, {0, 1, 2}, 1000, cycles));
    CHECK(cycles.size() == 2);  // 0-1-2 and 0-1
}
