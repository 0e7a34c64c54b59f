#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "stochnewton/engine.hpp"
#include "stochnewton/family.hpp"
#include "stochnewton/measure.hpp"
#include "stochnewton/spherical.hpp"

namespace stochnewton {

// 95% Wilson score interval for k successes out of n trials.
std::array<double, 2> wilson_interval(long k, long n);

// Categorical tally of orbit outcomes from one starting point.  The counts
// partition the runs exactly; the probability fields are the count ratios.
// Censored runs (budget exhausted) stay visible in `unresolved`, never
// folded into another bucket.
struct TEstimate {
    std::vector<long> per_root_counts;
    long escape_count = 0;
    long critical_count = 0;
    long unresolved_count = 0;
    std::vector<double> per_root;
    std::vector<std::array<double, 2>> per_root_wilson;
    double escape = 0.0;
    double critical_hit = 0.0;
    double unresolved = 0.0;
    std::array<double, 2> escape_wilson{0, 0};
    std::array<double, 2> critical_wilson{0, 0};
    std::array<double, 2> unresolved_wilson{0, 0};
    long runs = 0;
};

// Convergence probabilities T_{x,tau}(z): runs independent orbits from z
// with run indices run_base .. run_base+runs-1 and tallies terminal states
// against the supplied roots.
TEstimate estimate_T(const Polynomial& g, const LambdaMeasure& tau, cplx z,
                     long runs, const std::vector<RootRecord>& roots,
                     const EngineConfig& cfg, std::uint64_t run_base = 0);

using SphereFunction = std::function<cplx(const SphericalPoint&)>;

// Bounded continuous test functions for the transition operator.
namespace sphere_fn {
SphereFunction constant_one();
// 1 / (1 + |w|^2); vanishes at infinity.
SphereFunction inv_one_plus_sq();
// max(0, 1 - d(w, center)/width) in the chordal metric.
SphereFunction bump(SphericalPoint center, double width);
// w / (1 + |w|^2): a bounded complex coordinate, zero at infinity.
SphereFunction coordinate();
}  // namespace sphere_fn

struct TransitionEstimate {
    cplx mc_average{0, 0};        // mean of phi(gamma_{n,1}(z)) over runs
    cplx limit_prediction{0, 0};  // sum_x T_x(z) phi(x) from the tally
};

// Monte Carlo value of the n-step transition operator applied to phi at z,
// reported next to the predicted limit sum_x T_x(z) phi(x).
TransitionEstimate estimate_transition_operator(
    const Polynomial& g, const LambdaMeasure& tau, const SphereFunction& phi,
    cplx z, int n_steps, long runs, const std::vector<RootRecord>& roots,
    const TEstimate& tally, const EngineConfig& cfg, std::uint64_t run_base = 0);

// Raw n-step random orbit point (no capture hand-off), saturating at the
// point at infinity once the iterate leaves the numeric range.
SphericalPoint raw_orbit_point(const Polynomial& g, const LambdaMeasure& tau,
                               cplx z, int n_steps, std::uint64_t run_index);

// Same for a single-branch generator family driven by tau.
SphericalPoint raw_family_orbit_point(const GeneratorFamily& family,
                                      const LambdaMeasure& tau,
                                      SphericalPoint z, int n_steps,
                                      std::uint64_t run_index);

// Monte Carlo n-step transition average of phi for a family orbit.
cplx transition_operator_average(const GeneratorFamily& family,
                                 const LambdaMeasure& tau,
                                 const SphereFunction& phi, SphericalPoint z,
                                 int n_steps, long runs,
                                 std::uint64_t run_base = 0);

struct RateFit {
    double slope = 0.0;
    double r2 = 0.0;
};

// Least-squares slope of log-distance vs step over a locked trace.
// Throws TraceTooShort below 50 samples.
RateFit empirical_rate(std::span<const double> trace);

}  // namespace stochnewton
