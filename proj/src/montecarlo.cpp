#include "stochnewton/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "stochnewton/errors.hpp"

namespace stochnewton {

std::array<double, 2> wilson_interval(long k, long n) {
    if (n <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 97.5% normal quantile
    double p = static_cast<double>(k) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = k == n ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

TEstimate estimate_T(const Polynomial& g, const LambdaMeasure& tau, cplx z,
                     long runs, const std::vector<RootRecord>& roots,
                     const EngineConfig& cfg, std::uint64_t run_base) {
    if (runs < 1) throw BadConfig("estimate_T needs at least one run");
    TEstimate out;
    out.runs = runs;
    std::vector<long> root_counts(roots.size(), 0);
    long escape = 0, critical = 0, unresolved = 0;

    for (long i = 0; i < runs; ++i) {
        OrbitOutcome o = run_random_orbit(g, tau, z, roots, cfg, run_base + i);
        switch (o.status) {
            case OrbitStatus::ConvergedToRoot:
                if (o.root_index >= 0 &&
                    o.root_index < static_cast<int>(roots.size()))
                    ++root_counts[o.root_index];
                else
                    ++unresolved;  // fresh root: the supplied list was incomplete
                break;
            case OrbitStatus::EscapedToInfinity:
                ++escape;
                break;
            case OrbitStatus::HitCriticalPoint:
                ++critical;
                break;
            default:
                ++unresolved;
                break;
        }
    }

    out.per_root_counts = root_counts;
    out.escape_count = escape;
    out.critical_count = critical;
    out.unresolved_count = unresolved;
    out.per_root.resize(roots.size());
    out.per_root_wilson.resize(roots.size());
    for (std::size_t r = 0; r < roots.size(); ++r) {
        out.per_root[r] = static_cast<double>(root_counts[r]) / runs;
        out.per_root_wilson[r] = wilson_interval(root_counts[r], runs);
    }
    out.escape = static_cast<double>(escape) / runs;
    out.critical_hit = static_cast<double>(critical) / runs;
    out.unresolved = static_cast<double>(unresolved) / runs;
    out.escape_wilson = wilson_interval(escape, runs);
    out.critical_wilson = wilson_interval(critical, runs);
    out.unresolved_wilson = wilson_interval(unresolved, runs);
    return out;
}

namespace sphere_fn {

SphereFunction constant_one() {
    return [](const SphericalPoint&) { return cplx(1.0, 0.0); };
}

SphereFunction inv_one_plus_sq() {
    return [](const SphericalPoint& w) {
        if (w.infinite) return cplx(0.0, 0.0);
        return cplx(1.0 / (1.0 + std::norm(w.value)), 0.0);
    };
}

SphereFunction bump(SphericalPoint center, double width) {
    return [center, width](const SphericalPoint& w) {
        double d = chordal_distance(center, w);
        return cplx(std::max(0.0, 1.0 - d / width), 0.0);
    };
}

SphereFunction coordinate() {
    return [](const SphericalPoint& w) {
        if (w.infinite) return cplx(0.0, 0.0);
        return w.value / (1.0 + std::norm(w.value));
    };
}

}  // namespace sphere_fn

SphericalPoint raw_orbit_point(const Polynomial& g, const LambdaMeasure& tau,
                               cplx z, int n_steps, std::uint64_t run_index) {
    SampleStream stream(tau, run_index);
    cplx v = z;
    bool at_inf = false;
    for (int n = 0; n < n_steps; ++n) {
        cplx lambda = stream.next();
        if (at_inf) continue;  // infinity is fixed; keep the stream aligned
        auto [gz, dgz] = g.eval_with_deriv(v);
        if (std::abs(gz) == 0.0) continue;
        if (std::abs(dgz) == 0.0) {
            at_inf = true;
            continue;
        }
        v = v - lambda * gz / dgz;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) ||
            std::abs(v) > 1e100)
            at_inf = true;
    }
    return at_inf ? SphericalPoint::inf() : SphericalPoint::at(v);
}

SphericalPoint raw_family_orbit_point(const GeneratorFamily& family,
                                      const LambdaMeasure& tau,
                                      SphericalPoint z, int n_steps,
                                      std::uint64_t run_index) {
    if (family.branch_count() > 1)
        throw BadConfig("raw family orbit supports single-branch families");
    SampleStream stream(tau, run_index);
    SphericalPoint v = z;
    for (int n = 0; n < n_steps; ++n) v = family.apply(0, stream.next(), v);
    return v;
}

cplx transition_operator_average(const GeneratorFamily& family,
                                 const LambdaMeasure& tau,
                                 const SphereFunction& phi, SphericalPoint z,
                                 int n_steps, long runs,
                                 std::uint64_t run_base) {
    if (runs < 1) throw BadConfig("transition estimate needs at least one run");
    cplx sum(0.0, 0.0);
    for (long i = 0; i < runs; ++i)
        sum += phi(raw_family_orbit_point(family, tau, z, n_steps, run_base + i));
    return sum / static_cast<double>(runs);
}

TransitionEstimate estimate_transition_operator(
    const Polynomial& g, const LambdaMeasure& tau, const SphereFunction& phi,
    cplx z, int n_steps, long runs, const std::vector<RootRecord>& roots,
    const TEstimate& tally, const EngineConfig& cfg, std::uint64_t run_base) {
    (void)cfg;
    if (runs < 1) throw BadConfig("transition estimate needs at least one run");
    TransitionEstimate out;
    cplx sum(0.0, 0.0);
    for (long i = 0; i < runs; ++i)
        sum += phi(raw_orbit_point(g, tau, z, n_steps, run_base + i));
    out.mc_average = sum / static_cast<double>(runs);

    cplx pred(0.0, 0.0);
    for (std::size_t r = 0; r < roots.size() && r < tally.per_root.size(); ++r)
        pred += tally.per_root[r] * phi(SphericalPoint::at(roots[r].value));
    pred += tally.escape * phi(SphericalPoint::inf());
    out.limit_prediction = pred;
    return out;
}

RateFit empirical_rate(std::span<const double> trace) {
    if (trace.size() < 50)
        throw TraceTooShort("rate fit needs a locked trace of at least 50 steps");

    // The chordal distance saturates near sqrt(2) on the far approach, so
    // the head of a trace from a distant start is flat.  Fit the decaying
    // tail: everything after the last sample at chordal distance >= 1.
    std::size_t start = 0;
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (trace[i] >= 0.0) start = i + 1;
    if (trace.size() - start < 25) start = 0;

    const std::size_t n = trace.size() - start;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = static_cast<double>(i);
        double y = trace[start + i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double denom = n * sxx - sx * sx;
    RateFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    double vy = n * syy - sy * sy;
    fit.r2 = vy > 0.0 ? (n * sxy - sx * sy) * (n * sxy - sx * sy) / (denom * vy) : 1.0;
    return fit;
}

}  // namespace stochnewton
