#include "stochnewton/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochnewton/errors.hpp"
#include "stochnewton/spherical.hpp"

namespace stochnewton {

namespace {

// |g'(z)| below this times the derivative coefficient scale marks z as a
// critical point candidate.
constexpr double kCriticalFactor = 1e-13;

// Loose residual trigger that starts a polishing attempt.
constexpr double kCaptureResidualFactor = 1e-5;

constexpr double kTraceFloor = 1e-14;

// Cached absolute coefficient arrays so per-step backward-error scales cost
// one real Horner pass each.
struct PolyEval {
    const Polynomial& g;
    std::vector<double> abs_c;
    std::vector<double> abs_dc;

    explicit PolyEval(const Polynomial& p) : g(p) {
        const auto& c = p.coeffs();
        abs_c.resize(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) abs_c[k] = std::abs(c[k]);
        abs_dc.resize(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k)
            abs_dc[k - 1] = std::abs(c[k]) * static_cast<double>(k);
    }

    static double horner_abs(const std::vector<double>& a, double x) {
        double acc = a.back();
        for (auto it = a.rbegin() + 1; it != a.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double scale(double az) const { return std::max(horner_abs(abs_c, az), 1e-300); }
    double dscale(double az) const { return std::max(horner_abs(abs_dc, az), 1e-300); }
};

void validate_config(const EngineConfig& cfg, const Polynomial& g) {
    if (!(cfg.residual_tolerance > 0.0) || !(cfg.root_capture_radius > 0.0))
        throw BadConfig("tolerances must be positive");
    if (cfg.max_iterations < 1) throw BadConfig("max_iterations must be positive");
    if (cfg.escape_radius > 0.0 && cfg.escape_radius <= g.cauchy_root_bound())
        throw BadConfig("escape radius must exceed the Cauchy root bound");
}

int match_root(cplx x, const std::vector<RootRecord>& known, double radius) {
    int best = -1;
    double best_d = radius;
    for (std::size_t i = 0; i < known.size(); ++i) {
        double d = std::abs(x - known[i].value);
        if (d <= best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

cplx newton_map(const Polynomial& g, cplx lambda, cplx z) {
    auto [gz, dgz] = g.eval_with_deriv(z);
    PolyEval pe(g);
    double az = std::abs(z);
    if (std::abs(dgz) < kCriticalFactor * pe.dscale(az)) {
        // 0/0 only at a multiple root, where the map fixes the point.
        if (std::abs(gz) <= 1e-12 * pe.scale(az)) return z;
        throw CriticalPointError("relaxed Newton map undefined: g'(z)=0, g(z)!=0");
    }
    return z - lambda * gz / dgz;
}

PolishResult polish_root(const Polynomial& g, cplx z0, const EngineConfig& cfg) {
    PolishResult out;
    PolyEval pe(g);
    const int deg = g.degree();
    // Polishing runs to the backward-stable floor so downstream consumers
    // (deflation points, trace references) get full double accuracy; the
    // configured tolerance only decides acceptance.
    const double eps_floor = 8.0 * std::numeric_limits<double>::epsilon();

    cplx z = z0;
    cplx best_z = z0;
    double best_resid = std::abs(g.eval(z0));
    double prev_step = -1.0;
    int m = 1;
    int taken = 0;
    const int budget = 3 * cfg.polish_steps + 4;
    for (int k = 0; k < budget; ++k) {
        auto [gz, dgz] = g.eval_with_deriv(z);
        double az = std::abs(z);
        double resid = std::abs(gz);
        if (resid < best_resid) {
            best_resid = resid;
            best_z = z;
        }
        if (resid <= eps_floor * pe.scale(az)) break;
        if (std::abs(dgz) < kCriticalFactor * pe.dscale(az)) break;
        cplx step = gz / dgz;
        double s = std::abs(step);
        // Plain Newton stalls at a multiple root with step ratio (m-1)/m;
        // read m off the ratio and switch to the m-fold corrected step.
        if (k >= 2 && prev_step > 0.0 && s < prev_step) {
            double q = s / prev_step;
            if (q > 0.3 && q < 0.95) {
                int est = static_cast<int>(std::lround(1.0 / (1.0 - q)));
                m = std::clamp(est, 1, deg);
            }
        }
        prev_step = s;
        z -= static_cast<double>(m) * step;
        taken = k + 1;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    }
    out.z = best_z;
    out.residual = best_resid;
    out.steps = taken;
    out.ok = best_resid <= cfg.residual_tolerance * pe.scale(std::abs(best_z));
    out.multiplicity = out.ok ? estimate_multiplicity(g, best_z) : 1;
    return out;
}

namespace {

struct OrbitRun {
    OrbitOutcome outcome;
    std::uint64_t salt_used = 0;
};

// One attempt of the random orbit; mid-orbit critical hits are reported so
// the caller can retry with a fresh stream.
OrbitRun run_orbit_once(const Polynomial& g, const LambdaMeasure& tau, cplx z0,
                        const std::vector<RootRecord>& known,
                        const EngineConfig& cfg, std::uint64_t run_index,
                        std::uint64_t salt) {
    OrbitRun run;
    run.salt_used = salt;
    OrbitOutcome& out = run.outcome;
    PolyEval pe(g);

    const double escape_r =
        cfg.escape_radius > 0.0 ? cfg.escape_radius : 4.0 * g.cauchy_root_bound();
    const double capture_r = cfg.root_capture_radius;

    auto accept = [&](cplx polished, long iters) {
        out.status = OrbitStatus::ConvergedToRoot;
        out.iterations = iters;
        int idx = match_root(polished, known, std::max(capture_r, 1e-6));
        out.root_index = idx >= 0 ? idx : static_cast<int>(known.size());
        out.final_z = idx >= 0 ? known[idx].value : polished;
    };

    cplx z = z0;

    // Starting on a known root (or any root) converges in zero iterations.
    if (int idx = match_root(z, known, capture_r); idx >= 0) {
        out.status = OrbitStatus::ConvergedToRoot;
        out.root_index = idx;
        out.final_z = known[idx].value;
        out.iterations = 0;
        return run;
    }
    {
        auto [gz, dgz] = g.eval_with_deriv(z);
        double az = std::abs(z);
        if (std::abs(gz) <= kCaptureResidualFactor * pe.scale(az)) {
            PolishResult pr = polish_root(g, z, cfg);
            if (pr.ok) {
                accept(pr.z, 0);
                return run;
            }
        }
        if (std::abs(dgz) < kCriticalFactor * pe.dscale(az) &&
            std::abs(gz) >= cfg.residual_tolerance * pe.scale(az)) {
            out.status = OrbitStatus::HitCriticalPoint;
            out.iterations = 0;
            out.final_z = z;
            return run;
        }
    }

    SampleStream stream(tau, run_index, salt);
    int above_escape = 0;
    double prev_abs = std::abs(z);

    for (long n = 1; n <= cfg.max_iterations; ++n) {
        auto [gz, dgz] = g.eval_with_deriv(z);
        double az = std::abs(z);

        if (std::abs(dgz) < kCriticalFactor * pe.dscale(az)) {
            if (std::abs(gz) < cfg.residual_tolerance * pe.scale(az)) {
                PolishResult pr = polish_root(g, z, cfg);
                if (pr.ok) {
                    accept(pr.z, n - 1);
                    return run;
                }
            }
            out.status = OrbitStatus::HitCriticalPoint;
            out.iterations = n - 1;
            out.final_z = z;
            return run;
        }

        cplx lambda = stream.next();
        z = z - lambda * gz / dgz;

        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            // Overflow from a near-critical step; count as a mid-orbit hit so
            // the caller restarts with a fresh stream.
            out.status = OrbitStatus::HitCriticalPoint;
            out.iterations = n;
            out.final_z = z0;
            return run;
        }

        double new_abs = std::abs(z);
        if (new_abs > escape_r && new_abs >= prev_abs) {
            // The relaxed scheme pulls large excursions back geometrically;
            // only non-contracting stretches beyond the radius count as escape.
            if (++above_escape >= cfg.escape_patience) {
                out.status = OrbitStatus::EscapedToInfinity;
                out.iterations = n;
                out.final_z = z;
                return run;
            }
        } else {
            above_escape = 0;
        }
        prev_abs = new_abs;

        if (int idx = match_root(z, known, capture_r); idx >= 0) {
            PolishResult pr = polish_root(g, z, cfg);
            if (pr.ok) {
                accept(pr.z, n);
                return run;
            }
        }
        auto [gz2, dgz2] = g.eval_with_deriv(z);
        (void)dgz2;
        if (std::abs(gz2) <= kCaptureResidualFactor * pe.scale(std::abs(z))) {
            PolishResult pr = polish_root(g, z, cfg);
            if (pr.ok) {
                accept(pr.z, n);
                return run;
            }
        }
        out.iterations = n;
    }

    out.status = OrbitStatus::MaxIterations;
    out.final_z = z;
    return run;
}

void record_trace(const Polynomial& g, const LambdaMeasure& tau, cplx z0,
                  const EngineConfig& cfg, std::uint64_t run_index,
                  std::uint64_t salt, OrbitOutcome& out) {
    // Replay the same lambda word raw (no polishing hand-off) and log the
    // chordal approach to the terminal root.
    cplx x = out.final_z;
    SampleStream replay(tau, run_index, salt);
    cplx z = z0;
    bool locked = false;
    double min_d = 4.0;
    int since_improve = 0;
    out.log_distance_trace.clear();
    for (int n = 0; n < cfg.trace_cap; ++n) {
        double d = chordal_distance(z, x);
        if (d < kTraceFloor) break;
        if (d < min_d) {
            min_d = d;
            since_improve = 0;
        } else if (++since_improve > 200) {
            break;  // numeric floor of the reference root reached
        }
        if (d <= cfg.trace_lock_radius) locked = true;
        if (locked) out.log_distance_trace.push_back(std::log(d));
        auto [gz, dgz] = g.eval_with_deriv(z);
        if (std::abs(dgz) == 0.0) break;
        z = z - replay.next() * gz / dgz;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    }
}

}  // namespace

OrbitOutcome run_random_orbit(const Polynomial& g, const LambdaMeasure& tau,
                              cplx z0, const std::vector<RootRecord>& known_roots,
                              const EngineConfig& cfg, std::uint64_t run_index) {
    if (g.degree() < 1) throw BadConfig("orbit needs a non-constant polynomial");
    validate_config(cfg, g);
    OrbitRun run;
    for (int attempt = 0; attempt <= cfg.restart_budget; ++attempt) {
        run = run_orbit_once(g, tau, z0, known_roots, cfg, run_index,
                             static_cast<std::uint64_t>(attempt));
        // A critical hit at the starting point is a property of z0, not of
        // the lambda draw; only mid-orbit hits are retried.
        if (run.outcome.status == OrbitStatus::HitCriticalPoint &&
            run.outcome.iterations > 0)
            continue;
        break;
    }
    if (cfg.record_trace && run.outcome.status == OrbitStatus::ConvergedToRoot)
        record_trace(g, tau, z0, cfg, run_index, run.salt_used, run.outcome);
    return run.outcome;
}

OrbitOutcome deterministic_newton(const Polynomial& g, cplx z0,
                                  const EngineConfig& cfg) {
    validate_config(cfg, g);
    OrbitOutcome out;
    PolyEval pe(g);
    const double escape_r =
        cfg.escape_radius > 0.0 ? cfg.escape_radius : 4.0 * g.cauchy_root_bound();
    const double cycle_tol = 1e-9;

    cplx z = z0;
    cplx tortoise = z;
    long power = 1, lam = 0;
    int above_escape = 0;
    double prev_abs = std::abs(z);

    for (long n = 1; n <= cfg.max_iterations; ++n) {
        auto [gz, dgz] = g.eval_with_deriv(z);
        double az = std::abs(z);

        if (std::abs(gz) <= kCaptureResidualFactor * pe.scale(az)) {
            PolishResult pr = polish_root(g, z, cfg);
            if (pr.ok) {
                out.status = OrbitStatus::ConvergedToRoot;
                out.root_index = 0;
                out.final_z = pr.z;
                out.iterations = n - 1;
                return out;
            }
        }
        if (std::abs(dgz) < kCriticalFactor * pe.dscale(az)) {
            out.status = OrbitStatus::HitCriticalPoint;
            out.iterations = n - 1;
            out.final_z = z;
            return out;
        }

        z = z - gz / dgz;
        ++lam;

        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            out.status = OrbitStatus::HitCriticalPoint;
            out.iterations = n;
            out.final_z = z0;
            return out;
        }

        double new_abs = std::abs(z);
        if (new_abs > escape_r && new_abs >= prev_abs) {
            if (++above_escape >= cfg.escape_patience) {
                out.status = OrbitStatus::EscapedToInfinity;
                out.iterations = n;
                out.final_z = z;
                return out;
            }
        } else {
            above_escape = 0;
        }
        prev_abs = new_abs;

        // Brent cycle detection with power-of-two checkpoints.
        if (chordal_distance(z, tortoise) < cycle_tol) {
            PolishResult pr = polish_root(g, z, cfg);
            if (pr.ok) {
                out.status = OrbitStatus::ConvergedToRoot;
                out.root_index = 0;
                out.final_z = pr.z;
                out.iterations = n;
                return out;
            }
            out.status = OrbitStatus::DetectedCycle;
            out.cycle_length = static_cast<int>(lam);
            out.iterations = n;
            out.final_z = z;
            return out;
        }
        if (lam == power) {
            tortoise = z;
            power *= 2;
            lam = 0;
        }
    }
    out.status = OrbitStatus::MaxIterations;
    out.final_z = z;
    out.iterations = cfg.max_iterations;
    return out;
}

std::vector<RootRecord> find_all_roots(const Polynomial& g,
                                       const LambdaMeasure& tau,
                                       const EngineConfig& cfg,
                                       std::uint64_t seed_offset) {
    const int deg = g.degree();
    if (deg < 1) throw BadConfig("find_all_roots needs degree >= 1");
    std::vector<RootRecord> records;

    auto record_for = [&](cplx x) {
        RootRecord rec;
        rec.value = x;
        rec.residual = std::abs(g.eval(x));
        rec.multiplicity_estimate = estimate_multiplicity(g, x);
        rec.polished = true;
        return rec;
    };

    if (deg == 1) {
        // The random scheme needs degree >= 2; linear input is direct.
        cplx x = -g.coeffs()[0] / g.coeffs()[1];
        records.push_back(record_for(x));
        return records;
    }

    auto [h, a] = normalize(g);
    Polynomial current = h.scaled(1.0 / h.leading_coeff());
    const cplx z0 = cfg.start_point;  // any point outside the unit disk works
    if (!(std::abs(z0) > 1.0))
        throw BadConfig("start point must lie outside the closed unit disk");

    EngineConfig stage_cfg = cfg;
    stage_cfg.record_trace = false;

    int stage = 0;
    while (static_cast<int>(records.size()) < deg) {
        if (current.degree() == 1) {
            cplx y = -current.coeffs()[0] / current.coeffs()[1];
            PolishResult pr = polish_root(g, a * y, cfg);
            records.push_back(record_for(pr.ok ? pr.z : a * y));
            break;
        }

        stage_cfg.escape_radius = 0.0;  // re-derive for the deflated polynomial
        bool found = false;
        for (int attempt = 0; attempt < cfg.restart_budget && !found; ++attempt) {
            std::uint64_t run =
                seed_offset +
                static_cast<std::uint64_t>(stage) * (cfg.restart_budget + 1) +
                static_cast<std::uint64_t>(attempt);
            OrbitOutcome orbit =
                run_random_orbit(current, tau, z0, {}, stage_cfg, run);
            if (orbit.status != OrbitStatus::ConvergedToRoot) continue;

            // Polish in original coordinates so reported roots do not inherit
            // deflation drift, then deflate at the corresponding point.
            PolishResult pr = polish_root(g, a * orbit.final_z, cfg);
            cplx y_def = pr.ok ? pr.z / a : orbit.final_z;
            try {
                current = deflate(current, y_def, 1e-6);
            } catch (const RemainderTooLarge&) {
                try {
                    current = deflate(current, orbit.final_z, 1e-6);
                } catch (const RemainderTooLarge&) {
                    continue;
                }
            }
            records.push_back(record_for(pr.ok ? pr.z : a * orbit.final_z));
            found = true;
        }
        if (!found)
            throw IncompleteFactorization(
                "random orbit stage failed to produce a root after retries",
                static_cast<int>(records.size()));
        ++stage;
    }
    return records;
}

}  // namespace stochnewton
