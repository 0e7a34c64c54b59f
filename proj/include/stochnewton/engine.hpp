#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stochnewton/measure.hpp"
#include "stochnewton/polynomial.hpp"

namespace stochnewton {

struct EngineConfig {
    int max_iterations = 5000;
    double escape_radius = 0.0;        // 0 = auto: 4 x Cauchy root bound
    double root_capture_radius = 1e-3;
    double residual_tolerance = 1e-10; // relative to coefficient scale
    int polish_steps = 4;
    int escape_patience = 5;           // consecutive steps beyond escape_radius
    int restart_budget = 16;           // per deflation stage
    // Orbit start for find_all_roots, in normalized coordinates; must lie
    // outside the closed unit disk.
    cplx start_point{2.0, 0.0};
    bool record_trace = false;
    int trace_cap = 20000;
    // Distances above this (chordal) are excluded from the recorded trace;
    // the trace covers the approach once the terminal root is determined.
    double trace_lock_radius = 1.95;
};

enum class OrbitStatus {
    ConvergedToRoot,
    EscapedToInfinity,
    HitCriticalPoint,
    MaxIterations,
    DetectedCycle,
};

struct OrbitOutcome {
    OrbitStatus status = OrbitStatus::MaxIterations;
    int root_index = -1;   // index into known_roots; == size() for a fresh root
    int cycle_length = 0;  // DetectedCycle only
    long iterations = 0;
    cplx final_z{0.0, 0.0};
    // log chordal distance to the terminal root per step, recorded from
    // lock-on down to the floating-point floor (trace mode only).
    std::vector<double> log_distance_trace;
};

// One relaxed Newton step z - lambda g(z)/g'(z).  At a root of g (both
// |g| and |g'| small, or |g| small) the point is returned unchanged;
// where g' vanishes but g does not, throws CriticalPointError.
cplx newton_map(const Polynomial& g, cplx lambda, cplx z);

struct PolishResult {
    cplx z{0.0, 0.0};
    double residual = 0.0;
    int multiplicity = 1;
    bool ok = false;
    int steps = 0;
};

// Deterministic Newton polishing against g, with a Schroeder (m-fold)
// correction when the candidate sits on a multiple root.
PolishResult polish_root(const Polynomial& g, cplx z0, const EngineConfig& cfg);

// Runs one random orbit of the relaxed Newton scheme for g with fresh
// lambda drawn from tau each step.  known_roots lets the caller classify
// which basin the orbit landed in; a root not matching any known one gets
// root_index == known_roots.size() and final_z holds the polished value.
OrbitOutcome run_random_orbit(const Polynomial& g, const LambdaMeasure& tau,
                              cplx z0, const std::vector<RootRecord>& known_roots,
                              const EngineConfig& cfg, std::uint64_t run_index);

// Classical Newton (lambda = 1) from z0 with Brent cycle detection.
OrbitOutcome deterministic_newton(const Polynomial& g, cplx z0,
                                  const EngineConfig& cfg);

// Finds all deg(g) roots (with multiplicity): normalize, run a random
// orbit from outside the unit disk, polish against the original
// polynomial, deflate, repeat.  Throws IncompleteFactorization when a
// stage exhausts its restart budget.
std::vector<RootRecord> find_all_roots(const Polynomial& g,
                                       const LambdaMeasure& tau,
                                       const EngineConfig& cfg,
                                       std::uint64_t seed_offset = 0);

}  // namespace stochnewton
