#pragma once

#include <vector>

#include "stochnewton/family.hpp"
#include "stochnewton/markov.hpp"
#include "stochnewton/measure.hpp"
#include "stochnewton/spherical.hpp"

namespace stochnewton {

enum class SetClassification {
    Attracting,
    Expanding,
    Mixed,
    SuperattractingPresent,
};

// Lyapunov exponent with the superattracting case kept out of the float
// range: minus_infinity marks a zero derivative somewhere on the set.
struct Lyapunov {
    double value = 0.0;
    bool minus_infinity = false;
    double std_error = 0.0;  // zero for the exact routes
    bool exact = true;
};

// A finite minimal set with its Markov-chain structure.
struct MinimalSetReport {
    std::vector<SphericalPoint> points;
    int period = 1;
    // Partition of point indices; every generator maps class k into k+1.
    std::vector<std::vector<int>> cyclic_classes;
    // Stationary vector per cyclic class, aligned with cyclic_classes[k];
    // fixed by the period-step transition operator.
    std::vector<std::vector<double>> stationary_measures;
    Lyapunov lyapunov;
    SetClassification classification = SetClassification::Mixed;
    // True when the cycle-multiplier scan hit its budget and the
    // classification came from Monte Carlo multiplier sampling.
    bool multiplier_scan_sampled = false;
};

// Decomposes the family's finite invariant set under the finite measure
// given by atoms: closed communicating classes (the minimal sets), their
// periods, cyclic classes, stationary measures, Lyapunov exponents and
// attracting/expanding classification.
std::vector<MinimalSetReport> markov_decompose(
    const GeneratorFamily& family, const std::vector<GeneratorAtom>& atoms);

// Classification by scanning spherical-multiplier products over all simple
// cycles and label assignments on the set: attracting when the supremum is
// below 1, expanding when the infimum exceeds 1.
SetClassification classify_minimal_set(const GeneratorFamily& family,
                                       const std::vector<GeneratorAtom>& atoms,
                                       const std::vector<SphericalPoint>& set_points,
                                       bool* sampled_fallback = nullptr);

// Lyapunov exponent at a common fixed point x of the family.
// multiplicity 0 means "derive from the polynomial" (relaxed Newton roots).
Lyapunov lyapunov_fixed_point(const LambdaMeasure& tau,
                              const GeneratorFamily& family, SphericalPoint x,
                              int multiplicity = 0);

// Measure on the quadratic family parameter classified per the behavior of
// the common fixed point 0.
enum class QuadraticType { Ia, Ib, Ic };

struct QuadraticClassification {
    QuadraticType type = QuadraticType::Ia;
    bool ii_candidate = false;  // Monte Carlo probe found an interior attractor
    Lyapunov chi;               // exponent at 0 (meaningless for type Ia)
};

QuadraticClassification classify_quadratic_measure(const LambdaMeasure& tau);

// Adapter: a finite-support relaxation measure as single-branch atoms.
std::vector<GeneratorAtom> atoms_from_measure(const LambdaMeasure& tau);

const char* to_string(SetClassification c);
const char* to_string(QuadraticType t);

}  // namespace stochnewton
