#pragma once

#include <stdexcept>
#include <string>

namespace stochnewton {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// deflate(): synthetic-division remainder exceeds tolerance, the point is
// not an acceptable root of the polynomial.
struct RemainderTooLarge : Error {
    double remainder;
    RemainderTooLarge(const std::string& msg, double rem)
        : Error(msg), remainder(rem) {}
};

// log_potential(): closed form only exists for disk-type measures.
struct UnsupportedKind : Error {
    using Error::Error;
};

// Lyapunov exponent at a point that is not fixed by the family.
struct NotFixedPoint : Error {
    using Error::Error;
};

// newton_map() evaluated where g' vanishes but g does not.
struct CriticalPointError : Error {
    using Error::Error;
};

// find_all_roots(): a deflation stage exhausted its restart budget.
struct IncompleteFactorization : Error {
    int roots_found;
    IncompleteFactorization(const std::string& msg, int found)
        : Error(msg), roots_found(found) {}
};

// empirical_rate(): trace shorter than the minimum fit window.
struct TraceTooShort : Error {
    using Error::Error;
};

// markov_decompose(): family has no known finite invariant set.
struct NoFiniteInvariantSet : Error {
    using Error::Error;
};

// classify_quadratic_measure(): exponent indistinguishable from zero.
struct ZeroLyapunov : Error {
    using Error::Error;
};

struct BadConfig : Error {
    using Error::Error;
};

}  // namespace stochnewton
