#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stochnewton {

using cplx = std::complex<double>;

// Complex polynomial stored by ascending-degree coefficients
// (coeffs[k] multiplies z^k).  The leading coefficient is nonzero and the
// degree is at least 1; instances are immutable after construction and safe
// to share across threads.
class Polynomial {
public:
    explicit Polynomial(std::vector<cplx> coeffs);

    static Polynomial parse(const std::string& text);
    static Polynomial from_roots(std::span<const cplx> roots, cplx leading = 1.0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx leading_coeff() const { return coeffs_.back(); }

    // Horner evaluation, high-to-low.
    cplx eval(cplx z) const;
    // p(z) and p'(z) in a single Horner pass.
    std::pair<cplx, cplx> eval_with_deriv(cplx z) const;

    Polynomial derivative() const;

    // sum_k |c_k| |z|^k, the natural magnitude scale for backward-error
    // residual tests at z.
    double coeff_scale_at(cplx z) const;

    // Cauchy bound 1 + max_k |c_k / c_n|: every root has modulus below it.
    double cauchy_root_bound() const;

    // p scaled by a constant factor (roots unchanged).
    Polynomial scaled(cplx factor) const;

    std::string to_string() const;

private:
    std::vector<cplx> coeffs_;
};

// Synthetic division of p by (z - x).  Requires deg(p) >= 2 and |p(x)|
// below tol * coeff_scale_at(x); throws RemainderTooLarge otherwise.
// The discarded remainder is reported through remainder_out when non-null.
Polynomial deflate(const Polynomial& p, cplx x, double tol = 1e-6,
                   double* remainder_out = nullptr);

// Returns (h, a) with h(z) = p(a z) and a the Cauchy root bound, so every
// root of h lies in the open unit disk.  Roots of p are recovered as
// a * (roots of h).
std::pair<Polynomial, double> normalize(const Polynomial& p);

// Smallest m >= 1 such that |p^(m)(x)| is significant against the
// scale-invariant bound sum_{k>=m} |c_k| k!/(k-m)! |x|^(k-m); capped at
// deg(p).  Sets *low_confidence when the winning margin is thin.
int estimate_multiplicity(const Polynomial& p, cplx x,
                          bool* low_confidence = nullptr);

// One root of the original input polynomial, as reported by the engine.
struct RootRecord {
    cplx value;
    int multiplicity_estimate = 1;
    double residual = 0.0;  // |g(value)| on the original polynomial
    bool polished = false;
};

}  // namespace stochnewton
