#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stochnewton/polynomial.hpp"
#include "stochnewton/spherical.hpp"

namespace stochnewton {

// One generator drawn from a parameterized family: a branch index (some
// families have several map shapes) plus the parameter value and its
// probability weight.
struct GeneratorAtom {
    int branch = 0;
    cplx lambda{1.0, 0.0};
    double prob = 1.0;
};

// Parameterized holomorphic family of maps with a known finite invariant
// point set.  Supported shapes: the relaxed Newton scheme of a polynomial,
// the quadratic maps lambda z (1-z), the rotated perturbations
// w^i (z + lambda (z^n - 1)) of the n-th roots of unity, and polynomial
// reshufflings P_j(z + lambda g(z)) of a finite point set.
class GeneratorFamily {
public:
    enum class Kind { RelaxedNewton, Quadratic, Rotation, EmbeddedMarkov };

    // roots may be empty if the caller never needs the invariant set (for
    // example fixed-point Lyapunov queries at a supplied root).
    static GeneratorFamily relaxed_newton(Polynomial g,
                                          std::vector<cplx> roots = {});
    static GeneratorFamily quadratic();
    // Branch j applies the rotation w^{i_j}, w = exp(2 pi i / n).
    static GeneratorFamily rotation(int n, std::vector<int> exponents);
    // Branch j applies P_j(z + lambda g(z)) with g vanishing exactly on
    // points; every P_j must map that set into itself.
    static GeneratorFamily embedded_markov(std::vector<cplx> points,
                                           std::vector<Polynomial> permuters);

    Kind kind() const { return kind_; }
    int branch_count() const;
    const Polynomial& polynomial() const;

    // f_{branch,lambda}(z) on the sphere (infinity is fixed for all shapes).
    SphericalPoint apply(int branch, cplx lambda, SphericalPoint z) const;
    // d/dz of the map at a finite point.
    cplx deriv(int branch, cplx lambda, cplx z) const;
    // Spherical operator norm of the derivative; exact at infinity and at
    // the invariant points.
    double sphere_norm(int branch, cplx lambda, SphericalPoint z) const;

    // Finite invariant point set (the singular set intersected with the
    // plane) together with infinity; known in closed form per shape.
    std::vector<SphericalPoint> invariant_points() const;

    bool is_common_fixed_point(SphericalPoint x,
                               const std::vector<GeneratorAtom>& atoms) const;

    std::string kind_name() const;

private:
    GeneratorFamily() = default;

    Kind kind_ = Kind::Quadratic;
    std::optional<Polynomial> poly_;    // g for RelaxedNewton / EmbeddedMarkov
    std::optional<Polynomial> dpoly_;   // g'
    std::optional<Polynomial> ddpoly_;  // g'' (RelaxedNewton, degree >= 2)
    std::vector<Polynomial> permuters_;
    std::vector<Polynomial> dpermuters_;
    int unity_order_ = 0;
    std::vector<int> rotation_exponents_;
    std::vector<cplx> finite_points_;
};

}  // namespace stochnewton
