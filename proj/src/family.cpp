#include "stochnewton/family.hpp"

#include <cmath>
#include <numbers>

#include "stochnewton/errors.hpp"

namespace stochnewton {

namespace {

// Finite values beyond this are treated as the point at infinity; every
// in-scope shape fixes infinity, so the pin is dynamically consistent.
constexpr double kInfinityPin = 1e100;

SphericalPoint pin(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        std::abs(z) > kInfinityPin)
        return SphericalPoint::inf();
    return SphericalPoint::at(z);
}

}  // namespace

GeneratorFamily GeneratorFamily::relaxed_newton(Polynomial g,
                                                std::vector<cplx> roots) {
    if (g.degree() < 2)
        throw BadConfig("relaxed Newton family needs degree >= 2");
    GeneratorFamily f;
    f.kind_ = Kind::RelaxedNewton;
    f.dpoly_ = g.derivative();
    f.ddpoly_ = f.dpoly_->derivative();
    f.poly_ = std::move(g);
    f.finite_points_ = std::move(roots);
    return f;
}

GeneratorFamily GeneratorFamily::quadratic() {
    GeneratorFamily f;
    f.kind_ = Kind::Quadratic;
    f.finite_points_ = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    return f;
}

GeneratorFamily GeneratorFamily::rotation(int n, std::vector<int> exponents) {
    if (n < 2) throw BadConfig("rotation family needs n >= 2");
    if (exponents.empty()) throw BadConfig("rotation family needs at least one branch");
    GeneratorFamily f;
    f.kind_ = Kind::Rotation;
    f.unity_order_ = n;
    f.rotation_exponents_ = std::move(exponents);
    for (int k = 0; k < n; ++k) {
        double t = 2.0 * std::numbers::pi * k / n;
        f.finite_points_.push_back(cplx(std::cos(t), std::sin(t)));
    }
    return f;
}

GeneratorFamily GeneratorFamily::embedded_markov(std::vector<cplx> points,
                                                 std::vector<Polynomial> permuters) {
    if (points.size() < 2)
        throw BadConfig("embedded Markov family needs at least two points");
    if (permuters.empty())
        throw BadConfig("embedded Markov family needs at least one permuter");
    GeneratorFamily f;
    f.kind_ = Kind::EmbeddedMarkov;
    f.poly_ = Polynomial::from_roots(points);
    f.dpoly_ = f.poly_->derivative();
    for (const Polynomial& p : permuters) {
        if (p.degree() < 1) throw BadConfig("permuters must be non-constant");
        f.dpermuters_.push_back(p.derivative());
    }
    f.permuters_ = std::move(permuters);
    f.finite_points_ = std::move(points);

    // Each permuter must reshuffle the point set.
    for (const Polynomial& p : f.permuters_)
        for (cplx x : f.finite_points_) {
            cplx y = p.eval(x);
            double best = 1e9;
            for (cplx q : f.finite_points_) best = std::min(best, std::abs(y - q));
            if (best > 1e-8 * (1.0 + std::abs(y)))
                throw BadConfig("permuter does not map the point set into itself");
        }
    return f;
}

int GeneratorFamily::branch_count() const {
    switch (kind_) {
        case Kind::Rotation: return static_cast<int>(rotation_exponents_.size());
        case Kind::EmbeddedMarkov: return static_cast<int>(permuters_.size());
        default: return 1;
    }
}

const Polynomial& GeneratorFamily::polynomial() const {
    if (!poly_) throw BadConfig("family has no underlying polynomial");
    return *poly_;
}

SphericalPoint GeneratorFamily::apply(int branch, cplx lambda,
                                      SphericalPoint z) const {
    if (z.infinite) return SphericalPoint::inf();
    cplx v = z.value;
    switch (kind_) {
        case Kind::RelaxedNewton: {
            auto [gz, dgz] = poly_->eval_with_deriv(v);
            if (std::abs(gz) == 0.0) return z;
            if (std::abs(dgz) == 0.0) return SphericalPoint::inf();
            return pin(v - lambda * gz / dgz);
        }
        case Kind::Quadratic:
            return pin(lambda * v * (1.0 - v));
        case Kind::Rotation: {
            double t = 2.0 * std::numbers::pi * rotation_exponents_[branch] /
                       unity_order_;
            cplx w(std::cos(t), std::sin(t));
            cplx zn = std::pow(v, unity_order_);
            return pin(w * (v + lambda * (zn - 1.0)));
        }
        case Kind::EmbeddedMarkov: {
            cplx inner = v + lambda * poly_->eval(v);
            return pin(permuters_[branch].eval(inner));
        }
    }
    return z;
}

cplx GeneratorFamily::deriv(int branch, cplx lambda, cplx z) const {
    switch (kind_) {
        case Kind::RelaxedNewton: {
            auto [gz, dgz] = poly_->eval_with_deriv(z);
            if (std::abs(gz) <= 1e-12 * poly_->coeff_scale_at(z)) {
                // Multiplier at a root of order m is 1 - lambda/m; the raw
                // quotient formula is 0/0 there.
                int m = estimate_multiplicity(*poly_, z);
                return 1.0 - lambda / static_cast<double>(m);
            }
            if (std::abs(dgz) == 0.0)
                throw BadConfig("derivative of Newton map at a critical point");
            cplx ddgz = ddpoly_ ? ddpoly_->eval(z) : cplx(0.0);
            return 1.0 - lambda + lambda * gz * ddgz / (dgz * dgz);
        }
        case Kind::Quadratic:
            return lambda * (1.0 - 2.0 * z);
        case Kind::Rotation: {
            double t = 2.0 * std::numbers::pi * rotation_exponents_[branch] /
                       unity_order_;
            cplx w(std::cos(t), std::sin(t));
            return w * (1.0 + lambda * static_cast<double>(unity_order_) *
                                  std::pow(z, unity_order_ - 1));
        }
        case Kind::EmbeddedMarkov: {
            cplx inner = z + lambda * poly_->eval(z);
            cplx dinner = 1.0 + lambda * dpoly_->eval(z);
            return dpermuters_[branch].eval(inner) * dinner;
        }
    }
    return 0.0;
}

double GeneratorFamily::sphere_norm(int branch, cplx lambda,
                                    SphericalPoint z) const {
    if (z.infinite) {
        if (kind_ == Kind::RelaxedNewton) {
            // Repelling fixed point with multiplier (1 - lambda/deg)^{-1}.
            cplx mult = 1.0 - lambda / static_cast<double>(poly_->degree());
            return 1.0 / std::abs(mult);
        }
        // Polynomial shapes of degree >= 2 are superattracting at infinity.
        return 0.0;
    }
    SphericalPoint fz = apply(branch, lambda, z);
    if (fz.infinite)
        throw BadConfig("spherical derivative norm at a pole is out of scope");
    return sphere_deriv_norm(deriv(branch, lambda, z.value), z.value, fz.value);
}

std::vector<SphericalPoint> GeneratorFamily::invariant_points() const {
    if (kind_ == Kind::RelaxedNewton && finite_points_.empty())
        throw NoFiniteInvariantSet(
            "relaxed Newton family was built without its root set");
    std::vector<SphericalPoint> pts;
    pts.reserve(finite_points_.size() + 1);
    for (cplx p : finite_points_) pts.push_back(SphericalPoint::at(p));
    pts.push_back(SphericalPoint::inf());
    return pts;
}

bool GeneratorFamily::is_common_fixed_point(
    SphericalPoint x, const std::vector<GeneratorAtom>& atoms) const {
    for (const GeneratorAtom& a : atoms) {
        SphericalPoint y = apply(a.branch, a.lambda, x);
        if (chordal_distance(x, y) > 1e-9) return false;
    }
    return true;
}

std::string GeneratorFamily::kind_name() const {
    switch (kind_) {
        case Kind::RelaxedNewton: return "relaxed-newton";
        case Kind::Quadratic: return "quadratic";
        case Kind::Rotation: return "rotation";
        case Kind::EmbeddedMarkov: return "embedded-markov";
    }
    return "unknown";
}

}  // namespace stochnewton
