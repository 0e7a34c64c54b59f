#include "stochnewton/measure.hpp"

#include <cmath>
#include <numbers>

#include "stochnewton/errors.hpp"
#include "stochnewton/rng.hpp"

namespace stochnewton {

LambdaMeasure LambdaMeasure::uniform_disk(double radius, std::uint64_t seed,
                                          cplx center) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw BadConfig("uniform disk radius must be positive");
    if (!(std::abs(center - cplx(1.0, 0.0)) + radius < 1.0))
        throw BadConfig("uniform disk support must stay strictly inside |lambda-1| < 1");
    LambdaMeasure m;
    m.kind_ = Kind::UniformDisk;
    m.center_ = center;
    m.radius_ = radius;
    m.seed_ = seed;
    return m;
}

LambdaMeasure LambdaMeasure::uniform_annulus(double inner, double outer,
                                             std::uint64_t seed) {
    if (!(0.0 <= inner && inner < outer && outer < 1.0))
        throw BadConfig("annulus radii must satisfy 0 <= inner < outer < 1");
    LambdaMeasure m;
    m.kind_ = Kind::UniformAnnulus;
    m.center_ = cplx(1.0, 0.0);
    m.radius_ = outer;
    m.inner_ = inner;
    m.seed_ = seed;
    return m;
}

LambdaMeasure LambdaMeasure::finite_support(std::vector<Atom> atoms,
                                            std::uint64_t seed) {
    if (atoms.empty())
        throw BadConfig("finite-support measure needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.prob > 0.0))
            throw BadConfig("atom probabilities must be positive");
        if (!std::isfinite(a.lambda.real()) || !std::isfinite(a.lambda.imag()))
            throw BadConfig("atom positions must be finite");
        total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw BadConfig("atom probabilities must sum to 1");
    LambdaMeasure m;
    m.kind_ = Kind::FiniteSupport;
    m.atoms_ = std::move(atoms);
    m.seed_ = seed;
    return m;
}

bool LambdaMeasure::supported_in_lambda() const {
    switch (kind_) {
        case Kind::UniformDisk:
            return std::abs(center_ - cplx(1.0, 0.0)) + radius_ < 1.0;
        case Kind::UniformAnnulus:
            return radius_ < 1.0;
        case Kind::FiniteSupport:
            for (const Atom& a : atoms_)
                if (!(std::abs(a.lambda - cplx(1.0, 0.0)) < 1.0)) return false;
            return true;
    }
    return false;
}

bool LambdaMeasure::contains_half_disk() const {
    switch (kind_) {
        case Kind::UniformDisk:
            return std::abs(center_ - cplx(1.0, 0.0)) + 0.5 < radius_;
        case Kind::UniformAnnulus:
            // A proper annulus misses the center of the half disk.
            return inner_ == 0.0 && radius_ > 0.5;
        case Kind::FiniteSupport:
            return false;  // finite sets have empty interior
    }
    return false;
}

double LambdaMeasure::sup_abs() const {
    switch (kind_) {
        case Kind::UniformDisk:
            return std::abs(center_) + radius_;
        case Kind::UniformAnnulus:
            return std::abs(center_) + radius_;
        case Kind::FiniteSupport: {
            double worst = 0.0;
            for (const Atom& a : atoms_)
                worst = std::max(worst, std::abs(a.lambda));
            return worst;
        }
    }
    return 0.0;
}

namespace {

// Potential of the area-uniform unit-mass disk of radius r at distance s
// from its center: log s outside, log r + (s^2 - r^2)/(2 r^2) inside.
double disk_potential(double s, double r) {
    if (s >= r) return std::log(s);
    return std::log(r) + (s * s - r * r) / (2.0 * r * r);
}

}  // namespace

double LambdaMeasure::log_potential(cplx a) const {
    double s = std::abs(a - center_);
    switch (kind_) {
        case Kind::UniformDisk:
            return disk_potential(s, radius_);
        case Kind::UniformAnnulus: {
            // Uniform annulus = (outer disk - inner disk) / annulus area.
            double o2 = radius_ * radius_, i2 = inner_ * inner_;
            if (i2 == 0.0) return disk_potential(s, radius_);
            return (o2 * disk_potential(s, radius_) - i2 * disk_potential(s, inner_)) /
                   (o2 - i2);
        }
        case Kind::FiniteSupport:
            throw UnsupportedKind("log_potential has no closed form for finite-support measures");
    }
    throw UnsupportedKind("unknown measure kind");
}

cplx SampleStream::next() {
    const std::uint64_t pos = position_++;
    const std::uint64_t seed = measure_->seed_base();
    auto u = [&](std::uint64_t dim) {
        return rng::uniform01(seed, run_index_, salt_, pos, dim);
    };

    switch (measure_->kind()) {
        case LambdaMeasure::Kind::UniformDisk: {
            double rho = measure_->radius() * std::sqrt(u(0));
            double theta = 2.0 * std::numbers::pi * u(1);
            return measure_->center() + std::polar(rho, theta);
        }
        case LambdaMeasure::Kind::UniformAnnulus: {
            double i2 = measure_->inner_radius() * measure_->inner_radius();
            double o2 = measure_->radius() * measure_->radius();
            double rho = std::sqrt(i2 + (o2 - i2) * u(0));
            double theta = 2.0 * std::numbers::pi * u(1);
            return measure_->center() + std::polar(rho, theta);
        }
        case LambdaMeasure::Kind::FiniteSupport: {
            double x = u(0);
            double acc = 0.0;
            const auto& atoms = measure_->atoms();
            for (const auto& a : atoms) {
                acc += a.prob;
                if (x < acc) return a.lambda;
            }
            return atoms.back().lambda;
        }
    }
    return cplx(1.0, 0.0);
}

}  // namespace stochnewton
