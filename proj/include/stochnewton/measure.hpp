#pragma once

#include <cstdint>
#include <vector>

#include "stochnewton/polynomial.hpp"

namespace stochnewton {

// Probability measure on the relaxation parameter plane.  The disk and
// annulus kinds are centered at 1 inside Lambda = {|lambda - 1| < 1};
// finite-support measures may place atoms anywhere in the plane (the
// example families need that), and supported_in_lambda() reports whether
// the almost-sure-convergence hypotheses can hold for a given instance.
class LambdaMeasure {
public:
    enum class Kind { UniformDisk, FiniteSupport, UniformAnnulus };

    struct Atom {
        cplx lambda;
        double prob;
    };

    static LambdaMeasure uniform_disk(double radius, std::uint64_t seed,
                                      cplx center = cplx(1.0, 0.0));
    static LambdaMeasure uniform_annulus(double inner, double outer,
                                         std::uint64_t seed);
    static LambdaMeasure finite_support(std::vector<Atom> atoms,
                                        std::uint64_t seed);

    Kind kind() const { return kind_; }
    double radius() const { return radius_; }
    double inner_radius() const { return inner_; }
    cplx center() const { return center_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::uint64_t seed_base() const { return seed_; }

    // True when every support point lies strictly inside Lambda.
    bool supported_in_lambda() const;

    // True when the interior of the support contains {|lambda - 1| <= 1/2}.
    bool contains_half_disk() const;

    // Largest |lambda| over the support (used by the quadratic classifier).
    double sup_abs() const;

    // Closed-form log potential: integral of log|a - lambda| d tau(lambda).
    // Only disk and annulus measures admit the closed form; other kinds
    // throw UnsupportedKind and callers fall back to Monte Carlo.
    double log_potential(cplx a) const;

private:
    LambdaMeasure() = default;

    Kind kind_ = Kind::UniformDisk;
    cplx center_{1.0, 0.0};
    double radius_ = 0.0;  // outer radius for the annulus
    double inner_ = 0.0;
    std::vector<Atom> atoms_;
    std::uint64_t seed_ = 0;
};

// One reproducible stream of lambda draws.  The n-th draw is a pure
// function of (measure seed, run_index, salt, n); replaying a stream
// yields identical values no matter how work is scheduled.
class SampleStream {
public:
    SampleStream(const LambdaMeasure& measure, std::uint64_t run_index,
                 std::uint64_t salt = 0)
        : measure_(&measure), run_index_(run_index), salt_(salt) {}

    cplx next();

    std::uint64_t run_index() const { return run_index_; }
    std::uint64_t position() const { return position_; }

private:
    const LambdaMeasure* measure_;
    std::uint64_t run_index_;
    std::uint64_t salt_;
    std::uint64_t position_ = 0;
};

}  // namespace stochnewton
