#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "depgeo/errors.hpp"
#include "depgeo/tolerances.hpp"

namespace depgeo {

struct ChordTerm {
    double kappa;   // rotation frequency, > 0
    double weight;  // rotation radius, > 0
};

/// Coefficients of a chord-profile function
///   C(r) = (r lambda)^2 + sum_k weight_k^2 (2 - 2 cos(r kappa_k)),
/// the squared distance |h(0) - h(r)|^2 along a generalized helix.
/// Terms are kept canonical: kappa strictly increasing, frequencies closer
/// than `merge_tol` merged with root-sum-square weights.
class ChordCoeffs {
public:
    ChordCoeffs(double lambda, std::vector<ChordTerm> terms,
                double merge_tol = tol::rate_merge);

    double lambda() const { return lambda_; }
    const std::vector<ChordTerm>& terms() const { return terms_; }

    double eval_profile(double r) const;  // throws NegativeR for r < 0

    /// Closed-form derivative C^(order)(r), order >= 1. For order >= 3 only
    /// the trigonometric terms survive; for order = 4n+1 the result is
    /// sum_k 2 weight_k^2 kappa_k^order sin(r kappa_k).
    double derivative(double r, int order) const;

    /// Distance between coefficient vectors, used by tests: max over
    /// |lambda| gap, term count mismatch, and per-term kappa/weight gaps.
    double coeff_distance(const ChordCoeffs& other) const;

private:
    double lambda_;
    std::vector<ChordTerm> terms_;
};

/// One term's contribution to C^(order); order 0 means the value itself.
double chord_term_derivative(const ChordTerm& term, double r, int order);

/// Recovers all coefficients from a derivative oracle (r, order) ->
/// C^(order)(r), following the high-order-derivative argument: the dominant
/// frequency is the growth rate of C^(4n+1) in n, its weight the limiting
/// amplitude, and subtracting the recovered term exposes the next one.
/// The n-sequence starts at 2 and is extended until the growth-rate
/// estimate stabilizes (Aitken-extrapolated); recovered coefficients must
/// reproduce the oracle's order-(4n+1) values for n in {2,3,4} within
/// `validate_rel`, else NoConvergence.
ChordCoeffs recover_via_derivatives(
    const std::function<double(double, int)>& oracle, double kappa_cap,
    const std::vector<double>& grid, double validate_rel = tol::recover_rel);

/// Recovers coefficients from uniform samples (r_j, C(r_j)), r_j = j*delta.
/// Second central differences cancel the quadratic part exactly, leaving a
/// constant plus cosines; frequencies come from an ESPRIT step on a Hankel
/// matrix of the differences, weights and lambda from least squares against
/// the model. Requires all kappa < pi/delta.
/// Throws TooFewSamples or Aliasing (residual not reducible).
ChordCoeffs recover_from_samples(
    const std::vector<std::pair<double, double>>& samples, int max_terms,
    double rel_tol = tol::recover_rel, double rank_tol = tol::hankel_rank,
    double weight_floor = tol::weight_drop);

/// True iff the two profiles deviate by at most `tol` on a uniform grid of
/// `grid_n` points over [0, r_max].
bool profiles_equal(const ChordCoeffs& c1, const ChordCoeffs& c2, double r_max,
                    int grid_n, double tol = tol::profile_equal);

}  // namespace depgeo
