#pragma once

#include <vector>

#include "depgeo/chord.hpp"
#include "depgeo/motion.hpp"

namespace depgeo {

/// A continuous one-parameter group of motions x -> f_x in canonical form:
/// conjugate by a motion k, rotate plane span{e_{2i-1}, e_{2i}} at rate
/// rates[i], and drift by x*b where b vanishes on the rotated coordinates.
/// Every continuous homomorphism R -> G_n is of this shape.
class OneParamGroup {
public:
    /// Validates: rates positive, 2*len(rates) <= n, drift zero on rotated
    /// coordinates. Throws BadRates, TooManyPlanes, DriftNotOrthogonal.
    OneParamGroup(Motion k, std::vector<double> rates, Vec drift);

    int dim() const { return static_cast<int>(drift_.size()); }
    const Motion& conjugator() const { return k_; }
    const std::vector<double>& rates() const { return rates_; }
    const Vec& drift() const { return drift_; }

    /// The motion f_x = k^{-1} o (x b + block rotations) o k.
    Motion eval(double x) const;

    /// apply(eval(x), v) without building the motion; O(n^2) for the two
    /// conjugator products, used in the sampling-heavy paths.
    Vec eval_apply(double x, const Vec& v) const;

    /// Point of the generalized helix h(x) = f_x(a).
    Vec curve_point(const Vec& a, double x) const;

    /// Chord profile of the helix through `a`: lambda = |drift|, one term
    /// per distinct rate with weight the root-sum-square radius of k(a) in
    /// the planes rotating at that rate. Zero-radius terms are dropped.
    ChordCoeffs curve_chord_coeffs(const Vec& a) const;

    /// Rates sorted ascending (construction keeps them as given).
    std::vector<double> canonical_rates() const;

    /// Generator pair of the group: d/dx at 0 of the orthogonal part and of
    /// the translation part. The orthogonal parts are exp(x * generator).
    Mat generator() const;
    Vec drift_velocity() const;

private:
    Motion k_;
    Motion k_inv_;
    std::vector<double> rates_;
    Vec drift_;
};

inline OneParamGroup make_group(Motion k, std::vector<double> rates, Vec drift) {
    return OneParamGroup(std::move(k), std::move(rates), std::move(drift));
}

}  // namespace depgeo
