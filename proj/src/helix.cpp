#include "depgeo/helix.hpp"

#include <algorithm>
#include <cmath>

namespace depgeo {

OneParamGroup::OneParamGroup(Motion k, std::vector<double> rates, Vec drift)
    : k_(std::move(k)), k_inv_(inverse(k_)), rates_(std::move(rates)),
      drift_(std::move(drift)) {
    const int n = static_cast<int>(drift_.size());
    if (k_.dim() != n)
        throw DimensionMismatch("OneParamGroup: conjugator dim != drift dim");
    const int s = static_cast<int>(rates_.size());
    if (2 * s > n)
        throw TooManyPlanes("OneParamGroup: 2*len(rates) exceeds dimension");
    for (double a : rates_)
        if (!(a > 0.0))
            throw BadRates("OneParamGroup: rates must be positive", a);
    for (int j = 0; j < 2 * s; ++j)
        if (std::abs(drift_[j]) > 0.0)
            throw DriftNotOrthogonal(
                "OneParamGroup: drift must vanish on rotated coordinates",
                std::abs(drift_[j]));
}

Motion OneParamGroup::eval(double x) const {
    const int n = dim();
    Mat D = Mat::Identity(n, n);
    for (size_t i = 0; i < rates_.size(); ++i) {
        const double c = std::cos(x * rates_[i]), s = std::sin(x * rates_[i]);
        const int j = static_cast<int>(2 * i);
        D(j, j) = c;
        D(j, j + 1) = -s;
        D(j + 1, j) = s;
        D(j + 1, j + 1) = c;
    }
    Motion inner(D, x * drift_);
    return compose(k_inv_, compose(inner, k_));
}

Vec OneParamGroup::eval_apply(double x, const Vec& v) const {
    Vec w = k_.apply(v);
    for (size_t i = 0; i < rates_.size(); ++i) {
        const double c = std::cos(x * rates_[i]), s = std::sin(x * rates_[i]);
        const int j = static_cast<int>(2 * i);
        const double w0 = w[j], w1 = w[j + 1];
        w[j] = c * w0 - s * w1;
        w[j + 1] = s * w0 + c * w1;
    }
    w += x * drift_;
    return k_inv_.apply(w);
}

Vec OneParamGroup::curve_point(const Vec& a, double x) const {
    return eval_apply(x, a);
}

ChordCoeffs OneParamGroup::curve_chord_coeffs(const Vec& a) const {
    const Vec w = k_.apply(a);
    std::vector<ChordTerm> terms;
    for (size_t i = 0; i < rates_.size(); ++i) {
        const double radius = std::hypot(w[2 * i], w[2 * i + 1]);
        if (radius > tol::zero_radius)
            terms.push_back({rates_[i], radius});
    }
    // ChordCoeffs merges equal rates by root-sum-square.
    return ChordCoeffs(drift_.norm(), std::move(terms));
}

std::vector<double> OneParamGroup::canonical_rates() const {
    std::vector<double> r = rates_;
    std::sort(r.begin(), r.end());
    return r;
}

Mat OneParamGroup::generator() const {
    const int n = dim();
    Mat G = Mat::Zero(n, n);
    for (size_t i = 0; i < rates_.size(); ++i) {
        const int j = static_cast<int>(2 * i);
        G(j, j + 1) = -rates_[i];
        G(j + 1, j) = rates_[i];
    }
    return k_.Q().transpose() * G * k_.Q();
}

Vec OneParamGroup::drift_velocity() const {
    const int n = dim();
    Mat G = Mat::Zero(n, n);
    for (size_t i = 0; i < rates_.size(); ++i) {
        const int j = static_cast<int>(2 * i);
        G(j, j + 1) = -rates_[i];
        G(j + 1, j) = rates_[i];
    }
    return k_.Q().transpose() * (drift_ + G * k_.t());
}

}  // namespace depgeo
