#pragma once

#include <array>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "depgeo/chord.hpp"
#include "depgeo/helix.hpp"

namespace depgeo {

/// Candidate map R^2 -> R^n of the form h(x,y) = phi_x(psi_y(z)) built from
/// two commuting one-parameter groups and a base point. Construction checks
/// that the groups commute as motions on a sample grid of (x, y).
class ProductMap {
public:
    ProductMap(OneParamGroup phi, OneParamGroup psi, Vec z,
               double matrix_tol = tol::commutation,
               double motion_tol = tol::motion_commute);

    int dim() const { return static_cast<int>(z_.size()); }
    const OneParamGroup& phi() const { return phi_; }
    const OneParamGroup& psi() const { return psi_; }
    const Vec& z() const { return z_; }

    /// h(x, y) = phi_x(psi_y(z)).
    Vec eval(double x, double y) const;

    double matrix_commute_residual() const { return matrix_resid_; }
    double motion_commute_residual() const { return motion_resid_; }

private:
    OneParamGroup phi_;
    OneParamGroup psi_;
    Vec z_;
    double matrix_resid_ = 0.0;
    double motion_resid_ = 0.0;
};

inline ProductMap build_product_map(OneParamGroup phi, OneParamGroup psi, Vec z) {
    return ProductMap(std::move(phi), std::move(psi), std::move(z));
}

/// Joint unitary diagonalization of both orthogonal-part families:
/// P^{-1} A_x P = diag(e^{i x alpha_j}), P^{-1} B_y P = diag(e^{i y beta_j}).
/// The alphas/betas are rates (from the group generators), not wrapped
/// angles, and conjugate pairs appear together.
struct EigenAngles {
    CMat P;
    Vec alpha;
    Vec beta;
};

EigenAngles eigen_angles(const ProductMap& pm, std::uint64_t seed = 0,
                         double check_tol = tol::diag_residual);

/// Chord profile of the map along direction gamma, built geometrically from
/// the combined one-parameter group r -> phi_{r cos g} o psi_{r sin g}:
/// lambda from the axis component of the translational velocity, one term
/// per distinct rotation rate with weight the distance from z to that
/// rotation's fixed subspace.
struct DirectionProfile {
    double gamma;
    ChordCoeffs coeffs;
    std::vector<double> kappa_set;

    double lambda() const { return coeffs.lambda(); }
};

DirectionProfile direction_profile(const ProductMap& pm, double gamma);

/// A quadruple with |x-y| = |z-w| whose image distances disagree.
struct DepQuadruple {
    Eigen::Vector2d x, y, z, w;
    double domain_distance;
    double image_gap;
};

struct DepVerdict {
    bool pass;
    std::optional<DepQuadruple> counterexample;
    int trials;
    double tol;
    std::uint64_t seed;
};

using PlaneMap = std::function<Vec(double, double)>;

/// Randomized search for equal-domain-distance quadruples with unequal
/// image distances. Segments are placed with exactly equal lengths; the
/// verdict is deterministic given the seed.
DepVerdict dep_test(const PlaneMap& map, const std::array<double, 2>& box,
                    int trials, double tol, std::uint64_t seed);

/// Estimates sigma as the median distance ratio over sampled pairs and
/// accepts iff every pair matches |map(p)-map(q)| = sigma |p-q| within tol.
std::optional<double> similarity_check(const PlaneMap& map,
                                       const std::array<double, 2>& box,
                                       int samples, double tol,
                                       std::uint64_t seed = 0);

struct SimilarityCertificate {
    double sigma;
    bool constant_map;
    double lambda_spread;   // max-min of lambda(gamma) over the grid
    double checked_sigma;   // from similarity_check
    int dep_trials;
};

struct DepViolation {
    double gamma1;
    double gamma2;
    double r;
    DepQuadruple witness;
};

struct TheoremCertificate {
    std::variant<SimilarityCertificate, DepViolation> result;
    std::vector<DirectionProfile> profiles;

    bool is_similarity() const {
        return std::holds_alternative<SimilarityCertificate>(result);
    }
};

struct TheoremOptions {
    int random_gammas = 8;
    std::uint64_t seed = 0;
    double tol = tol::dep;
    int dep_trials = 10000;
    std::array<double, 2> box{-5.0, 5.0};
};

/// Decides the map's fate: all direction profiles linear with a common
/// slope -> SimilarityCertificate (cross-checked by dep_test and
/// similarity_check); any profile difference across directions -> a
/// DepViolation whose quadruple is verified on the map itself to violate
/// DEP by more than 10x tol.
TheoremCertificate theorem_witness(const ProductMap& pm,
                                   const std::vector<double>& r_grid,
                                   const std::vector<double>& gamma_grid,
                                   const TheoremOptions& opts = {});

}  // namespace depgeo
