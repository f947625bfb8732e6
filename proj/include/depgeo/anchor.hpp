#pragma once

#include <optional>
#include <vector>

#include "depgeo/motion.hpp"

namespace depgeo {

/// A distance-equality-preserving map sampled on a finite monoid carrier.
/// Elements are indices 0..size-1; the product is partial (products falling
/// outside the carrier are simply absent and raise MissingProducts when an
/// operation needs them). For carriers in (R^m, +, 0) the domain points are
/// kept so the DEP property can be checked on samples.
class SampledMonoidMap {
public:
    /// Abstract carrier: explicit product table (entry -1 = product not in
    /// the carrier), unit index, and the image of each element in R^n.
    /// Verifies that the unit is a two-sided identity where defined.
    SampledMonoidMap(Eigen::MatrixXi product_table, int unit,
                     std::vector<Vec> images);

    /// Carrier inside (R^m, +, 0): the product table is built by matching
    /// sums back into the point list (tolerance `match_tol`), the unit must
    /// be present as the zero vector. Checks the DEP property on samples:
    /// equal domain distances (within dep_domain_tol) must give equal image
    /// distances (within dep_image_tol).
    static SampledMonoidMap from_vectors(const std::vector<Vec>& points,
                                         const std::vector<Vec>& images,
                                         double match_tol = 1e-9,
                                         double dep_domain_tol = 1e-12,
                                         double dep_image_tol = tol::anchor_fit);

    int size() const { return static_cast<int>(images_.size()); }
    int unit() const { return unit_; }
    int range_dim() const { return size() ? static_cast<int>(images_[0].size()) : 0; }

    std::optional<int> product(int i, int j) const;
    const Vec& image(int i) const { return images_[i]; }
    const std::vector<Vec>& images() const { return images_; }

    bool has_domain_points() const { return !domain_points_.empty(); }
    const std::vector<Vec>& domain_points() const { return domain_points_; }

    /// Largest image-distance disagreement over carrier pairs with equal
    /// domain distance (R^m carriers only; 0 for abstract carriers).
    double dep_residual(double domain_tol = 1e-12) const;

    /// Copy with new images (used by the degenerate reduction).
    SampledMonoidMap with_images(std::vector<Vec> images) const;

private:
    SampledMonoidMap() = default;
    Eigen::MatrixXi table_;
    int unit_ = 0;
    std::vector<Vec> images_;
    std::vector<Vec> domain_points_;
};

/// n+1 carrier elements whose images are affinely independent, certifying
/// that motions can be reconstructed from anchor correspondences. For maps
/// whose image hull has dimension k < n the frame spans the hull instead
/// (k+1 anchors) and hull_dim reports k.
struct AnchorFrame {
    std::vector<int> anchors;
    std::vector<Vec> anchor_images;
    double certificate;  // Cayley-Menger determinant of the anchor images
    int hull_dim;

    bool full_rank(int n) const { return hull_dim == n; }
};

/// Deterministic greedy volume maximization over the image points: start
/// from the farthest pair, repeatedly add the point farthest from the
/// affine hull of the picks. Throws EmptyCarrier.
AnchorFrame select_frame(const SampledMonoidMap& map,
                         double rank_tol = tol::hull_rank,
                         double gp_tol = tol::general_position);

/// Frame from explicit anchor indices; validates the certificate.
AnchorFrame make_frame(const SampledMonoidMap& map,
                       const std::vector<int>& anchors,
                       double rank_tol = tol::hull_rank,
                       double gp_tol = tol::general_position);

/// The unique motion f_x with f_x(h(x_i)) = h(x*x_i) on the anchor frame.
/// Also checks f_x(h(y)) = h(x*y) for every carrier y whose product with x
/// is present; a violation means the input map is not DEP.
/// Throws MissingProducts, NotCongruent, DegenerateAnchors.
Motion extract_at(const SampledMonoidMap& map, const AnchorFrame& frame, int x,
                  double fit_tol = tol::anchor_fit,
                  double congruence_tol = tol::congruence);

struct PairResidual {
    int x, y;
    double residual;  // ||f_{xy} - f_x o f_y|| (max entrywise)
};

struct HomomorphismReport {
    std::vector<PairResidual> pairs;
    double max_pair_residual = 0.0;
    double max_unit_residual = 0.0;  // |f_x(h(1)) - h(x)| over touched x
    bool passed = false;
};

/// Checks f(x*y) = f(x) o f(y) on the given pairs and h(x) = f_x(h(1)) on
/// every element touched. Degenerate frames are handled by extracting in
/// the hull chart and embedding back. Throws MissingProducts.
HomomorphismReport verify_homomorphism(
    const SampledMonoidMap& map, const AnchorFrame& frame,
    const std::vector<std::pair<int, int>>& pairs,
    double pass_tol = tol::homomorphism,
    double unit_tol = tol::anchor_fit);

/// Affine isometry u -> origin + basis * u from R^k onto a k-dimensional
/// affine subspace of R^n (basis has orthonormal columns).
struct HullIsometry {
    Vec origin;
    Mat basis;  // n x k

    int ambient_dim() const { return static_cast<int>(origin.size()); }
    int hull_dim() const { return static_cast<int>(basis.cols()); }
    Vec apply(const Vec& u) const { return origin + basis * u; }
    Vec chart(const Vec& p) const { return basis.transpose() * (p - origin); }
};

struct DegenerateReduction {
    int k;
    HullIsometry iso;
    SampledMonoidMap reduced;
    double off_hull_residual;
};

/// When the affine hull of the images has dimension k < n, charts the
/// images into R^k through an isometry i with i(h'(x)) = h(x).
/// Throws NotDegenerate when the hull is full-dimensional.
DegenerateReduction reduce_degenerate(const SampledMonoidMap& map,
                                      double rank_tol = tol::hull_rank,
                                      double embed_tol = tol::hull_embed);

/// The embedding G_k -> G_n along a hull isometry: g(m) o i = i o m, acting
/// as the identity on the orthogonal complement of the hull directions.
Motion embed_motion(const HullIsometry& iso, const Motion& m);

}  // namespace depgeo
