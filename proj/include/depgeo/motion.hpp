#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "depgeo/errors.hpp"
#include "depgeo/tolerances.hpp"

namespace depgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// A rigid motion of R^n: v -> Q v + t with Q orthogonal. Determinant -1 is
/// allowed (the full group of self-isometries), only the one-parameter
/// groups in helix.hpp are restricted to the identity component.
class Motion {
public:
    Motion(Mat Q, Vec t, double ortho_tol = tol::orthonormality);

    static Motion identity(int dim);
    static Motion translation(const Vec& t);
    /// Rotation by `angle` in the e1-e2 plane of R^dim (dim >= 2).
    static Motion plane_rotation(int dim, double angle);

    int dim() const { return static_cast<int>(t_.size()); }
    const Mat& Q() const { return Q_; }
    const Vec& t() const { return t_; }

    Vec apply(const Vec& v) const;

    double orthogonality_residual() const;

private:
    Mat Q_;
    Vec t_;
};

/// Group law: apply(compose(a, b), v) = apply(a, apply(b, v)).
/// The orthogonal part is re-orthonormalized (polar projection) so long
/// composition chains stay within the construction invariant.
Motion compose(const Motion& a, const Motion& b);
Motion inverse(const Motion& m);

/// Nearest orthogonal matrix in Frobenius norm (polar factor, keeps the
/// sign of the determinant).
Mat polar_orthogonal(const Mat& M);

/// Max entrywise deviation between two motions (both Q and t blocks).
double motion_distance(const Motion& a, const Motion& b);

/// Cayley-Menger determinant of a point set (bordered determinant of
/// squared pairwise distances). Zero iff the points are affinely dependent.
double cayley_menger(const std::vector<Vec>& pts);

/// Scale-aware general position test for k+1 points spanning a k-simplex:
/// |CM| must exceed `scale_tol` * diameter^(2k).
bool in_general_position(const std::vector<Vec>& pts,
                         double scale_tol = tol::general_position);

/// Multilateration: the unique point at the given distances from n+1
/// affinely independent anchors in R^n. Subtracts the first distance
/// equation from the rest, solves the resulting linear system, then checks
/// every original equation.
/// Throws DegenerateAnchors or Unrealizable (inconsistent distances).
Vec locate_from_distances(const std::vector<Vec>& anchors, const Vec& dists,
                          double fit_tol = tol::anchor_fit,
                          double gp_tol = tol::general_position);

/// The unique motion sending src_i -> dst_i for n+1 affinely independent
/// src points whose pairwise distances match dst's. Solved by a linear
/// system on the anchor frame followed by a polar projection.
/// Throws DegenerateAnchors or NotCongruent.
Motion fit_motion(const std::vector<Vec>& src, const std::vector<Vec>& dst,
                  double fit_tol = tol::anchor_fit,
                  double congruence_tol = tol::congruence,
                  double gp_tol = tol::general_position);

/// Canonical form of a motion: rotations in pairwise orthogonal planes,
/// a drift along the fixed subspace, and a point the axis passes through.
/// `reflections` holds directions where Q acts as -1 that cannot be paired
/// into an angle-pi plane; it is empty for any motion in the identity
/// component (and whenever the -1 eigenspace has even dimension).
struct ScrewDecomposition {
    std::vector<Mat> planes;       // n x 2, orthonormal columns
    std::vector<double> angles;    // in (0, pi], sorted ascending
    std::vector<Vec> reflections;  // unit vectors, usually empty
    Vec axis_drift;                // orthogonal to every plane and reflection
    Vec center_offset;             // a point on the fixed/axis subspace
};

ScrewDecomposition screw_decompose(const Motion& m);
Motion screw_recompose(const ScrewDecomposition& s, int dim);

/// Common unitary diagonalization of two commuting orthogonal matrices.
struct CommutingPairDiag {
    CMat P;      // unitary
    CVec eigsA;  // unit modulus
    CVec eigsB;
};

/// Diagonalizes A + eps*B for a random small eps as a normal matrix and
/// verifies; retries with a fresh eps on eigenvalue collision.
/// Throws NotCommuting, or DiagonalizationFailed after repeated retries.
CommutingPairDiag simultaneous_diagonalize(const Mat& A, const Mat& B,
                                           std::uint64_t seed = 0,
                                           double commute_tol = tol::commutation,
                                           double diag_tol = tol::diag_residual,
                                           double unitary_tol = tol::unitary);

/// Norm of the projection of (z - center_offset) onto an orthonormal
/// 2-frame: the distance from z to the affine (n-2)-dimensional subspace
/// fixed by a rotation in that plane about center_offset.
double distance_to_fixed_subspace(const Mat& plane, const Vec& center_offset,
                                  const Vec& z);

}  // namespace depgeo
