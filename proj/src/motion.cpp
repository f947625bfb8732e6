#include "depgeo/motion.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "spectral.hpp"

namespace depgeo {

namespace {

double max_abs(const Mat& M) {
    return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

void require_same_dim(int a, int b, const char* what) {
    if (a != b)
        throw DimensionMismatch(std::string(what) + ": dimensions " +
                                std::to_string(a) + " vs " + std::to_string(b));
}

double diameter(const std::vector<Vec>& pts) {
    double d = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, (pts[i] - pts[j]).norm());
    return d;
}

}  // namespace

Motion::Motion(Mat Q, Vec t, double ortho_tol) : Q_(std::move(Q)), t_(std::move(t)) {
    if (Q_.rows() != Q_.cols() || Q_.rows() != t_.size())
        throw DimensionMismatch("Motion: Q must be n x n and t length n");
    const double resid = orthogonality_residual();
    if (resid > ortho_tol)
        throw InvalidInput("Motion: orthogonal part fails Q^T Q = I", resid);
}

Motion Motion::identity(int dim) {
    return Motion(Mat::Identity(dim, dim), Vec::Zero(dim));
}

Motion Motion::translation(const Vec& t) {
    return Motion(Mat::Identity(t.size(), t.size()), t);
}

Motion Motion::plane_rotation(int dim, double angle) {
    if (dim < 2) throw DimensionMismatch("plane_rotation needs dim >= 2");
    Mat Q = Mat::Identity(dim, dim);
    const double c = std::cos(angle), s = std::sin(angle);
    Q(0, 0) = c;
    Q(0, 1) = -s;
    Q(1, 0) = s;
    Q(1, 1) = c;
    return Motion(Q, Vec::Zero(dim));
}

Vec Motion::apply(const Vec& v) const {
    require_same_dim(dim(), static_cast<int>(v.size()), "Motion::apply");
    return Q_ * v + t_;
}

double Motion::orthogonality_residual() const {
    if (dim() == 0) return 0.0;
    return max_abs(Q_.transpose() * Q_ - Mat::Identity(dim(), dim()));
}

Mat polar_orthogonal(const Mat& M) {
    if (M.size() == 0) return M;
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

Motion compose(const Motion& a, const Motion& b) {
    require_same_dim(a.dim(), b.dim(), "compose");
    return Motion(polar_orthogonal(a.Q() * b.Q()), a.Q() * b.t() + a.t());
}

Motion inverse(const Motion& m) {
    return Motion(m.Q().transpose(), -(m.Q().transpose() * m.t()));
}

double motion_distance(const Motion& a, const Motion& b) {
    require_same_dim(a.dim(), b.dim(), "motion_distance");
    if (a.dim() == 0) return 0.0;
    return std::max(max_abs(a.Q() - b.Q()), (a.t() - b.t()).cwiseAbs().maxCoeff());
}

double cayley_menger(const std::vector<Vec>& pts) {
    const int m = static_cast<int>(pts.size());
    if (m == 0) throw EmptyCarrier("cayley_menger of an empty point set");
    if (m == 1) return 1.0;  // 0-simplex, trivially non-degenerate
    Mat B = Mat::Zero(m + 1, m + 1);
    for (int i = 0; i < m; ++i) {
        B(0, i + 1) = 1.0;
        B(i + 1, 0) = 1.0;
        for (int j = 0; j < m; ++j)
            B(i + 1, j + 1) = (pts[i] - pts[j]).squaredNorm();
    }
    return B.determinant();
}

bool in_general_position(const std::vector<Vec>& pts, double scale_tol) {
    const int k = static_cast<int>(pts.size()) - 1;
    if (k <= 0) return k == 0;
    const double diam = diameter(pts);
    if (diam == 0.0) return false;
    return std::abs(cayley_menger(pts)) > scale_tol * std::pow(diam, 2 * k);
}

Vec locate_from_distances(const std::vector<Vec>& anchors, const Vec& dists,
                          double fit_tol, double gp_tol) {
    if (anchors.empty()) throw EmptyCarrier("locate_from_distances: no anchors");
    const int n = static_cast<int>(anchors[0].size());
    if (static_cast<int>(anchors.size()) != n + 1 || dists.size() != n + 1)
        throw DimensionMismatch("locate_from_distances: need n+1 anchors and distances");
    for (const auto& a : anchors)
        require_same_dim(n, static_cast<int>(a.size()), "locate_from_distances");
    for (int i = 0; i <= n; ++i)
        if (dists[i] < 0) throw InvalidInput("locate_from_distances: negative distance");

    if (!in_general_position(anchors, gp_tol)) {
        const double cm = anchors.size() > 1 ? cayley_menger(anchors) : 0.0;
        throw DegenerateAnchors("locate_from_distances: anchors affinely dependent", cm);
    }

    if (n == 0) return anchors[0];

    // |b - a_i|^2 = d_i^2 minus the first equation is linear in b:
    //   2 (a_i - a_0) . b = d_0^2 - d_i^2 + |a_i|^2 - |a_0|^2
    Mat A(n, n);
    Vec rhs(n);
    for (int i = 1; i <= n; ++i) {
        A.row(i - 1) = 2.0 * (anchors[i] - anchors[0]).transpose();
        rhs[i - 1] = dists[0] * dists[0] - dists[i] * dists[i] +
                     anchors[i].squaredNorm() - anchors[0].squaredNorm();
    }
    Vec b = A.colPivHouseholderQr().solve(rhs);

    double resid = 0.0;
    for (int i = 0; i <= n; ++i)
        resid = std::max(resid, std::abs((b - anchors[i]).norm() - dists[i]));
    if (resid > fit_tol)
        throw Unrealizable("locate_from_distances: distances are inconsistent", resid);
    return b;
}

Motion fit_motion(const std::vector<Vec>& src, const std::vector<Vec>& dst,
                  double fit_tol, double congruence_tol, double gp_tol) {
    if (src.empty() || src.size() != dst.size())
        throw DimensionMismatch("fit_motion: need equally many src and dst points");
    const int n = static_cast<int>(src[0].size());
    if (static_cast<int>(src.size()) != n + 1)
        throw DimensionMismatch("fit_motion: need n+1 correspondences in R^n");
    for (const auto& p : src) require_same_dim(n, static_cast<int>(p.size()), "fit_motion src");
    for (const auto& p : dst) require_same_dim(n, static_cast<int>(p.size()), "fit_motion dst");

    if (!in_general_position(src, gp_tol))
        throw DegenerateAnchors("fit_motion: src anchors affinely dependent",
                                src.size() > 1 ? cayley_menger(src) : 0.0);

    double mismatch = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            mismatch = std::max(mismatch, std::abs((src[i] - src[j]).norm() -
                                                   (dst[i] - dst[j]).norm()));
    if (mismatch > congruence_tol)
        throw NotCongruent("fit_motion: src and dst are not congruent", mismatch);

    if (n == 0) return Motion::identity(0);

    Mat S(n, n), D(n, n);
    for (int i = 1; i <= n; ++i) {
        S.col(i - 1) = src[i] - src[0];
        D.col(i - 1) = dst[i] - dst[0];
    }
    // Exact in exact arithmetic; the polar projection removes rounding.
    Mat Q = polar_orthogonal(D * S.colPivHouseholderQr().inverse());
    Vec t = dst[0] - Q * src[0];
    Motion m(Q, t);

    double resid = 0.0;
    for (int i = 0; i <= n; ++i)
        resid = std::max(resid, (m.apply(src[i]) - dst[i]).cwiseAbs().maxCoeff());
    if (resid > fit_tol)
        throw NotCongruent("fit_motion: correspondences admit no rigid motion", resid);
    return m;
}

ScrewDecomposition screw_decompose(const Motion& m) {
    const int n = m.dim();
    ScrewDecomposition out;
    out.axis_drift = Vec::Zero(n);
    out.center_offset = Vec::Zero(n);
    if (n == 0) return out;

    detail::RealBlocks blocks =
        detail::real_blocks(m.Q(), detail::NormalKind::Orthogonal, tol::zero_rate);

    out.planes = blocks.planes;
    out.angles = blocks.values;
    for (int j = 0; j < blocks.flipped.cols(); ++j)
        out.reflections.push_back(blocks.flipped.col(j));

    // Split t into the drift along the fixed space and the rest; the rest
    // has a fixed point c on the moving part: (Q - I) c = -t_perp.
    const Mat& F = blocks.fixed;
    Vec t_fixed = F.cols() > 0 ? Vec(F * (F.transpose() * m.t())) : Vec(Vec::Zero(n));
    Vec t_perp = m.t() - t_fixed;
    out.axis_drift = t_fixed;

    const int moving = n - static_cast<int>(F.cols());
    if (moving > 0) {
        Mat W(n, moving);
        int c = 0;
        for (const auto& plane : out.planes) {
            W.col(c++) = plane.col(0);
            W.col(c++) = plane.col(1);
        }
        for (const auto& r : out.reflections) W.col(c++) = r;
        Mat Qw = W.transpose() * (m.Q() - Mat::Identity(n, n)) * W;
        Vec y = Qw.colPivHouseholderQr().solve(Vec(-W.transpose() * t_perp));
        out.center_offset = W * y;
    }
    return out;
}

Motion screw_recompose(const ScrewDecomposition& s, int dim) {
    Mat Q = Mat::Identity(dim, dim);
    for (size_t i = 0; i < s.planes.size(); ++i) {
        const Mat& p = s.planes[i];
        require_same_dim(dim, static_cast<int>(p.rows()), "screw_recompose");
        const double c = std::cos(s.angles[i]), sn = std::sin(s.angles[i]);
        Mat R2(2, 2);
        R2 << c, -sn, sn, c;
        Q += p * (R2 - Mat::Identity(2, 2)) * p.transpose();
    }
    for (const auto& r : s.reflections) Q -= 2.0 * r * r.transpose();
    Mat Qp = polar_orthogonal(Q);
    Vec t = s.center_offset - Qp * s.center_offset + s.axis_drift;
    return Motion(Qp, t);
}

CommutingPairDiag simultaneous_diagonalize(const Mat& A, const Mat& B,
                                           std::uint64_t seed, double commute_tol,
                                           double diag_tol, double unitary_tol) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw DimensionMismatch("simultaneous_diagonalize: need equal square matrices");
    const double comm = max_abs(A * B - B * A);
    if (comm > commute_tol)
        throw NotCommuting("simultaneous_diagonalize: matrices do not commute", comm);

    detail::JointDiag jd = detail::joint_diagonalize(A, B, seed, diag_tol, unitary_tol);
    CommutingPairDiag out;
    out.P = jd.P;
    out.eigsA = jd.da;
    out.eigsB = jd.db;
    return out;
}

double distance_to_fixed_subspace(const Mat& plane, const Vec& center_offset,
                                  const Vec& z) {
    if (plane.cols() != 2)
        throw DimensionMismatch("distance_to_fixed_subspace: plane must have 2 columns");
    require_same_dim(static_cast<int>(plane.rows()), static_cast<int>(z.size()),
                     "distance_to_fixed_subspace");
    require_same_dim(static_cast<int>(center_offset.size()),
                     static_cast<int>(z.size()), "distance_to_fixed_subspace");
    const double ortho =
        max_abs(plane.transpose() * plane - Mat::Identity(2, 2));
    if (ortho > tol::screw_orthogonal)
        throw InvalidInput("distance_to_fixed_subspace: frame not orthonormal", ortho);
    return (plane.transpose() * (z - center_offset)).norm();
}

}  // namespace depgeo
