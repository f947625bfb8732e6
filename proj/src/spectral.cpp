#include "spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace depgeo::detail {

namespace {

// Stable sort of eigenpairs for deterministic output.
std::vector<int> sorted_indices(const CVec& eigs) {
    std::vector<int> idx(eigs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (eigs[a].real() != eigs[b].real()) return eigs[a].real() > eigs[b].real();
        return eigs[a].imag() > eigs[b].imag();
    });
    return idx;
}

}  // namespace

NormalEigen normal_eigen(const CMat& M, double cluster_tol) {
    Eigen::ComplexEigenSolver<CMat> es(M);
    if (es.info() != Eigen::Success)
        throw DiagonalizationFailed("complex eigensolver failed");

    const int n = static_cast<int>(M.rows());
    CVec eigs = es.eigenvalues();
    CMat V = es.eigenvectors();

    std::vector<int> idx = sorted_indices(eigs);

    // Group by distance to a cluster representative, not by sort adjacency:
    // degenerate eigenvalues carry noise in both components, so equal ones
    // need not be neighbors in the sorted order.
    std::vector<std::vector<int>> clusters;
    std::vector<std::complex<double>> reps;
    for (int id : idx) {
        bool placed = false;
        for (size_t c = 0; c < reps.size(); ++c)
            if (std::abs(eigs[id] - reps[c]) <= cluster_tol) {
                clusters[c].push_back(id);
                placed = true;
                break;
            }
        if (!placed) {
            clusters.push_back({id});
            reps.push_back(eigs[id]);
        }
    }

    NormalEigen out;
    out.P.resize(n, n);
    out.eigs.resize(n);

    // Orthonormalize each cluster with a thin QR.
    int pos = 0;
    for (const auto& cluster : clusters) {
        const int k = static_cast<int>(cluster.size());
        CMat block(n, k);
        for (int j = 0; j < k; ++j) block.col(j) = V.col(cluster[j]);
        Eigen::HouseholderQR<CMat> qr(block);
        CMat Qthin = qr.householderQ() * CMat::Identity(n, k);
        for (int j = 0; j < k; ++j) {
            out.P.col(pos + j) = Qthin.col(j);
            out.eigs[pos + j] = eigs[cluster[j]];
        }
        pos += k;
    }
    return out;
}

JointDiag joint_diagonalize(const Mat& A, const Mat& B, std::uint64_t seed,
                            double diag_tol, double unitary_tol) {
    const int n = static_cast<int>(A.rows());
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> dist(0.15, 0.45);

    double best_resid = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double eps = dist(rng);
        CMat M = (A + eps * B).cast<std::complex<double>>();
        NormalEigen ne = normal_eigen(M);

        CMat Da = ne.P.adjoint() * A.cast<std::complex<double>>() * ne.P;
        CMat Db = ne.P.adjoint() * B.cast<std::complex<double>>() * ne.P;
        CMat G = ne.P.adjoint() * ne.P - CMat::Identity(n, n);

        double offdiag = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    offdiag = std::max(offdiag,
                                       std::max(std::abs(Da(i, j)), std::abs(Db(i, j))));
        const double gram = G.cwiseAbs().maxCoeff();

        if (offdiag <= diag_tol && gram <= unitary_tol) {
            JointDiag out;
            out.P = ne.P;
            out.da = Da.diagonal();
            out.db = Db.diagonal();
            out.max_offdiag = offdiag;
            return out;
        }
        best_resid = std::min(best_resid, std::max(offdiag, gram));
    }
    throw DiagonalizationFailed(
        "joint diagonalization did not converge after 8 eps retries", best_resid);
}

RealBlocks real_blocks(const Mat& M, NormalKind kind, double zero_tol) {
    const int n = static_cast<int>(M.rows());
    NormalEigen ne = normal_eigen(M.cast<std::complex<double>>());

    RealBlocks out;
    std::vector<Vec> fixed_cols, flipped_cols;

    // The "value" of an eigenpair: rotation angle for orthogonal matrices
    // (arg of the unit eigenvalue), rate for skew ones (imaginary part).
    auto value_of = [&](std::complex<double> e) {
        return kind == NormalKind::Orthogonal ? std::arg(e) : e.imag();
    };

    // Collect real orthonormal bases for the +1 (fixed) and -1 (flipped)
    // eigenspaces from the complex columns.
    auto real_basis = [&](const std::vector<int>& cols) -> Mat {
        if (cols.empty()) return Mat(n, 0);
        Mat stack(n, 2 * static_cast<int>(cols.size()));
        for (size_t j = 0; j < cols.size(); ++j) {
            stack.col(2 * j) = ne.P.col(cols[j]).real();
            stack.col(2 * j + 1) = ne.P.col(cols[j]).imag();
        }
        Eigen::ColPivHouseholderQR<Mat> qr(stack);
        qr.setThreshold(1e-9);
        const int rank = static_cast<int>(qr.rank());
        Mat Qfull = qr.householderQ() * Mat::Identity(n, rank);
        return Qfull;
    };

    std::vector<int> plus_cols, minus_cols;
    std::vector<bool> used(n, false);
    for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const std::complex<double> e = ne.eigs[j];
        const double v = value_of(e);
        const bool real_eig = std::abs(e.imag()) <= zero_tol;
        if (real_eig && (kind == NormalKind::Skew || e.real() > 0)) {
            plus_cols.push_back(j);   // fixed direction (skew: rate ~ 0)
            used[j] = true;
            continue;
        }
        if (real_eig) {  // orthogonal, eigenvalue -1
            minus_cols.push_back(j);
            used[j] = true;
            continue;
        }
        if (std::abs(v) <= zero_tol) {  // numerically the identity block
            plus_cols.push_back(j);
            used[j] = true;
            continue;
        }
        if (v < 0) continue;  // handled via the conjugate partner

        // v > 0: an oriented plane from w = u + i w2. For unit w with
        // w^T w = 0 the columns sqrt(2)Re(w), sqrt(2)Im(w) are orthonormal.
        used[j] = true;
        // mark the conjugate partner as used
        for (int l = 0; l < n; ++l) {
            if (used[l]) continue;
            if (std::abs(ne.eigs[l] - std::conj(e)) <= 1e-7) {
                used[l] = true;
                break;
            }
        }
        Vec u = std::sqrt(2.0) * ne.P.col(j).real();
        Vec w2 = std::sqrt(2.0) * ne.P.col(j).imag();
        // Clean residual non-orthogonality.
        u.normalize();
        w2 -= u.dot(w2) * u;
        w2.normalize();
        Mat plane(n, 2);
        // With M(Re w) = cos/-sin combo, the motion rotates by -v in frame
        // (Re w, Im w); flip the second leg to report a positive value.
        plane.col(0) = u;
        plane.col(1) = -w2;
        out.planes.push_back(plane);
        out.values.push_back(v);
    }

    // Pair -1 directions into angle-pi planes; a lone leftover becomes a
    // reflection direction.
    Mat minus_basis = real_basis(minus_cols);
    if (kind == NormalKind::Orthogonal && minus_basis.cols() > 0) {
        int c = static_cast<int>(minus_basis.cols());
        int p = 0;
        for (; p + 1 < c; p += 2) {
            Mat plane(n, 2);
            plane.col(0) = minus_basis.col(p);
            plane.col(1) = minus_basis.col(p + 1);
            out.planes.push_back(plane);
            out.values.push_back(M_PI);
        }
        if (p < c) flipped_cols.push_back(minus_basis.col(p));
    }

    out.fixed = real_basis(plus_cols);
    out.flipped = Mat(n, static_cast<int>(flipped_cols.size()));
    for (size_t j = 0; j < flipped_cols.size(); ++j)
        out.flipped.col(static_cast<int>(j)) = flipped_cols[j];

    // Sort planes by value.
    std::vector<int> order(out.planes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return out.values[a] < out.values[b];
    });
    std::vector<Mat> planes;
    std::vector<double> values;
    for (int i : order) {
        planes.push_back(out.planes[i]);
        values.push_back(out.values[i]);
    }
    out.planes = std::move(planes);
    out.values = std::move(values);
    return out;
}

}  // namespace depgeo::detail
