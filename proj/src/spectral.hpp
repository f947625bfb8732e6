#pragma once

// Internal helpers: clustered eigendecompositions of normal matrices.
// Not part of the installed API.

#include <complex>
#include <cstdint>
#include <vector>

#include "depgeo/motion.hpp"

namespace depgeo::detail {

/// Unitary eigendecomposition of a normal matrix: M = P diag(eigs) P*.
/// Eigenvectors belonging to clustered eigenvalues are re-orthonormalized
/// per cluster, so P is unitary even with repeated eigenvalues.
/// Columns are sorted by eigenvalue (descending real, then imaginary part).
struct NormalEigen {
    CMat P;
    CVec eigs;
};

NormalEigen normal_eigen(const CMat& M, double cluster_tol = 1e-7);

/// Joint unitary diagonalization of two commuting normal real matrices via
/// the eps-perturbation trick: diagonalize A + eps*B, verify both conjugates
/// are diagonal, retry with a fresh eps on failure.
struct JointDiag {
    CMat P;
    CVec da;
    CVec db;
    double max_offdiag;  // worst off-diagonal entry over both conjugates
};

JointDiag joint_diagonalize(const Mat& A, const Mat& B, std::uint64_t seed,
                            double diag_tol, double unitary_tol);

/// Invariant-plane extraction for a real normal matrix whose eigenvalues
/// lie on the unit circle (orthogonal) or on the imaginary axis (skew):
/// pairs of conjugate eigenvalues give oriented planes, real eigenvalues
/// give fixed directions (value ~ +1 for orthogonal / ~ 0 for skew) or
/// flipped directions (value ~ -1, orthogonal case only).
struct RealBlocks {
    std::vector<Mat> planes;       // n x 2 orthonormal frames
    std::vector<double> values;    // rotation angle (orthogonal) or rate (skew), > 0
    Mat fixed;                     // n x f orthonormal basis of the fixed space
    Mat flipped;                   // n x q orthonormal basis of the -1 eigenspace
};

enum class NormalKind { Orthogonal, Skew };

RealBlocks real_blocks(const Mat& M, NormalKind kind, double zero_tol);

}  // namespace depgeo::detail
