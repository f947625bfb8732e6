#pragma once

namespace depgeo::tol {

// Default tolerances. Every operation that checks one of these takes it as a
// defaulted parameter, so callers can override per call.

inline constexpr double orthonormality = 1e-12;   // ||Q^T Q - I||_max at construction
inline constexpr double group_identity = 1e-12;   // identity / inverse laws
inline constexpr double screw_recompose = 1e-10;  // screw decomposition round trip
inline constexpr double screw_orthogonal = 1e-10; // plane/drift orthogonality
inline constexpr double unitary = 1e-10;          // ||P* P - I||_max
inline constexpr double diag_residual = 1e-9;     // off-diagonal mass after conjugation
inline constexpr double commutation = 1e-10;      // ||AB - BA||_max
inline constexpr double motion_commute = 1e-9;    // phi_x psi_y = psi_y phi_x as motions
inline constexpr double anchor_fit = 1e-9;        // fit_motion / locate residuals
inline constexpr double congruence = 1e-9;        // pairwise distance agreement
inline constexpr double general_position = 1e-8;  // Cayley-Menger vs diameter^(2k)
inline constexpr double hull_rank = 1e-8;         // relative singular value cutoff
inline constexpr double hull_embed = 1e-9;        // off-hull residual
inline constexpr double homomorphism = 1e-8;      // f(xy) vs f(x)f(y)
inline constexpr double rate_merge = 1e-9;        // equal-rate / equal-kappa merge
inline constexpr double zero_radius = 1e-12;      // rotation radius treated as zero
inline constexpr double zero_rate = 1e-12;        // rotation rate treated as zero
inline constexpr double weight_drop = 1e-7;       // recovered weights below this are dropped
inline constexpr double hankel_rank = 1e-7;       // relative SVD cutoff for model order
inline constexpr double profile_equal = 1e-9;     // profiles_equal grid deviation
inline constexpr double profile_identity = 1e-8;  // profile vs sampled curve
inline constexpr double recover_rel = 1e-6;       // relative recovery residual
inline constexpr double dep = 1e-9;               // DEP test gap

}  // namespace depgeo::tol
