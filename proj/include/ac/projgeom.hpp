#pragma once

#include "ac/boundcheck.hpp"
#include "ac/matcore.hpp"

namespace ac {

/// A common invariant subspace of two projections, of dimension 1 or 2.
struct JordanBlock {
    CMat basis;  ///< orthonormal columns
    CMat P;      ///< basis* P basis
    CMat Q;      ///< basis* Q basis
};

struct JordanDecomposition {
    std::vector<JordanBlock> blocks;
    int dim = 0;

    int count(int block_dim) const;
    /// Reassembles Σ basis·X·basis* from the restrictions.
    CMat reconstruct_P() const;
    CMat reconstruct_Q() const;
};

/// Splits the space into mutually orthogonal blocks invariant under P and Q (principal angles).
JordanDecomposition jordan_blocks(const OrthoProjection& P, const OrthoProjection& Q);

/// Orthonormal basis {p_i} of Ran P with ⟨p_i, Q p_j⟩ = 0 for i ≠ j.
CMat jordan_basis(const OrthoProjection& P, const OrthoProjection& Q);

struct NestResult {
    OrthoProjection F;
    CMat basis;         ///< orthonormal basis of Ran F, E's range first
    double eps = 0.0;   ///< max(‖E F′^⊥‖, ‖F′ G^⊥‖)
    BoundCheck distance;  ///< ‖F − F′‖ ≤ 5ε
    double sandwich_defect = 0.0;  ///< max(‖E − FE‖, ‖F − GF‖)
};

/// Projection F with E ≤ F ≤ G close to F′; requires ε < 1/10.
NestResult nest_projection(const OrthoProjection& E, const OrthoProjection& G, const OrthoProjection& Fp);
/// Same construction without the ε < 1/10 requirement; the distance check is still reported.
NestResult nest_projection_any(const OrthoProjection& E, const OrthoProjection& G, const OrthoProjection& Fp);

struct PositivityResult {
    bool applicable = false;  ///< hypotheses on c, d hold
    bool positive = false;    ///< certified by the comparison matrix and confirmed by the eigensolver
    double min_eigenvalue = 0.0;
    CMat D;                   ///< comparison matrix with M − D diagonal and nonnegative
    CMat G;                   ///< factor with G*G + b_n² e_nn = D
    double identity_residual = 0.0;
    double diagonal_slack = 0.0;  ///< min_i (M − D)_ii
    std::string reason;
};

/// Positivity of a Hermitian tridiagonal M with M_ii ≥ c_i² + d_i², |M_{i,i+1}| ≤ d_i c_{i+1}.
PositivityResult tridiag_positive_test(const CMat& M, const RVec& c, const RVec& d);

struct DecayProfile {
    double C = 0.0;
    double alpha = 0.0;
    double a = 0.0;  ///< min eigenvalue
    double b = 0.0;  ///< max eigenvalue
    std::vector<double> max_by_distance;  ///< max |(A⁻¹)_ij| over |i − j| = k
    double worst_ratio = 0.0;             ///< max over entries of |(A⁻¹)_ij| / (C α^{|i−j|})
};

/// Fits |(A⁻¹)_ij| ≤ C α^{|i−j|} for a tridiagonal positive definite A.
DecayProfile inverse_decay_profile(const CMat& A);

/// Orthonormal basis of the range of an orthogonal projection.
CMat projection_basis(const OrthoProjection& P);

/// Largest entry outside the tridiagonal band.
double off_tridiagonal(const CMat& M);

}  // namespace ac
