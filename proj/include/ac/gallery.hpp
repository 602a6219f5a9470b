#pragma once

#include "ac/boundcheck.hpp"
#include "ac/matcore.hpp"

#include <utility>

namespace ac {

/// U_n = diag(ω, ω², …, ωⁿ) and the cyclic shift V_n, ω = e^{2πi/n}.
std::pair<CMat, CMat> voiculescu(int n);

struct WindingResult {
    int winding = 0;
    double min_abs = 0.0;  ///< min |γ| over the evaluated path
    int steps = 0;
    bool stable = false;   ///< same integer at steps and 2·steps, path bounded away from 0
    int winding_start = 0; ///< loop r ↦ γ_0(r)
    int winding_end = 0;   ///< loop r ↦ γ_1(r)
};

/// Winding of γ_t(r) = det((1−r)U(t)V(t) + rV(t)U(t)) around the boundary of the (t, r) square,
/// U(t), V(t) the straight-line paths from (U, V) to the commuting pair (U′, V′).
WindingResult winding_number(const CMat& U, const CMat& V, const CMat& Up, const CMat& Vp, int steps = 512);

struct QuarterTridiag {
    CMat J;
    RVec leakage;  ///< χ_{[5/8−1/100, 5/8+1/100]}(J) e₁
    double top_eigenvalue = 0.0;
};

QuarterTridiag quarter_tridiag(int n);

struct QuarterRow {
    int index = 0;         ///< 1-based coordinate
    double scaled = 0.0;   ///< leakage entry divided by the display scale
    double printed = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Leakage against the published table: n = 10 entrywise at 10⁻³, n = 50 tail pattern at 10⁻¹⁵.
struct QuarterComparison {
    int n = 0;
    double scale = 1.0;
    bool has_reference = false;
    std::vector<QuarterRow> rows;
    std::vector<double> tail_ratios;  ///< consecutive ratios over the compared tail
    bool ratios_pass = true;
    bool pass = true;
};

QuarterComparison quarter_comparison(const QuarterTridiag& q);

struct TnConfig {
    long long max_dim = 4096;
};

/// (1/N) Σ_k I^{⊗(N−1−k)} ⊗ A ⊗ I^{⊗k}
CMat tn_lift(const CMat& A, int N, const TnConfig& cfg = {});
/// X^{⊗N}
CMat tensor_power(const CMat& X, int N, const TnConfig& cfg = {});
CMat kron(const CMat& X, const CMat& Y);

struct TnIdentityReport {
    int n = 0;
    int N = 0;
    long long dim = 0;
    double commutator = 0.0;        ///< ‖[T_N A, T_N B] − T_N([A,B])/N‖
    double recursion = 0.0;         ///< ‖T_{N+1}A − (N·T_N A ⊗ I + I^{⊗N} ⊗ A)/(N+1)‖
    double recursion_printed = 0.0; ///< ‖T_{N+1}A − N/(N+1)(T_N A ⊗ I + I ⊗ T_N A)‖
    double covariance = 0.0;        ///< ‖T_N(UAU*) − U^{⊗N} T_N(A) U*^{⊗N}‖
    double permutation = 0.0;       ///< max over adjacent transpositions σ of ‖[T_N A, σ]‖
    BoundCheck norm_upper;          ///< ‖T_N A‖ ≤ ‖A‖
    BoundCheck norm_lower;          ///< ‖A‖/2 ≤ ‖T_N A‖
    double tolerance = 0.0;         ///< 1e−12·dim

    bool pass() const;
};

TnIdentityReport tn_identities(const CMat& A, const CMat& B, int N, Rng& rng, const TnConfig& cfg = {});

/// max(‖UAU* − diag‖, ‖UBU* − diag‖)
double joint_diag_objective(const CMat& A, const CMat& B, const CMat& U);

struct JointDiagResult {
    CMat U;
    double value = 0.0;
    double off_frobenius = 0.0;
    int sweeps = 0;
    bool converged = false;
};

struct JointDiagConfig {
    int max_sweeps = 100;
    double tol = 1e-13;
    bool refine = true;     ///< pairwise descent on the max-norm objective (dim ≤ refine_max_dim)
    int refine_max_dim = 8;
};

/// Jacobi sweeps minimizing the summed squared off-diagonal mass under a shared unitary.
JointDiagResult minimize_joint_diag(const CMat& A, const CMat& B, const JointDiagConfig& cfg = {});

/// |ε(U₀) − ε(U)| ≤ 2(1+n)·max(‖A‖,‖B‖)·‖U₀ − U‖
BoundCheck joint_diag_lipschitz(const CMat& A, const CMat& B, const CMat& U0, const CMat& U);

}  // namespace ac
