#pragma once

#include "ac/boundcheck.hpp"
#include "ac/matcore.hpp"
#include "ac/smoothing.hpp"

#include <optional>

namespace ac {

struct BoundsConfig {
    double dk_constant = 1.5707963267948966;  ///< general-form Davis–Kahan c
};

/// ‖E_{S1}(A) E_{S2}(B)‖ against ‖A−B‖/δ (sandwich form) or c‖A−B‖/dist.
BoundCheck check_davis_kahan(const CMat& A, const CMat& B, const RealSet& S1, const RealSet& S2,
                             std::optional<double> delta_gap, const BoundsConfig& cfg = {});

/// ‖E_{S1}(D) C E_{S2}(D)‖ ≤ ‖[C,D]‖ / dist(S1,S2)
BoundCheck check_comm_proj(const CMat& C, const CMat& D, const RealSet& S1, const RealSet& S2);

/// ‖(T_ij / (a_i − b_j))‖ ≤ ‖T‖/d when a_i − b_j ≥ d.
BoundCheck schur_divide(const CMat& T, const RVec& a, const RVec& b, double d);

/// c₂ = (2/π)‖ρ̂‖₁ with ρ̂ in the unnormalized transform ∫ρ(x)e^{−ikx}dx.
double spectral_gap_constant(const Profile& rho);

/// ‖[E_{(−∞,a]}(A), B]‖ ≤ c₂‖[A,B]‖/(b−a) for A with no spectrum in (a,b).
BoundCheck check_spectral_gap(const CMat& A, const CMat& B, double a, double b);
BoundCheck check_spectral_gap(const CMat& A, const CMat& B, double a, double b, const Profile& rho);

/// ‖[f(A),B]‖ ≤ C_f ‖[A,B]‖ with C_f = ∫|k f̂|.
BoundCheck fourier_commutator_bound(const Profile& f, const CMat& A, const CMat& B);
BoundCheck fourier_commutator_bound(const std::function<cplx(double)>& f, double C_f, const CMat& A, const CMat& B);

/// Largest coupling of H between B-eigenvalues at distance ≥ Δ.
double finite_range_defect(const CMat& H, const HermitianEig& EB, double Delta);

/// ‖E_{S1}(B) e^{itH} E_{S2}(B)‖ ≤ e^{−dist/Δ} for |t| ≤ dist/(e²Δ).
BoundCheck lieb_robinson_decay(const CMat& H, const CMat& B, double Delta, const RealSet& S1, const RealSet& S2,
                               double t);

/// ‖E_{S1}(B) f(H) E_{S2}(B)‖ against the tail-plus-decay bound.
BoundCheck lieb_robinson_function(const CMat& H, const CMat& B, double Delta, const RealSet& S1, const RealSet& S2,
                                  const Profile& f);

/// ‖[f(H) − f(H′)] E_{S″}(B)‖ with H′ = E_{S′} H E_{S′}.
BoundCheck lieb_robinson_nested(const CMat& H, const CMat& B, double Delta, const RealSet& S_inner,
                                const RealSet& S_outer, const Profile& f);

}  // namespace ac
