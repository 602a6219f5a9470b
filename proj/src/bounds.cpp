#include "ac/bounds.hpp"

#include <cmath>
#include <numbers>

namespace ac {

namespace {

const double kE2 = std::exp(2.0);

void require_hermitian(const CMat& A, const char* what) {
    if (!is_hermitian(A)) throw PreconditionError(std::string(what) + ": matrix not Hermitian");
}

double compressed_norm(const CMat& Q1, const CMat& M, const CMat& Q2) {
    if (Q1.cols() == 0 || Q2.cols() == 0) return 0.0;
    return op_norm(Q1.adjoint() * M * Q2);
}

}  // namespace

BoundCheck check_davis_kahan(const CMat& A, const CMat& B, const RealSet& S1, const RealSet& S2,
                             std::optional<double> delta_gap, const BoundsConfig& cfg) {
    require_hermitian(A, "check_davis_kahan");
    require_hermitian(B, "check_davis_kahan");
    if (!S1.disjoint(S2)) throw PreconditionError("check_davis_kahan: sets not disjoint");
    const CMat Q1 = spectral_basis(eig_hermitian(A), S1);
    const CMat Q2 = spectral_basis(eig_hermitian(B), S2);
    const double lhs = Q1.cols() && Q2.cols() ? op_norm(Q1.adjoint() * Q2) : 0.0;
    const double pert = op_norm(A - B);
    if (delta_gap) {
        const double d = *delta_gap;
        const double alpha = S1.inf();
        const double beta = S1.sup();
        if (!(d > 0) || !std::isfinite(alpha) || !std::isfinite(beta))
            throw PreconditionError("check_davis_kahan: sandwich form needs bounded S1 and positive gap");
        if (!S2.disjoint(RealSet::open(alpha - d, beta + d)))
            throw PreconditionError("check_davis_kahan: S2 meets the gap neighbourhood of S1");
        return make_check(lhs, pert / d, "davis_kahan sandwich");
    }
    const double dist = S1.dist(S2);
    if (!(dist > 0)) throw PreconditionError("check_davis_kahan: sets at zero distance");
    return make_check(lhs, cfg.dk_constant * pert / dist, "davis_kahan general");
}

BoundCheck check_comm_proj(const CMat& C, const CMat& D, const RealSet& S1, const RealSet& S2) {
    require_hermitian(D, "check_comm_proj");
    const double dist = S1.dist(S2);
    if (!(dist > 0)) throw PreconditionError("check_comm_proj: zero distance between sets");
    const HermitianEig ED = eig_hermitian(D);
    const double lhs = compressed_norm(spectral_basis(ED, S1), C, spectral_basis(ED, S2));
    return make_check(lhs, op_norm(commutator(C, D)) / dist, "comm_proj");
}

BoundCheck schur_divide(const CMat& T, const RVec& a, const RVec& b, double d) {
    if (T.rows() != a.size() || T.cols() != b.size()) throw PreconditionError("schur_divide: shape mismatch");
    if (!(d > 0)) throw PreconditionError("schur_divide: d must be positive");
    CMat S(T.rows(), T.cols());
    for (int j = 0; j < T.cols(); ++j)
        for (int i = 0; i < T.rows(); ++i) {
            const double gap = a(i) - b(j);
            if (gap < d * (1 - 1e-14)) throw PreconditionError("schur_divide: a_i - b_j >= d violated");
            S(i, j) = T(i, j) / gap;
        }
    return make_check(op_norm(S), op_norm(T) / d, "schur_divide");
}

double spectral_gap_constant(const Profile& rho) { return 2.0 / std::numbers::pi * 2.0 * std::numbers::pi * rho.c1(); }

BoundCheck check_spectral_gap(const CMat& A, const CMat& B, double a, double b) {
    return check_spectral_gap(A, B, a, b, mollifier_profile());
}

BoundCheck check_spectral_gap(const CMat& A, const CMat& B, double a, double b, const Profile& rho) {
    require_hermitian(A, "check_spectral_gap");
    if (!(b > a)) throw PreconditionError("check_spectral_gap: need a < b");
    const HermitianEig EA = eig_hermitian(A);
    for (int i = 0; i < EA.dim(); ++i)
        if (EA.values(i) > a && EA.values(i) < b) throw PreconditionError("check_spectral_gap: spectrum in gap");
    const CMat P = spectral_projection(EA, RealSet::at_most(a)).matrix;
    const double c2 = spectral_gap_constant(rho);
    return make_check(op_norm(commutator(P, B)), c2 * op_norm(commutator(A, B)) / (b - a), "spectral_gap");
}

BoundCheck fourier_commutator_bound(const Profile& f, const CMat& A, const CMat& B) {
    if (f.divergent()) throw PreconditionError("fourier_commutator_bound: divergent C_f");
    require_hermitian(A, "fourier_commutator_bound");
    const CMat fA = apply_real_function(eig_hermitian(A), [&](double x) { return f(x); });
    return make_check(op_norm(commutator(fA, B)), f.c0() * op_norm(commutator(A, B)), "fourier_commutator");
}

BoundCheck fourier_commutator_bound(const std::function<cplx(double)>& f, double C_f, const CMat& A, const CMat& B) {
    if (!std::isfinite(C_f)) throw PreconditionError("fourier_commutator_bound: divergent C_f");
    require_hermitian(A, "fourier_commutator_bound");
    const CMat fA = apply_function(eig_hermitian(A), f);
    return make_check(op_norm(commutator(fA, B)), C_f * op_norm(commutator(A, B)), "fourier_commutator");
}

double finite_range_defect(const CMat& H, const HermitianEig& EB, double Delta) {
    const CMat Ht = EB.vectors.adjoint() * H * EB.vectors;
    double worst = 0.0;
    for (int j = 0; j < EB.dim(); ++j)
        for (int i = 0; i < EB.dim(); ++i)
            if (std::abs(EB.values(i) - EB.values(j)) >= Delta) worst = std::max(worst, std::abs(Ht(i, j)));
    return worst;
}

namespace {

HermitianEig lr_hypotheses(const CMat& H, const CMat& B, double Delta, const char* what) {
    require_hermitian(H, what);
    require_hermitian(B, what);
    if (!(Delta > 0)) throw PreconditionError(std::string(what) + ": Delta must be positive");
    if (op_norm(H) > 1.0 + 1e-12) throw PreconditionError(std::string(what) + ": |H| > 1");
    HermitianEig EB = eig_hermitian(B);
    if (finite_range_defect(H, EB, Delta) > 1e-10 * std::max(1.0, op_norm(H)))
        throw PreconditionError(std::string(what) + ": finite-range hypothesis fails");
    return EB;
}

}  // namespace

BoundCheck lieb_robinson_decay(const CMat& H, const CMat& B, double Delta, const RealSet& S1, const RealSet& S2,
                               double t) {
    const HermitianEig EB = lr_hypotheses(H, B, Delta, "lieb_robinson_decay");
    if (!S1.disjoint(S2)) throw PreconditionError("lieb_robinson_decay: sets not disjoint");
    const double dist = S1.dist(S2);
    if (std::abs(t) > dist / (kE2 * Delta) * (1 + 1e-12))
        throw PreconditionError("lieb_robinson_decay: |t| exceeds dist / v_LR");
    const CMat U = expi(eig_hermitian(H), t);
    const double lhs = compressed_norm(spectral_basis(EB, S1), U, spectral_basis(EB, S2));
    return make_check(lhs, std::exp(-dist / Delta), "lieb_robinson_decay");
}

BoundCheck lieb_robinson_function(const CMat& H, const CMat& B, double Delta, const RealSet& S1, const RealSet& S2,
                                  const Profile& f) {
    const HermitianEig EB = lr_hypotheses(H, B, Delta, "lieb_robinson_function");
    if (!S1.disjoint(S2)) throw PreconditionError("lieb_robinson_function: sets not disjoint");
    if (f.divergent()) throw PreconditionError("lieb_robinson_function: divergent transform");
    const double dist = S1.dist(S2);
    const CMat fH = apply_real_function(eig_hermitian(H), [&](double x) { return f(x); });
    const double lhs = compressed_norm(spectral_basis(EB, S1), fH, spectral_basis(EB, S2));
    const double rhs = f.tail(dist / (kE2 * Delta)) + f.c1() * std::exp(-dist / Delta);
    return make_check(lhs, rhs, "lieb_robinson_function");
}

BoundCheck lieb_robinson_nested(const CMat& H, const CMat& B, double Delta, const RealSet& S_inner,
                                const RealSet& S_outer, const Profile& f) {
    const HermitianEig EB = lr_hypotheses(H, B, Delta, "lieb_robinson_nested");
    const RealSet outside = S_outer.complement();
    if (!S_inner.disjoint(outside)) throw PreconditionError("lieb_robinson_nested: inner set not inside outer set");
    if (f.divergent()) throw PreconditionError("lieb_robinson_nested: divergent transform");
    const double dist = S_inner.dist(outside);
    const CMat P = spectral_projection(EB, S_outer).matrix;
    const CMat Hp = hermitian_part(P * H * P);
    auto fr = [&](double x) { return f(x); };
    const CMat diff = apply_real_function(eig_hermitian(H), fr) - apply_real_function(eig_hermitian(Hp), fr);
    const CMat Q = spectral_basis(EB, S_inner);
    const double lhs = Q.cols() ? op_norm(diff * Q) : 0.0;
    const double rhs = std::isfinite(dist) ? 2 * f.tail(dist / (kE2 * Delta)) + 3 * f.c1() * std::exp(-dist / Delta)
                                           : 0.0;
    return make_check(lhs, rhs, "lieb_robinson_nested");
}

}  // namespace ac
