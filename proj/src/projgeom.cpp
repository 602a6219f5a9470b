#include "ac/projgeom.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace ac {

namespace {

constexpr double kAngleTol = 1e-11;

void require_projection(const OrthoProjection& P, const char* what) {
    if (!is_projection(P.matrix, 1e-8)) throw PreconditionError(std::string(what) + ": input is not a projection");
}


JordanBlock make_block(const CMat& basis, const CMat& P, const CMat& Q) {
    return {basis, basis.adjoint() * P * basis, basis.adjoint() * Q * basis};
}

}  // namespace

CMat projection_basis(const OrthoProjection& P) {
    if (P.dim() == 0) return CMat(0, 0);
    const HermitianEig E = eig_hermitian(P.matrix);
    return spectral_basis(E, RealSet::at_least(0.5));
}

int JordanDecomposition::count(int block_dim) const {
    int k = 0;
    for (const auto& b : blocks) k += b.basis.cols() == block_dim;
    return k;
}

CMat JordanDecomposition::reconstruct_P() const {
    CMat out = CMat::Zero(dim, dim);
    for (const auto& b : blocks) out += b.basis * b.P * b.basis.adjoint();
    return out;
}

CMat JordanDecomposition::reconstruct_Q() const {
    CMat out = CMat::Zero(dim, dim);
    for (const auto& b : blocks) out += b.basis * b.Q * b.basis.adjoint();
    return out;
}

JordanDecomposition jordan_blocks(const OrthoProjection& P, const OrthoProjection& Q) {
    require_projection(P, "jordan_blocks");
    require_projection(Q, "jordan_blocks");
    if (P.dim() != Q.dim()) throw PreconditionError("jordan_blocks: dimension mismatch");
    const int n = P.dim();
    JordanDecomposition out;
    out.dim = n;
    const CMat Pb = projection_basis(P);
    const CMat Qb = projection_basis(Q);
    const int p = static_cast<int>(Pb.cols());
    const int q = static_cast<int>(Qb.cols());
    std::vector<CMat> used;
    auto add = [&](const CMat& basis) {
        out.blocks.push_back(make_block(basis, P.matrix, Q.matrix));
        used.push_back(basis);
    };
    int paired = 0;
    CMat U = CMat::Identity(p, p), V = CMat::Identity(q, q);
    RVec sigma(0);
    if (p > 0 && q > 0) {
        Eigen::JacobiSVD<CMat> svd(Pb.adjoint() * Qb, Eigen::ComputeFullU | Eigen::ComputeFullV);
        U = svd.matrixU();
        V = svd.matrixV();
        sigma = svd.singularValues();
        paired = static_cast<int>(sigma.size());
    }
    for (int k = 0; k < paired; ++k) {
        const CMat pk = Pb * U.col(k);
        const CMat qk = Qb * V.col(k);
        const double s = std::min(1.0, sigma(k));
        if (s < kAngleTol) {
            add(pk);
            add(qk);
            continue;
        }
        const CMat r = qk - pk * (pk.adjoint() * qk);
        const double rn = r.norm();
        if (rn < kAngleTol) {
            add(pk);
            continue;
        }
        CMat basis(n, 2);
        basis.col(0) = pk;
        basis.col(1) = r / rn;
        add(basis);
    }
    for (int k = paired; k < p; ++k) add(Pb * U.col(k));
    for (int k = paired; k < q; ++k) add(Qb * V.col(k));
    const CMat spanned = hstack(used, n);
    const CMat rest = orth_complement(spanned, n);
    for (int k = 0; k < rest.cols(); ++k) add(rest.col(k));
    return out;
}

CMat jordan_basis(const OrthoProjection& P, const OrthoProjection& Q) {
    require_projection(P, "jordan_basis");
    require_projection(Q, "jordan_basis");
    if (P.dim() != Q.dim()) throw PreconditionError("jordan_basis: dimension mismatch");
    const CMat Pb = projection_basis(P);
    if (Pb.cols() == 0) return Pb;
    const CMat C = Pb.adjoint() * Q.matrix * Pb;
    const HermitianEig E = eig_hermitian(C);
    return Pb * E.vectors;
}

namespace {

NestResult nest_impl(const OrthoProjection& E, const OrthoProjection& G, const OrthoProjection& Fp, bool strict) {
    const int n = E.dim();
    if (G.dim() != n || Fp.dim() != n) throw PreconditionError("nest_projection: dimension mismatch");
    const CMat I = CMat::Identity(n, n);
    if (op_norm(E.matrix - G.matrix * E.matrix) > 1e-10) throw PreconditionError("nest_projection: E is not below G");
    NestResult out;
    out.eps = std::max(op_norm(E.matrix * (I - Fp.matrix)), op_norm(Fp.matrix * (I - G.matrix)));
    if (strict && !(out.eps < 0.1)) throw PreconditionError("nest_projection: eps >= 1/10");
    const CMat Eb = projection_basis(E);
    const CMat K = orth_against(projection_basis(G), Eb);
    CMat extra(n, 0);
    if (K.cols() > 0) {
        const HermitianEig C = eig_hermitian(K.adjoint() * Fp.matrix * K);
        extra = K * spectral_basis(C, RealSet::at_least(0.5, false));
    }
    out.basis = hstack({Eb, extra}, n);
    out.F = projector(out.basis);
    out.distance = make_check(op_norm(out.F.matrix - Fp.matrix), 5 * out.eps, "nest_projection distance");
    out.sandwich_defect = std::max(op_norm(E.matrix - out.F.matrix * E.matrix),
                                   op_norm(out.F.matrix - G.matrix * out.F.matrix));
    return out;
}

}  // namespace

NestResult nest_projection(const OrthoProjection& E, const OrthoProjection& G, const OrthoProjection& Fp) {
    return nest_impl(E, G, Fp, true);
}

NestResult nest_projection_any(const OrthoProjection& E, const OrthoProjection& G, const OrthoProjection& Fp) {
    return nest_impl(E, G, Fp, false);
}

double off_tridiagonal(const CMat& M) {
    double worst = 0.0;
    for (int j = 0; j < M.cols(); ++j)
        for (int i = 0; i < M.rows(); ++i)
            if (std::abs(i - j) >= 2) worst = std::max(worst, std::abs(M(i, j)));
    return worst;
}

PositivityResult tridiag_positive_test(const CMat& M, const RVec& c, const RVec& d) {
    const int n = static_cast<int>(M.rows());
    PositivityResult out;
    if (M.cols() != n || c.size() != n || d.size() != n) throw PreconditionError("tridiag_positive_test: shape mismatch");
    if (n == 0) {
        out.applicable = out.positive = true;
        return out;
    }
    const double scale = std::max(1.0, op_norm(M));
    const double tol = 1e-12 * scale;
    out.min_eigenvalue = eig_hermitian(M).values(0);
    if (!is_hermitian(M)) {
        out.reason = "not Hermitian";
        return out;
    }
    if (off_tridiagonal(M) > tol) {
        out.reason = "not tridiagonal";
        return out;
    }
    for (int i = 0; i < n; ++i) {
        if (c(i) < 0 || d(i) < 0) {
            out.reason = "negative c or d";
            return out;
        }
        if (M(i, i).real() < c(i) * c(i) + d(i) * d(i) - tol) {
            out.reason = "diagonal hypothesis fails at " + std::to_string(i);
            return out;
        }
        if (i + 1 < n && std::abs(M(i, i + 1)) > d(i) * c(i + 1) + tol) {
            out.reason = "off-diagonal hypothesis fails at " + std::to_string(i);
            return out;
        }
    }
    out.applicable = true;
    RVec a = c;
    CVec b = CVec::Zero(n);
    for (int i = 0; i + 1 < n; ++i)
        if (a(i + 1) > 0) b(i) = std::conj(M(i, i + 1)) / a(i + 1);
    b(n - 1) = d(n - 1);
    out.G = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        out.G(i, i) = a(i);
        if (i + 1 < n) out.G(i + 1, i) = b(i);
    }
    out.D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        out.D(i, i) = a(i) * a(i) + std::norm(b(i));
        if (i + 1 < n) {
            out.D(i, i + 1) = std::conj(b(i)) * a(i + 1);
            out.D(i + 1, i) = std::conj(out.D(i, i + 1));
        }
    }
    CMat GG = out.G.adjoint() * out.G;
    GG(n - 1, n - 1) += std::norm(b(n - 1));
    out.identity_residual = op_norm(GG - out.D);
    const CMat R = M - out.D;
    out.diagonal_slack = kInf;
    for (int i = 0; i < n; ++i) out.diagonal_slack = std::min(out.diagonal_slack, R(i, i).real());
    const double off = (R - CMat(R.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    const bool certified = out.diagonal_slack >= -tol && off <= 1e-10 * scale && out.identity_residual <= 1e-10 * scale;
    out.positive = certified && out.min_eigenvalue >= -1e-10 * scale;
    if (!out.positive) out.reason = certified ? "eigensolver disagrees" : "comparison matrix not certified";
    return out;
}

DecayProfile inverse_decay_profile(const CMat& A) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || n == 0) throw PreconditionError("inverse_decay_profile: need a nonempty square matrix");
    if (!is_hermitian(A)) throw PreconditionError("inverse_decay_profile: not Hermitian");
    if (off_tridiagonal(A) > 1e-12 * std::max(1.0, op_norm(A)))
        throw PreconditionError("inverse_decay_profile: not tridiagonal");
    const HermitianEig E = eig_hermitian(A);
    DecayProfile out;
    out.a = E.values(0);
    out.b = E.values(n - 1);
    if (!(out.a > 0)) throw PreconditionError("inverse_decay_profile: not positive definite");
    const CMat inv = apply_real_function(E, [](double x) { return 1.0 / x; });
    out.max_by_distance.assign(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int k = std::abs(i - j);
            out.max_by_distance[k] = std::max(out.max_by_distance[k], std::abs(inv(i, j)));
        }
    const double m0 = out.max_by_distance[0];
    for (int k = 1; k < n; ++k)
        out.alpha = std::max(out.alpha, std::pow(out.max_by_distance[k] / m0, 1.0 / k));
    out.C = m0;
    for (int k = 1; k < n; ++k)
        if (out.max_by_distance[k] > 0) out.C = std::max(out.C, out.max_by_distance[k] / std::pow(out.alpha, k));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double bound = out.C * std::pow(out.alpha, std::abs(i - j));
            if (bound > 0) out.worst_ratio = std::max(out.worst_ratio, std::abs(inv(i, j)) / bound);
            else if (std::abs(inv(i, j)) > 0) out.worst_ratio = kInf;
        }
    return out;
}

}  // namespace ac
