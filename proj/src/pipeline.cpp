#include "ac/pipeline.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ac {

namespace {

constexpr double kPi = std::numbers::pi;

void require_contraction(const CMat& X, const char* what) {
    if (X.rows() != X.cols()) throw PreconditionError(std::string(what) + ": matrix not square");
    if (!is_hermitian(X)) throw PreconditionError(std::string(what) + ": matrix not Hermitian");
    if (op_norm(X) > 1 + 1e-10) throw PreconditionError(std::string(what) + ": matrix is not a contraction");
}

void require_unitary(const CMat& U, const char* what) {
    const int n = static_cast<int>(U.rows());
    if (U.cols() != n || op_norm(U.adjoint() * U - CMat::Identity(n, n)) > 1e-10)
        throw PreconditionError(std::string(what) + ": matrix not unitary");
}

Profile averaging_profile(const PipelineConfig& cfg) { return cfg.profile ? *cfg.profile : bump_profile(0.0, 1.0); }

/// Spectral position of each eigenvector: interval index and subinterval index.
struct Placement {
    CMat vectors;
    std::vector<int> interval;
    std::vector<int> sub;
};

struct NewBasis {
    std::vector<CMat> tilde;  ///< B̃_j
    std::vector<IntervalLog> logs;
};

/// W_i per interval from the subspace engine, assembled into the new basis; cyclic joins the last to the first.
NewBasis build_new_basis(const CMat& H, const Placement& pl, int n_cut, int L, bool cyclic, bool exact,
                         const PipelineConfig& cfg) {
    const int n = static_cast<int>(H.rows());
    std::vector<CMat> W(n_cut), Wperp(n_cut);
    NewBasis out;
    for (int i = 0; i < n_cut; ++i) {
        std::vector<int> members;
        for (int k = 0; k < n; ++k)
            if (pl.interval[k] == i) members.push_back(k);
        std::stable_sort(members.begin(), members.end(), [&](int a, int b) { return pl.sub[a] < pl.sub[b]; });
        const int d = static_cast<int>(members.size());
        CMat Bi(n, d);
        for (int t = 0; t < d; ++t) Bi.col(t) = pl.vectors.col(members[t]);
        IntervalLog log;
        log.index = i;
        log.dim = d;
        log.blocks = L;
        CMat Wloc(d, 0);
        if (d == 0) {
            log.trivial = true;
            log.engine = "empty";
        } else if (exact) {
            Wloc = CMat::Identity(d, d);
            log.trivial = true;
            log.engine = "exact";
            log.eps2 = op_norm((CMat::Identity(n, n) - Bi * Bi.adjoint()) * H * Bi);
        } else {
            CMat J = hermitian_part(Bi.adjoint() * H * Bi);
            log.scale = std::max(1.0, op_norm(J));
            J /= log.scale;
            std::vector<CMat> blocks;
            int start = 0;
            for (int j = 0; j < L; ++j) {
                int end = start;
                while (end < d && pl.sub[members[end]] == j) ++end;
                blocks.push_back(CMat::Identity(d, d).middleCols(start, end - start));
                start = end;
            }
            const TridiagonalSystem sys = verify_tridiagonal(J, blocks);
            WCertificate cert;
            try {
                cert = subspace_W(sys, cfg.engine);
            } catch (const PreconditionError& e) {
                throw PreconditionError("interval " + std::to_string(i) + ": " + e.what());
            }
            Wloc = cert.W_nested;
            log.eps2 = cert.eps2 * log.scale;
            log.eps3 = cert.eps3;
            log.eps4 = cert.eps4;
            log.eps5 = cert.eps5;
            log.trivial = cert.trivial;
            log.engine = cert.engine;
        }
        W[i] = Bi * Wloc;
        Wperp[i] = Bi * orth_complement(Wloc, d);
        out.logs.push_back(log);
    }
    if (cyclic) {
        for (int i = 0; i < n_cut; ++i) out.tilde.push_back(hstack({Wperp[i], W[(i + 1) % n_cut]}, n));
    } else {
        out.tilde.push_back(W[0]);
        for (int i = 0; i + 1 < n_cut; ++i) out.tilde.push_back(hstack({Wperp[i], W[i + 1]}, n));
        out.tilde.push_back(Wperp[n_cut - 1]);
    }
    return out;
}

double max_eps2(const std::vector<IntervalLog>& logs) {
    double m = 0.0;
    for (const auto& l : logs) m = std::max(m, l.eps2);
    return m;
}

struct Clusters {
    std::vector<CMat> bases;
    std::vector<double> mids;
    int distinct = 0;
};

/// Distinct eigenvalues of A merged while consecutive gaps are below `gap`.
Clusters cluster_blocks(const CMat& A, double gap, double rel_tol) {
    const HermitianEig E = eig_hermitian(A);
    const int n = E.dim();
    const double tol = rel_tol * std::max(1.0, E.scale);
    Clusters out;
    int start = 0;
    out.distinct = n > 0 ? 1 : 0;
    for (int k = 1; k <= n; ++k) {
        const bool split = k == n || E.values(k) - E.values(k - 1) >= std::max(gap, tol);
        if (k < n && E.values(k) - E.values(k - 1) > tol) ++out.distinct;
        if (!split) continue;
        out.bases.push_back(E.vectors.middleCols(start, k - start));
        out.mids.push_back((E.values(start) + E.values(k - 1)) / 2);
        start = k;
    }
    return out;
}

}  // namespace

double CommuteReport::max_eps2() const { return ac::max_eps2(intervals); }

bool CommuteReport::checks_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass(); });
}

Exponents choose_exponents(double gamma2, bool finite_range_needed) {
    if (!(gamma2 > 0)) throw PreconditionError("choose_exponents: gamma2 must be positive");
    Exponents e;
    e.finite_range = finite_range_needed;
    if (finite_range_needed) {
        e.gamma1 = gamma2 / (1 + gamma2);
        e.gamma0 = 1 / (1 + e.gamma1);
        e.gamma = gamma2 / (1 + 2 * gamma2);
    } else {
        e.gamma1 = gamma2 / (1 + gamma2);
        e.gamma0 = 1.0;
        e.gamma = gamma2 / (1 + gamma2);
    }
    return e;
}

CommuteReport commute_hermitian_pair(const CMat& A, const CMat& B, const PipelineConfig& cfg) {
    require_contraction(A, "commute_hermitian_pair");
    require_contraction(B, "commute_hermitian_pair");
    if (A.rows() != B.rows()) throw PreconditionError("commute_hermitian_pair: dimension mismatch");
    const int n = static_cast<int>(A.rows());
    CommuteReport rep;
    rep.exponents = choose_exponents(cfg.gamma2, true);
    rep.delta = op_norm(commutator(A, B));
    const bool exact = rep.delta <= 1e-12;
    CMat H = A;
    int L = 1;
    if (exact) {
        rep.n_cut = cfg.n_cut_commuting;
        rep.notes.push_back("input commutes; intervals pinch A directly");
    } else {
        rep.Delta = std::pow(rep.delta, rep.exponents.gamma0);
        if (rep.Delta > 1.0) {
            rep.n_cut = 1;
            rep.A_prime = A;
            rep.B_prime = CMat::Zero(n, n);
            rep.distA = 0.0;
            rep.distB = op_norm(B);
            rep.notes.push_back("Delta > 1: no subinterval structure, B' = 0");
            rep.checks.push_back(make_check(rep.distB, 2.0 / rep.n_cut, "distB <= 2/n_cut"));
            return rep;
        }
        const int wanted = static_cast<int>(std::ceil(1 / std::pow(rep.Delta, rep.exponents.gamma1) - 1e-12));
        rep.n_cut = std::max(1, std::min(wanted, static_cast<int>(std::floor(1 / rep.Delta))));
        if (rep.n_cut < wanted) rep.notes.push_back("n_cut capped so every interval holds two subintervals");
        const FiniteRangeResult fr = finite_range(A, B, rep.Delta, averaging_profile(cfg));
        H = fr.H;
        rep.checks.push_back(fr.dist_bound);
        L = static_cast<int>(std::floor(2.0 / rep.n_cut / rep.Delta + 1e-12));
    }
    rep.finite_range_dist = op_norm(A - H);
    const HermitianEig EB = eig_hermitian(B);
    Placement pl{EB.vectors, std::vector<int>(n), std::vector<int>(n)};
    const double len = 2.0 / rep.n_cut;
    for (int k = 0; k < n; ++k) {
        const double x = std::clamp(EB.values(k), -1.0, 1.0);
        pl.interval[k] = std::min(rep.n_cut - 1, static_cast<int>(std::floor((x + 1) / len)));
        const double lo = -1 + len * pl.interval[k];
        pl.sub[k] = std::clamp(static_cast<int>(std::floor((x - lo) / (len / L))), 0, L - 1);
    }
    const NewBasis nb = build_new_basis(H, pl, rep.n_cut, L, false, exact, cfg);
    rep.intervals = nb.logs;
    rep.A_prime = pinch_bases(H, nb.tilde);
    rep.B_prime = CMat::Zero(n, n);
    for (int j = 0; j < static_cast<int>(nb.tilde.size()); ++j)
        rep.B_prime += (-1 + len * j) * nb.tilde[j] * nb.tilde[j].adjoint();
    rep.distA = op_norm(A - rep.A_prime);
    rep.distB = op_norm(B - rep.B_prime);
    rep.comm_residual = op_norm(commutator(rep.A_prime, rep.B_prime));
    const double e2 = rep.max_eps2();
    rep.checks.push_back(make_check(rep.distB, len + 1e-10, "distB <= 2/n_cut"));
    rep.checks.push_back(make_check(op_norm(H - rep.A_prime), 2 * e2 + 1e-10, "|H - H'| <= 2 max eps2"));
    rep.checks.push_back(make_check(rep.distA, rep.finite_range_dist + 2 * e2 + 1e-10, "distA <= |A-H| + 2 max eps2"));
    rep.checks.push_back(make_check(rep.comm_residual, 1e-10 * n, "[A',B'] = 0"));
    rep.references.push_back({"midpoint distB alternative", len / 2});
    return rep;
}

CommuteReport cheap_commute(const CMat& A, const CMat& B, const PipelineConfig& cfg) {
    require_contraction(A, "cheap_commute");
    require_contraction(B, "cheap_commute");
    if (A.rows() != B.rows()) throw PreconditionError("cheap_commute: dimension mismatch");
    const int n = static_cast<int>(A.rows());
    CommuteReport rep;
    rep.delta = op_norm(commutator(A, B));
    const double root = std::sqrt(rep.delta);
    const Clusters cl = cluster_blocks(A, std::sqrt(2.0) * root, cfg.cluster_tol);
    const int m = cl.distinct;
    rep.A_prime = CMat::Zero(n, n);
    for (std::size_t k = 0; k < cl.bases.size(); ++k) rep.A_prime += cl.mids[k] * cl.bases[k] * cl.bases[k].adjoint();
    rep.B_prime = pinch_bases(B, cl.bases);
    rep.distA = op_norm(A - rep.A_prime);
    rep.distB = op_norm(B - rep.B_prime);
    rep.comm_residual = op_norm(commutator(rep.A_prime, rep.B_prime));
    const double bound = m / std::sqrt(2.0) * root;
    rep.checks.push_back(make_check(rep.distA, bound + 1e-10, "distA <= (m/sqrt2) delta^{1/2}"));
    rep.checks.push_back(make_check(rep.distB, bound + 1e-10, "distB <= (m/sqrt2) delta^{1/2}"));
    rep.checks.push_back(make_check(rep.comm_residual, 1e-10 * std::max(1, n), "[A',B'] = 0"));
    rep.references.push_back({"distinct eigenvalues", double(m)});
    rep.references.push_back({"blocks", double(cl.bases.size())});
    rep.references.push_back({"Pearcy-Shields ((m-1) delta/2)^{1/2}", std::sqrt((m - 1) * rep.delta / 2)});
    return rep;
}

CommuteReport three_hermitian(const CMat& A, const CMat& B, const CMat& C, const PipelineConfig& cfg) {
    require_contraction(A, "three_hermitian");
    require_contraction(B, "three_hermitian");
    require_contraction(C, "three_hermitian");
    if (A.rows() != B.rows() || A.rows() != C.rows()) throw PreconditionError("three_hermitian: dimension mismatch");
    const int n = static_cast<int>(A.rows());
    CommuteReport rep;
    rep.has_C = true;
    rep.delta = std::max({op_norm(commutator(A, B)), op_norm(commutator(A, C)), op_norm(commutator(B, C))});
    const double dA = std::max(op_norm(commutator(A, B)), op_norm(commutator(A, C)));
    const Clusters cl = cluster_blocks(A, std::sqrt(2.0 * dA), cfg.cluster_tol);
    rep.A_prime = CMat::Zero(n, n);
    rep.B_prime = CMat::Zero(n, n);
    rep.C_prime = CMat::Zero(n, n);
    double inner = 0.0;
    for (std::size_t k = 0; k < cl.bases.size(); ++k) {
        const CMat& Q = cl.bases[k];
        rep.A_prime += cl.mids[k] * Q * Q.adjoint();
        const CMat Bk = hermitian_part(Q.adjoint() * B * Q);
        const CMat Ck = hermitian_part(Q.adjoint() * C * Q);
        CommuteReport sub;
        try {
            sub = commute_hermitian_pair(Bk, Ck, cfg);
        } catch (const PreconditionError& e) {
            throw PreconditionError("three_hermitian: block " + std::to_string(k) + ": " + e.what());
        }
        rep.B_prime += Q * sub.A_prime * Q.adjoint();
        rep.C_prime += Q * sub.B_prime * Q.adjoint();
        inner = std::max(inner, sub.distA + sub.distB);
        for (const auto& c : sub.checks) rep.checks.push_back(c);
    }
    rep.distA = op_norm(A - rep.A_prime);
    rep.distB = op_norm(B - rep.B_prime);
    rep.distC = op_norm(C - rep.C_prime);
    rep.comm_residual = std::max({op_norm(commutator(rep.A_prime, rep.B_prime)),
                                  op_norm(commutator(rep.A_prime, rep.C_prime)),
                                  op_norm(commutator(rep.B_prime, rep.C_prime))});
    rep.checks.push_back(make_check(rep.comm_residual, 1e-10 * n, "pairwise commutators vanish"));
    rep.references.push_back({"distinct eigenvalues of A", double(cl.distinct)});
    rep.references.push_back({"blocks", double(cl.bases.size())});
    rep.references.push_back({"max per-block distB + distC", inner});
    return rep;
}

CommuteReport commute_hermitian_unitary(const CMat& A, const CMat& U, const PipelineConfig& cfg) {
    require_contraction(A, "commute_hermitian_unitary");
    require_unitary(U, "commute_hermitian_unitary");
    if (A.rows() != U.rows()) throw PreconditionError("commute_hermitian_unitary: dimension mismatch");
    const int n = static_cast<int>(A.rows());
    CommuteReport rep;
    rep.exponents = choose_exponents(cfg.gamma2, true);
    rep.delta = op_norm(commutator(A, U));
    const bool exact = rep.delta <= 1e-12;
    CMat H = A;
    int L = 1;
    auto give_up = [&]() {
        rep.A_prime = A;
        rep.B_prime = CMat::Identity(n, n);
        rep.distA = 0.0;
        rep.distB = op_norm(U - rep.B_prime);
        rep.comm_residual = 0.0;
        rep.notes.push_back("commutator too large for two subarcs per arc: U' = I");
        return rep;
    };
    if (exact) {
        rep.n_cut = cfg.n_cut_commuting;
        rep.notes.push_back("input commutes; arcs pinch A directly");
    } else {
        rep.Delta = std::pow(rep.delta, rep.exponents.gamma0);
        if (rep.Delta >= std::sqrt(2.0)) return give_up();
        const double phi = 2 * std::asin(rep.Delta / std::sqrt(2.0));
        const int wanted = static_cast<int>(std::ceil(1 / std::pow(rep.Delta, rep.exponents.gamma1) - 1e-12));
        const int cap = static_cast<int>(std::floor(kPi / phi));
        if (cap < 2) return give_up();
        rep.n_cut = std::clamp(wanted, 2, cap);
        if (rep.n_cut != wanted) rep.notes.push_back("n_cut adjusted to [2, pi/phi]");
        const FiniteRangeResult fr = finite_range_normal(A, U, rep.Delta, averaging_profile(cfg));
        H = fr.H;
        rep.checks.push_back(fr.dist_bound);
        L = static_cast<int>(std::floor(2 * kPi / rep.n_cut / phi + 1e-12));
    }
    rep.finite_range_dist = op_norm(A - H);
    const JointEig je = joint_eigenbasis({hermitian_part(U), CMat((U - U.adjoint()) / cplx(0.0, 2.0))});
    Placement pl{je.vectors, std::vector<int>(n), std::vector<int>(n)};
    const double arc = 2 * kPi / rep.n_cut;
    for (int k = 0; k < n; ++k) {
        const double ang = std::atan2(je.values[1](k), je.values[0](k));
        pl.interval[k] = std::clamp(static_cast<int>(std::floor((ang + kPi) / arc)), 0, rep.n_cut - 1);
        const double lo = -kPi + arc * pl.interval[k];
        pl.sub[k] = std::clamp(static_cast<int>(std::floor((ang - lo) / (arc / L))), 0, L - 1);
    }
    const NewBasis nb = build_new_basis(H, pl, rep.n_cut, L, true, exact, cfg);
    rep.intervals = nb.logs;
    rep.A_prime = pinch_bases(H, nb.tilde);
    rep.B_prime = CMat::Zero(n, n);
    for (int j = 0; j < rep.n_cut; ++j)
        rep.B_prime += std::polar(1.0, -kPi + arc * (j + 1)) * nb.tilde[j] * nb.tilde[j].adjoint();
    rep.distA = op_norm(A - rep.A_prime);
    rep.distB = op_norm(U - rep.B_prime);
    rep.comm_residual = op_norm(commutator(rep.A_prime, rep.B_prime));
    const double e2 = rep.max_eps2();
    rep.checks.push_back(make_check(rep.distB, 2 * std::abs(std::polar(1.0, arc) - 1.0) + 1e-10,
                                    "distU <= 2|e^{i arc} - 1|"));
    rep.checks.push_back(make_check(op_norm(H - rep.A_prime), 2 * e2 + 1e-10, "|H - H'| <= 2 max eps2"));
    rep.checks.push_back(make_check(rep.distA, rep.finite_range_dist + 2 * e2 + 1e-10, "distA <= |A-H| + 2 max eps2"));
    rep.checks.push_back(make_check(rep.comm_residual, 1e-10 * n, "[A',U'] = 0"));
    rep.checks.push_back(make_check(op_norm(rep.B_prime.adjoint() * rep.B_prime - CMat::Identity(n, n)), 1e-10,
                                    "U' unitary"));
    return rep;
}

CMat cayley_g(const CMat& V) {
    const int n = static_cast<int>(V.rows());
    const CMat I = CMat::Identity(n, n);
    Eigen::PartialPivLU<CMat> lu(I - V);
    return hermitian_part(cplx(0.0, 1.0) * (I + V) * lu.inverse());
}

CMat cayley_f(const CMat& W) {
    const int n = static_cast<int>(W.rows());
    const CMat I = CMat::Identity(n, n);
    const cplx i(0.0, 1.0);
    Eigen::PartialPivLU<CMat> lu(W + i * I);
    return (W - i * I) * lu.inverse();
}

CommuteReport unitary_pair_gap(const CMat& U, const CMat& V, double theta, const PipelineConfig& cfg) {
    require_unitary(U, "unitary_pair_gap");
    require_unitary(V, "unitary_pair_gap");
    if (U.rows() != V.rows()) throw PreconditionError("unitary_pair_gap: dimension mismatch");
    if (!(theta > 0 && theta < kPi)) throw PreconditionError("unitary_pair_gap: theta must lie in (0, pi)");
    const int n = static_cast<int>(U.rows());
    const JointEig je = joint_eigenbasis({hermitian_part(V), CMat((V - V.adjoint()) / cplx(0.0, 2.0))});
    std::vector<double> ang(n);
    for (int k = 0; k < n; ++k) ang[k] = std::atan2(je.values[1](k), je.values[0](k));
    std::sort(ang.begin(), ang.end());
    double best_gap = -1.0, centre = 0.0;
    for (int k = 0; k < n; ++k) {
        const double a = ang[k], b = k + 1 < n ? ang[k + 1] : ang[0] + 2 * kPi;
        if (b - a > best_gap) {
            best_gap = b - a;
            centre = (a + b) / 2;
        }
    }
    if (best_gap / 2 < theta - 1e-12)
        throw PreconditionError("unitary_pair_gap: no spectral gap of angular radius theta");
    const cplx rot = std::polar(1.0, -centre);
    const CMat Vr = rot * V;
    CommuteReport rep;
    const CMat W = cayley_g(Vr);
    const double scale = std::max(1.0, op_norm(W));
    const double dUV = op_norm(commutator(U, V));
    rep.delta = dUV;
    rep.checks.push_back(make_check(op_norm(commutator(U, W)), dUV / (1 - std::cos(theta)) + 1e-10,
                                    "|[U,W]| <= |[U,V]|/(1 - cos theta)"));
    const CommuteReport inner = commute_hermitian_unitary(W / scale, U, cfg);
    const CMat Wp = hermitian_part(inner.A_prime * scale);
    const CMat Vp = cayley_f(Wp) / rot;
    rep.A_prime = inner.B_prime;
    rep.B_prime = Vp;
    rep.distA = op_norm(U - rep.A_prime);
    rep.distB = op_norm(V - rep.B_prime);
    rep.n_cut = inner.n_cut;
    rep.Delta = inner.Delta;
    rep.exponents = inner.exponents;
    rep.intervals = inner.intervals;
    rep.comm_residual = op_norm(commutator(rep.A_prime, rep.B_prime));
    for (const auto& c : inner.checks) rep.checks.push_back(c);
    rep.checks.push_back(make_check(rep.distB, 2 * op_norm(W - Wp) + 1e-10, "|V - V'| <= 2|W - W'|"));
    rep.checks.push_back(make_check(rep.comm_residual, 1e-10 * n, "[U',V'] = 0"));
    rep.references.push_back({"detected gap radius", best_gap / 2});
    rep.references.push_back({"|W|", op_norm(W)});
    for (const auto& s : inner.notes) rep.notes.push_back(s);
    return rep;
}

namespace {

bool decreasing_trend(const std::vector<SweepRow>& rows, double SweepRow::*field) {
    if (rows.size() < 2) return true;
    double mx = 0.0, my = 0.0;
    for (const auto& r : rows) {
        mx += std::log(std::max(r.delta, 1e-300));
        my += r.*field;
    }
    mx /= rows.size();
    my /= rows.size();
    double sxy = 0.0;
    for (const auto& r : rows) sxy += (std::log(std::max(r.delta, 1e-300)) - mx) * (r.*field - my);
    return sxy >= -1e-12 && rows.back().*field <= rows.front().*field + 1e-12;
}

}  // namespace

SweepReport sweep(const CMat& A0, const CMat& B0, const CMat& X, const CMat& Y, std::vector<double> scales,
                  const PipelineConfig& cfg) {
    if (scales.empty()) throw PreconditionError("sweep: no scales");
    std::sort(scales.begin(), scales.end(), std::greater<>());
    SweepReport out;
    for (double s : scales) {
        CMat A = hermitian_part(A0 + s * X), B = hermitian_part(B0 + s * Y);
        A /= std::max(1.0, op_norm(A));
        B /= std::max(1.0, op_norm(B));
        const CommuteReport r = commute_hermitian_pair(A, B, cfg);
        out.rows.push_back({s, r.delta, r.Delta, r.n_cut, r.distA, r.distB, r.comm_residual, r.max_eps2()});
    }
    for (std::size_t k = 1; k < out.rows.size(); ++k) {
        if (out.rows[k].distA > out.rows[k - 1].distA + 1e-12) out.distA_nonincreasing = false;
        if (out.rows[k].distB > out.rows[k - 1].distB + 1e-12) out.distB_nonincreasing = false;
    }
    out.distA_trend = decreasing_trend(out.rows, &SweepRow::distA);
    out.distB_trend = decreasing_trend(out.rows, &SweepRow::distB);
    return out;
}

}  // namespace ac
