#include "ac/suites.hpp"

#include "ac/bounds.hpp"
#include "ac/gallery.hpp"
#include "ac/projgeom.hpp"
#include "ac/smoothing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

namespace ac {

void SuiteLine::add(const BoundCheck& c) {
    ++trials;
    if (!c.pass()) {
        ++violations;
        if (detail.empty()) detail = c.context;
    }
    worst_slack = std::min(worst_slack, c.slack / std::max(1.0, c.rhs));
}

void SuiteLine::add_residual(double value, double tol) {
    ++trials;
    if (!(value <= tol)) ++violations;
    worst_value = std::max(worst_value, value);
}

int SuiteResult::violations() const {
    int v = 0;
    for (const auto& l : lines) v += l.violations;
    return v;
}

const SuiteLine* SuiteResult::line(const std::string& name) const {
    for (const auto& l : lines)
        if (l.name == name) return &l;
    return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

CMat unit_hermitian(int n, Rng& rng) {
    CMat H = random_hermitian(n, rng);
    return H / std::max(op_norm(H), 1e-300);
}

OrthoProjection random_projection(int n, int rank, Rng& rng) {
    if (rank == 0) return {CMat::Zero(n, n), 0};
    return projector(random_isometry(n, rank, rng));
}

SuiteLine& line(SuiteResult& r, const std::string& name) {
    for (auto& l : r.lines)
        if (l.name == name) return l;
    SuiteLine l;
    l.name = name;
    r.lines.push_back(l);
    return r.lines.back();
}

void finish(SuiteResult& r, Clock::time_point t0) {
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SuiteResult suite_bounds(unsigned long long seed, int trials) {
    const auto t0 = Clock::now();
    SuiteResult r{"bounds", seed, trials, {}, 0.0};
    Rng rng(seed);
    const Profile step = bump_profile(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        {
            const int n = 16;
            const CMat A = unit_hermitian(n, rng);
            const CMat B = A + uniform(rng, 0.0, 0.3) * unit_hermitian(n, rng);
            const double a = uniform(rng, -1.0, 0.5), b = a + uniform(rng, 0.0, 0.5), d = uniform(rng, 0.05, 0.5);
            const RealSet S1 = RealSet::closed(a, b);
            const RealSet S2 = RealSet::at_most(a - d).unite(RealSet::at_least(b + d));
            line(r, "davis_kahan_sandwich").add(check_davis_kahan(A, B, S1, S2, d));
        }
        {
            const int n = 20;
            const CMat C = random_complex(n, n, rng);
            const CMat D = unit_hermitian(n, rng);
            const double x = uniform(rng, -0.8, 0.6), g = uniform(rng, 0.01, 0.4);
            line(r, "comm_proj").add(check_comm_proj(C, D, RealSet::at_most(x), RealSet::at_least(x + g)));
        }
        {
            const int p = uniform_int(rng, 1, 8), q = uniform_int(rng, 1, 8);
            const CMat T = random_complex(p, q, rng);
            const double d = uniform(rng, 0.1, 2.0);
            RVec a(p), b(q);
            for (int i = 0; i < q; ++i) b(i) = uniform(rng, -2.0, 0.0);
            const double top = b.maxCoeff();
            for (int i = 0; i < p; ++i) a(i) = top + d + uniform(rng, 0.0, 2.0);
            line(r, "schur_divide").add(schur_divide(T, a, b, d));
        }
        {
            const int n = 8;
            const CMat A = unit_hermitian(n, rng);
            const CMat B = A + uniform(rng, 0.0, 0.5) * unit_hermitian(n, rng);
            line(r, "fourier_commutator").add(fourier_commutator_bound(step, A, hermitian_part(B)));
        }
        {
            const int n = 10;
            const double a = uniform(rng, -0.6, 0.3), b = a + uniform(rng, 0.1, 0.6);
            RVec ev(n);
            for (int i = 0; i < n; ++i) ev(i) = i % 2 == 0 ? uniform(rng, -1.0, a) : uniform(rng, b, 1.0);
            const CMat Q = random_unitary(n, rng);
            const CMat A = Q * ev.cast<cplx>().asDiagonal() * Q.adjoint();
            const CMat B = unit_hermitian(n, rng);
            line(r, "spectral_gap").add(check_spectral_gap(hermitian_part(A), B, a, b));
        }
    }
    for (double eps : {1e-3, 0.1, 0.7}) {
        CMat D = CMat::Zero(2, 2);
        D(0, 0) = 0.3;
        D(1, 1) = -0.4;
        CMat C = CMat::Zero(2, 2);
        C(0, 1) = C(1, 0) = eps;
        const BoundCheck c = check_comm_proj(C, D, RealSet::point(0.3), RealSet::point(-0.4));
        line(r, "comm_proj_sharpness").add_residual(std::abs(c.lhs - c.rhs), 1e-12);
    }
    finish(r, t0);
    return r;
}

SuiteResult suite_lieb_robinson(unsigned long long seed, int trials) {
    const auto t0 = Clock::now();
    SuiteResult r{"lieb-robinson", seed, trials, {}, 0.0};
    Rng rng(seed);
    const Profile f = bump_profile(0.5, 0.5);
    auto banded = [&](int n, int band) {
        CMat H = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < std::min(n, i + band + 1); ++j) {
                const cplx v = i == j ? cplx(uniform(rng, -1, 1), 0) : cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
                H(i, j) = v;
                H(j, i) = std::conj(v);
            }
        return CMat(H / op_norm(H));
    };
    auto position = [](int n) {
        CMat B = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i) B(i, i) = i + 1.0;
        return B;
    };
    const int n = 40;
    const CMat B = position(n);
    for (int t = 0; t < trials; ++t) {
        const int band = uniform_int(rng, 1, 2);
        const double Delta = band + 1.0;
        const CMat H = banded(n, band);
        const int k = uniform_int(rng, 2, n - 12);
        const int gap = uniform_int(rng, 2, std::min(14, n - k - 1));
        const RealSet S1 = RealSet::at_most(k), S2 = RealSet::at_least(k + gap);
        const double tmax = gap / (std::exp(2.0) * Delta);
        line(r, "decay").add(lieb_robinson_decay(H, B, Delta, S1, S2, uniform(rng, -tmax, tmax)));
        if (t % 25 == 0) {
            double prev = kInf;
            bool mono = true;
            const double tt = 0.5;
            for (int d = 2; d + k < n; ++d) {
                if (tt > d / (std::exp(2.0) * Delta)) continue;
                const BoundCheck c = lieb_robinson_decay(H, B, Delta, S1, RealSet::at_least(k + d), tt);
                if (c.lhs > prev + 1e-12) mono = false;
                prev = c.lhs;
            }
            line(r, "decay_monotone_in_distance").add_residual(mono ? 0.0 : 1.0, 0.0);
        }
        if (t % 10 == 0) {
            const int m = 60;
            const CMat Hm = banded(m, 1);
            const CMat Bm = position(m);
            const int kk = uniform_int(rng, 5, 30);
            line(r, "function").add(
                lieb_robinson_function(Hm, Bm, 2.0, RealSet::at_most(kk), RealSet::at_least(kk + 20), f));
            line(r, "nested").add(lieb_robinson_nested(Hm, Bm, 2.0, RealSet::closed(kk + 10, kk + 15),
                                                       RealSet::closed(kk - 4, kk + 29), f));
        }
    }
    finish(r, t0);
    return r;
}

SuiteResult suite_projections(unsigned long long seed, int trials) {
    const auto t0 = Clock::now();
    SuiteResult r{"projections", seed, trials, {}, 0.0};
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        if (t < 200) {
            const int n = uniform_int(rng, 2, 16);
            const OrthoProjection OP = random_projection(n, uniform_int(rng, 0, n), rng);
            const OrthoProjection OQ = random_projection(n, uniform_int(rng, 0, n), rng);
            const CMat& P = OP.matrix;
            const CMat& Q = OQ.matrix;
            const JordanDecomposition jd = jordan_blocks(OP, OQ);
            const double rec = std::max(op_norm(jd.reconstruct_P() - P), op_norm(jd.reconstruct_Q() - Q));
            line(r, "jordan_reconstruct").add_residual(rec, 1e-10);
            double inv = 0.0;
            CMat sum = CMat::Zero(n, n);
            bool dims_ok = true;
            for (const auto& b : jd.blocks) {
                const CMat Pb = b.basis * b.basis.adjoint();
                sum += Pb;
                inv = std::max({inv, op_norm(P * Pb - Pb * P), op_norm(Q * Pb - Pb * Q)});
                dims_ok = dims_ok && (b.basis.cols() == 1 || b.basis.cols() == 2);
            }
            line(r, "jordan_invariance").add_residual(inv, 1e-10);
            line(r, "jordan_resolution").add_residual(op_norm(sum - CMat::Identity(n, n)) + (dims_ok ? 0.0 : 1.0), 1e-10);
            const CMat pb = jordan_basis(OP, OQ);
            double off = 0.0;
            const CMat Gm = pb.adjoint() * Q * pb;
            for (int j = 0; j < Gm.cols(); ++j)
                for (int i = 0; i < Gm.rows(); ++i)
                    if (i != j) off = std::max(off, std::abs(Gm(i, j)));
            line(r, "jordan_basis_gram").add_residual(off, 1e-10);
        }
        {
            const int n = uniform_int(rng, 4, 12);
            const int g = uniform_int(rng, 1, n);
            const int e = uniform_int(rng, 0, g);
            const int f = uniform_int(rng, e, g);
            const CMat U = random_unitary(n, rng);
            const CMat Eb = U.leftCols(e), Gb = U.leftCols(g), Fb = U.leftCols(f);
            const OrthoProjection E = projector(Eb), G = projector(Gb);
            const double s = uniform(rng, 0.0, 0.04);
            const CMat R = expi(eig_hermitian(unit_hermitian(n, rng)), s);
            const OrthoProjection Fp = projector(R * Fb);
            const NestResult nr = nest_projection(E, G, Fp);
            line(r, "nest_sandwich").add_residual(nr.sandwich_defect, 1e-10);
            line(r, "nest_distance").add(nr.distance);
            const CMat Fm = nr.F.matrix;
            line(r, "nest_projection_exact").add_residual(std::max(op_norm(Fm - Fm.adjoint()), op_norm(Fm * Fm - Fm)), 1e-10);
        }
        if (t % 5 == 0) {
            const int n = 10;
            RVec c(n), d(n);
            for (int i = 0; i < n; ++i) {
                c(i) = uniform(rng, 0.0, 1.0);
                d(i) = uniform(rng, 0.0, 1.0);
            }
            CMat M = CMat::Zero(n, n);
            for (int i = 0; i < n; ++i) M(i, i) = c(i) * c(i) + d(i) * d(i) + uniform(rng, 0.0, 0.1);
            for (int i = 0; i + 1 < n; ++i) {
                const cplx v = std::polar(d(i) * c(i + 1) * uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 6.283185307179586));
                M(i, i + 1) = v;
                M(i + 1, i) = std::conj(v);
            }
            const PositivityResult pr = tridiag_positive_test(M, c, d);
            line(r, "tridiag_positive").add_residual(pr.applicable && pr.positive ? 0.0 : 1.0, 0.0);
            line(r, "tridiag_identity").add_residual(pr.identity_residual, 1e-10);
        }
    }
    {
        const int n = 50;
        CMat T = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            T(i, i) = 1.0;
            if (i + 1 < n) T(i, i + 1) = T(i + 1, i) = -0.25;
        }
        const DecayProfile dp = inverse_decay_profile(T);
        line(r, "inverse_decay_toeplitz").add_residual(dp.alpha < 1 && dp.worst_ratio <= 1 + 1e-12 ? 0.0 : 1.0, 0.0);
    }
    finish(r, t0);
    return r;
}

SuiteResult suite_smoothing(unsigned long long seed, int trials) {
    const auto t0 = Clock::now();
    SuiteResult r{"smoothing", seed, trials, {}, 0.0};
    Rng rng(seed);
    const Profile f = bump_profile(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        const int n = uniform_int(rng, 2, 32);
        const CMat A = unit_hermitian(n, rng);
        CMat B = unit_hermitian(n, rng);
        if (t % 4 == 0) B = hermitian_part(A + uniform(rng, 0.0, 0.2) * B);
        const double Delta = uniform(rng, 0.05, 1.0);
        const FiniteRangeResult fr = finite_range(A, B, Delta, f);
        const HermitianEig EB = eig_hermitian(B);
        double worst = finite_range_defect(fr.H, EB, Delta);
        for (int k = 0; k < 6; ++k) {
            const double x = uniform(rng, -1.2, 1.0);
            const double d = Delta * (1 + uniform(rng, 0.0, 1.0));
            const CMat Q1 = spectral_basis(EB, RealSet::at_most(x));
            const CMat Q2 = spectral_basis(EB, RealSet::at_least(x + d));
            if (Q1.cols() && Q2.cols()) worst = std::max(worst, op_norm(Q1.adjoint() * fr.H * Q2));
        }
        line(r, "finite_range_exact").add_residual(worst, 1e-10);
        line(r, "finite_range_distance").add(fr.dist_bound);
        line(r, "finite_range_commutator").add(fr.comm_bound);
    }
    for (int nw : {2, 3, 8, 24}) {
        const std::vector<Profile> parts = partition_of_unity(nw);
        double worst = 0.0;
        for (int k = 0; k <= 400; ++k) {
            const double x = -1 + k / 200.0;
            double s = 0.0;
            for (const auto& p : parts) s += p(x);
            worst = std::max(worst, std::abs(s - 1));
        }
        line(r, "partition_of_unity").add_residual(worst, 1e-10);
    }
    {
        double worst = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double x = k / 200.0;
            worst = std::max(worst, std::abs(smooth_step(x) + smooth_step(1 - x) - 1));
        }
        line(r, "smooth_step_symmetry").add_residual(worst, 1e-14);
    }
    finish(r, t0);
    return r;
}

SuiteResult suite_tn(unsigned long long seed, int trials) {
    const auto t0 = Clock::now();
    SuiteResult r{"tn", seed, trials, {}, 0.0};
    Rng rng(seed);
    const int reps = std::max(1, trials / 100);
    for (int rep = 0; rep < reps; ++rep)
        for (int n : {2, 3})
            for (int N = 1; N <= 5; ++N) {
                if (n == 3 && N == 5 && rep > 0) continue;
                const CMat A = unit_hermitian(n, rng), B = unit_hermitian(n, rng);
                const TnIdentityReport t = tn_identities(A, B, N, rng);
                line(r, "commutator").add_residual(t.commutator, t.tolerance);
                line(r, "recursion").add_residual(t.recursion, t.tolerance);
                line(r, "covariance").add_residual(t.covariance, t.tolerance);
                line(r, "permutation").add_residual(t.permutation, t.tolerance);
                line(r, "norm_upper").add(t.norm_upper);
                line(r, "norm_lower").add(t.norm_lower);
            }
    {
        CMat D = CMat::Zero(2, 2);
        D(1, 1) = 1.0;
        const HermitianEig E = eig_hermitian(tn_lift(D, 3));
        const double expected[8] = {0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3, 2.0 / 3, 1};
        double worst = 0.0;
        for (int k = 0; k < 8; ++k) worst = std::max(worst, std::abs(E.values(k) - expected[k]));
        line(r, "spectrum_T3_diag01").add_residual(worst, 1e-12);
    }
    finish(r, t0);
    return r;
}

std::vector<std::string> suite_ids() { return {"bounds", "lieb-robinson", "projections", "smoothing", "tn"}; }

SuiteResult run_suite(const std::string& id, unsigned long long seed, int trials) {
    if (trials < 1) throw PreconditionError("run_suite: trials must be positive");
    if (id == "bounds") return suite_bounds(seed, trials);
    if (id == "lieb-robinson") return suite_lieb_robinson(seed, trials);
    if (id == "projections") return suite_projections(seed, trials);
    if (id == "smoothing") return suite_smoothing(seed, trials);
    if (id == "tn") return suite_tn(seed, trials);
    throw PreconditionError("unknown suite '" + id + "'");
}

}  // namespace ac
