#include "test_util.hpp"

#include "ac/subspace.hpp"

#include <cmath>
#include <random>

using namespace ac;
using ac::test::diag;
using ac::test::unit_hermitian;

namespace {

TridiagonalSystem decoupled(int L, Rng& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    CMat J = CMat::Zero(L, L);
    for (int i = 0; i < L; ++i) J(i, i) = u(rng);
    return verify_tridiagonal(J, singleton_blocks(L));
}

std::vector<int> random_dims(int L, int lo, int hi, Rng& rng) {
    std::uniform_int_distribution<int> u(lo, hi);
    std::vector<int> dims(L);
    for (auto& d : dims) d = u(rng);
    return dims;
}

CMat proj_of(const CMat& basis) { return basis * basis.adjoint(); }

}  // namespace

TEST_CASE("verify_tridiagonal accepts block-diagonal and banded inputs") {
    Rng rng(1);
    const TridiagonalSystem d = decoupled(6, rng);
    CHECK(d.coupling_defect == 0.0);
    CMat J = CMat::Zero(5, 5);
    for (int i = 0; i + 1 < 5; ++i) J(i, i + 1) = J(i + 1, i) = 0.4;
    CHECK_NOTHROW(verify_tridiagonal(J, singleton_blocks(5)));
}

TEST_CASE("verify_tridiagonal rejects a dense J and names the pair") {
    Rng rng(2);
    const CMat J = unit_hermitian(5, rng);
    try {
        verify_tridiagonal(J, singleton_blocks(5));
        FAIL("expected rejection");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("blocks 1 and 3") != std::string::npos);
    }
}

TEST_CASE("certify_W on the whole space") {
    Rng rng(3);
    const TridiagonalSystem sys = random_tridiagonal({1, 1, 1, 1, 1}, rng);
    const WCertificate c = certify_W(sys, CMat::Identity(5, 5));
    CHECK(c.eps3 <= 1e-12);
    CHECK(c.eps4 <= 1e-12);
    CHECK(c.eps5 == doctest::Approx(1.0));
}

TEST_CASE("certify_W on an exact reducing subspace") {
    CMat J = CMat::Zero(4, 4);
    J(0, 1) = J(1, 0) = 0.5;
    J(2, 3) = J(3, 2) = 0.5;
    const TridiagonalSystem sys = verify_tridiagonal(J, singleton_blocks(4));
    const WCertificate c = certify_W(sys, CMat::Identity(4, 4).leftCols(2));
    CHECK(c.eps3 <= 1e-12);
    CHECK(c.eps4 <= 1e-12);
    CHECK(c.eps5 <= 1e-12);
    CHECK(c.contains_V1);
    CHECK(c.perp_VL);
}

TEST_CASE("certify_W primal and dual forms agree") {
    Rng rng(4);
    const TridiagonalSystem sys = random_tridiagonal(random_dims(6, 1, 2, rng), rng);
    for (int t = 0; t < 5; ++t) {
        const WCertificate c = certify_W(sys, random_isometry(sys.dim(), sys.dim() / 2, rng));
        CHECK(c.dual_gap <= 1e-10);
        CHECK(c.eps2_bound.pass());
    }
}

TEST_CASE("krylov_reduce with zero coupling is trivial") {
    CMat J = CMat::Zero(6, 6);
    J(0, 1) = J(1, 0) = 0.3;
    J(3, 4) = J(4, 3) = 0.3;
    const TridiagonalSystem sys = verify_tridiagonal(J, singleton_blocks(6));
    const KrylovReduction kr = krylov_reduce(sys, 2);
    CHECK(kr.trivial);
    const WCertificate c = certify_W(sys, kr.exact_W);
    CHECK(c.eps2 <= 1e-12);
}

TEST_CASE("krylov_reduce with rank-one coupling gives reduced blocks of dim at most one") {
    Rng rng(5);
    const TridiagonalSystem sys = random_tridiagonal({2, 1, 2, 2, 2, 2}, rng);
    const KrylovReduction kr = krylov_reduce(sys, 2);
    CHECK(kr.m == 1);
    if (!kr.trivial)
        for (int k = 0; k + 1 < kr.reduced.L(); ++k) CHECK(kr.reduced.blocks[k].cols() <= 1);
    for (std::size_t k = 1; k < kr.H.size(); ++k) CHECK(kr.H[k].cols() <= 1);
}

TEST_CASE("krylov_reduce past the midpoint reverses") {
    Rng rng(6);
    const TridiagonalSystem sys = random_tridiagonal(random_dims(8, 1, 2, rng), rng);
    const KrylovReduction a = krylov_reduce(sys, 6);
    CHECK(a.reversed);
    const KrylovReduction b = krylov_reduce(reversed(sys), 2);
    CHECK_FALSE(b.reversed);
    CHECK(a.n_plus == b.n_plus);
    CHECK(op_norm(proj_of(a.H0) - proj_of(b.H0)) <= 1e-10);
    if (!a.trivial) CHECK(op_norm(proj_of(a.embed) - proj_of(b.embed)) <= 1e-10);
}

TEST_CASE("select_intervals with a single atom") {
    const IntervalSelection s = select_intervals({{0.4, 1.0}}, 0.2, 0.02);
    int hits = 0;
    for (const auto& I : s.intervals) hits += I.contains(0.4);
    CHECK(hits == 1);
    CHECK(s.count.pass());
    CHECK(s.excluded_mass == 0.0);
}

TEST_CASE("select_intervals on a uniform grid of 100 atoms") {
    std::vector<Atom> mu;
    for (int k = 0; k < 100; ++k) mu.push_back({(k + 0.5) / 100, 0.01});
    const IntervalSelection s = select_intervals(mu, 0.2, 0.02);
    CHECK(s.count.pass());
    CHECK(s.diameter.pass());
    CHECK(s.gap.pass());
    CHECK(s.excluded.pass());
}

TEST_CASE("select_intervals rejects kappa <= 8 eta") {
    CHECK_THROWS_AS(select_intervals({{0.5, 1.0}}, 0.16, 0.02), PreconditionError);
}

TEST_CASE("poly_partition examples") {
    const PolyPartition one = poly_partition({Interval{0.2, 0.4, true, false}}, 5);
    for (double x : {0.0, 0.3, 0.9}) CHECK(one.eval(x)(0) == doctest::Approx(1.0));
    const std::vector<Interval> two = {Interval{0.05, 0.2, true, false}, Interval{0.7, 0.9, true, false}};
    CHECK(poly_partition(two, 30).gamma < 0.1);
    const std::vector<Interval> close = {Interval{0.40, 0.45, true, false}, Interval{0.47, 0.52, true, false}};
    const PolyPartition bad = poly_partition(close, 1, 0.1);
    CHECK(bad.gamma > 0.1);
    CHECK_FALSE(bad.meets_target);
}

TEST_CASE("szarek_W on a decoupled system") {
    Rng rng(7);
    const SzarekResult r = szarek_W(decoupled(10, rng));
    CHECK(r.cert.eps4 <= 1e-12);
    CHECK(r.cert.eps2 <= 1e-10);
    CHECK(r.cert.contains_V1);
    CHECK(r.cert.perp_VL);
}

TEST_CASE("szarek_W on L = 40 singleton blocks") {
    Rng rng(8);
    const TridiagonalSystem sys = random_tridiagonal(std::vector<int>(40, 1), rng);
    const SzarekResult r = szarek_W(sys);
    CHECK(r.cert.contains_V1);
    CHECK(r.cert.perp_VL);
    CHECK(std::isfinite(r.cert.eps2));
    CHECK(std::isfinite(r.diag.eps1_formula));
}

TEST_CASE("szarek_W with an empty block is trivial") {
    Rng rng(9);
    const SzarekResult r = szarek_W(random_tridiagonal({1, 2, 0, 1, 1}, rng));
    CHECK(r.cert.trivial);
    CHECK(r.cert.eps2 <= 1e-10);
}

TEST_CASE("lin_oracle_projection given mode on a commuting pair") {
    const CMat A = diag({-0.9, -0.2, 0.3, 0.8}), B = diag({0.5, -0.5, 0.1, 0.2});
    LinOracle o;
    o.mode = OracleMode::Given;
    o.A_given = A;
    o.B_given = B;
    const LinProjection p = lin_oracle_projection(A, B, 0.1, o);
    CHECK(op_norm(p.P.matrix - diag({1, 1, 0, 0})) <= 1e-10);
    CHECK(p.commutator <= 1e-10);
}

TEST_CASE("lin_oracle_projection brute mode in dimension two") {
    Rng rng(10);
    const CMat A = diag({-0.9, 0.1});
    const CMat B = hermitian_part(diag({0.3, -0.4}) + 0.01 * unit_hermitian(2, rng));
    LinOracle o;
    o.mode = OracleMode::Brute;
    const LinProjection p = lin_oracle_projection(A, B, 0.1, o);
    CHECK(p.bound.pass());
    CHECK(p.sandwich_defect <= 1e-10);
}

TEST_CASE("lin_oracle_projection heuristic mode in dimension 12") {
    Rng rng(11);
    const CMat A0 = diag({-0.9, -0.7, -0.5, -0.3, -0.1, 0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95});
    const CMat B0 = diag({0.2, -0.3, 0.5, 0.1, -0.8, 0.6, 0.0, -0.2, 0.4, 0.7, -0.6, 0.3});
    const CMat Q = random_unitary(12, rng);
    CMat A = hermitian_part(Q * A0 * Q.adjoint() + 0.01 * unit_hermitian(12, rng));
    CMat B = hermitian_part(Q * B0 * Q.adjoint() + 0.01 * unit_hermitian(12, rng));
    A /= std::max(1.0, op_norm(A));
    B /= std::max(1.0, op_norm(B));
    const LinProjection p = lin_oracle_projection(A, B, 0.1, LinOracle{});
    CHECK(p.bound.pass());
    CHECK(p.sandwich_defect <= 1e-10);
}

TEST_CASE("brute_projection_search examples") {
    const BruteSearchResult d = brute_projection_search(diag({-0.9, 0.1, 0.2}), diag({0.3, 0.5, -0.1}), 0.1, 16);
    CHECK(d.commutator <= 1e-10);

    Rng rng(12);
    const CMat A = diag({-0.9, 0.1, 0.2, 0.9});
    const CMat B = unit_hermitian(4, rng);
    const BruteSearchResult r = brute_projection_search(A, B, 0.1, 64);
    CHECK(r.commutator <= r.certified_bound + 1e-12);
    const CMat E1 = diag({1, 0, 0, 0});
    double fine = std::min(op_norm(commutator(E1, B)), op_norm(commutator(diag({1, 1, 1, 0}), B)));
    const int grid = 400;
    for (int a = 0; a <= grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const double t = 1.5707963267948966 * a / grid, phi = 6.283185307179586 * b / grid;
            CVec v = CVec::Zero(4);
            v(1) = std::cos(t);
            v(2) = std::polar(std::sin(t), phi);
            fine = std::min(fine, op_norm(commutator(E1 + v * v.adjoint(), B)));
        }
    CHECK(fine <= r.commutator + 1e-9);
    CHECK(fine >= 2 * r.commutator - r.certified_bound - 1e-9);
}

TEST_CASE("hastings_W with an empty block is trivial") {
    Rng rng(13);
    HastingsConfig cfg;
    cfg.n_win = 24;
    const HastingsResult r = hastings_W(random_tridiagonal({1, 1, 0, 2, 1, 1}, rng), cfg, LinOracle{});
    CHECK(r.cert.trivial);
    CHECK(r.cert.eps2 <= 1e-10);
}

TEST_CASE("hastings_W on a decoupled system finds an exact invariant W") {
    Rng rng(14);
    HastingsConfig cfg;
    cfg.n_win = 24;
    const HastingsResult r = hastings_W(decoupled(12, rng), cfg, LinOracle{});
    CHECK(r.cert.eps2 <= 1e-10);
    CHECK(r.cert.contains_V1);
    CHECK(r.cert.perp_VL);
}

TEST_CASE("hastings_W at desk scale: all stages pass and references are reported") {
    Rng rng(1);
    const TridiagonalSystem sys = random_tridiagonal(random_dims(60, 1, 2, rng), rng);
    HastingsConfig cfg;
    cfg.n_win = 24;
    cfg.l_b = 4;
    const HastingsResult r = hastings_W(sys, cfg, LinOracle{});
    CHECK(r.diag.all_passed());
    CHECK(r.cert.contains_V1);
    CHECK(r.cert.perp_VL);
    CHECK(std::isfinite(r.diag.eps3_reference));
    WARN(r.cert.eps3 <= r.diag.eps3_reference);
    WARN(r.cert.eps4 <= r.diag.eps4_reference);
    WARN(r.cert.eps5 <= r.diag.eps5_reference);

    Rng fit_rng(2);
    const DecayFit fit = decay_check_U(r.state, 3, fit_rng);
    CHECK(fit.ok);
    CHECK(fit.alpha < 1.0);
    CHECK(fit.C2 >= 1.0 / std::max(fit.alpha, 1e-2) - 1e-12);
}

TEST_CASE("decay_check_U on a decoupled system has no cross coefficients") {
    std::vector<int> dims(40, 1);
    CMat J = CMat::Zero(40, 40);
    for (int i = 0; i < 40; ++i) J(i, i) = 0.9 * std::cos(0.37 * i);
    const TridiagonalSystem sys = verify_tridiagonal(J, singleton_blocks(40));
    HastingsConfig cfg;
    cfg.n_win = 24;
    cfg.l_b = 4;
    const HastingsResult r = hastings_W(sys, cfg, LinOracle{});
    if (r.state.n_b > 0) {
        Rng rng(3);
        const DecayFit fit = decay_check_U(r.state, 2, rng);
        for (std::size_t i = 0; i < fit.coefficients.size(); ++i)
            for (std::size_t j = 0; j < fit.coefficients[i].size(); ++j)
                if (i != j) CHECK(fit.coefficients[i][j] <= 1e-10);
    }
}
