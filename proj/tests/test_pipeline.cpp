#include "test_util.hpp"

#include "ac/gallery.hpp"
#include "ac/pipeline.hpp"

#include <cmath>
#include <numbers>

using namespace ac;
using ac::test::diag;
using ac::test::unit_hermitian;

namespace {

CMat ramp(int n) {
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = -1 + 2.0 * i / (n - 1);
    return D;
}

CMat contraction(const CMat& X) { return X / std::max(1.0, op_norm(X)); }

void all_checks_pass(const CommuteReport& r) {
    for (const auto& c : r.checks) {
        INFO(c.context << " lhs=" << c.lhs << " rhs=" << c.rhs);
        CHECK(c.pass());
    }
}

}  // namespace

TEST_CASE("choose_exponents reproduces the published rates") {
    CHECK(choose_exponents(1.0).gamma == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(choose_exponents(1.0 / 9, false).gamma == doctest::Approx(1.0 / 10).epsilon(1e-15));
    CHECK(choose_exponents(0.25).gamma == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK_THROWS_AS(choose_exponents(0.0), PreconditionError);
}

TEST_CASE("commute_hermitian_pair on a commuting pair") {
    const CMat A = ramp(12);
    const CMat B = contraction(A * A);
    const CommuteReport r = commute_hermitian_pair(A, B);
    CHECK(r.distA <= 1e-10);
    CHECK(r.distB <= 2.0 / r.n_cut + 1e-12);
    CHECK(r.comm_residual <= 1e-10);
    all_checks_pass(r);
}

TEST_CASE("commute_hermitian_pair on a T_N lifted pair") {
    Rng rng(3);
    const CMat a = unit_hermitian(2, rng), b = unit_hermitian(2, rng);
    const CMat A = contraction(tn_lift(a, 6)), B = contraction(tn_lift(b, 6));
    const CommuteReport r = commute_hermitian_pair(A, B);
    CHECK(r.comm_residual <= 1e-10);
    CHECK(r.distB <= 2.0 / r.n_cut + 1e-12);
    CHECK(r.intervals.size() >= 1);
    all_checks_pass(r);
}

TEST_CASE("sweep distances are nonincreasing over five scales") {
    Rng rng(4);
    const CMat D = ramp(16);
    const SweepReport s = sweep(D, CMat(0.9 * D * D * D), random_hermitian(16, rng), random_hermitian(16, rng),
                                {0.1, 0.03, 0.01, 0.003, 0.001});
    REQUIRE(s.rows.size() == 5);
    CHECK(s.rows.front().scale > s.rows.back().scale);
    CHECK(s.distA_trend);
    CHECK(s.distB_trend);
    CHECK(s.rows.back().distA <= s.rows.front().distA);
    for (const auto& row : s.rows) CHECK(row.comm_residual <= 1e-10);
}

TEST_CASE("sweep with one scale gives one row and rejects an empty list") {
    Rng rng(5);
    const CMat D = ramp(6);
    const SweepReport s = sweep(D, CMat(D * D), random_hermitian(6, rng), random_hermitian(6, rng), {0.01});
    CHECK(s.rows.size() == 1);
    CHECK_THROWS_AS(sweep(D, D, D, D, {}), PreconditionError);
}

TEST_CASE("cheap_commute with scalar A is the identity map") {
    Rng rng(6);
    const CMat A = 0.3 * CMat::Identity(5, 5);
    const CMat B = unit_hermitian(5, rng);
    const CommuteReport r = cheap_commute(A, B);
    CHECK(op_norm(r.A_prime - A) <= 1e-12);
    CHECK(op_norm(r.B_prime - B) <= 1e-12);
}

TEST_CASE("cheap_commute with two clusters") {
    Rng rng(7);
    CMat A = CMat::Zero(10, 10);
    for (int i = 0; i < 10; ++i) A(i, i) = i < 5 ? -0.6 + 0.001 * i : 0.5 + 0.001 * i;
    const CMat Q = random_unitary(10, rng);
    A = hermitian_part(Q * A * Q.adjoint());
    const CMat B0 = unit_hermitian(10, rng);
    CMat B = B0;
    const CMat P = spectral_projection(eig_hermitian(A), RealSet::at_most(0)).matrix;
    B = hermitian_part(P * B0 * P + (CMat::Identity(10, 10) - P) * B0 * (CMat::Identity(10, 10) - P));
    B = contraction(hermitian_part(B + 1e-4 * unit_hermitian(10, rng)));
    const CommuteReport r = cheap_commute(A, B);
    const double bound = std::sqrt(2.0) * std::sqrt(r.delta);
    CHECK(r.comm_residual <= 1e-10);
    CHECK(r.distA <= bound);
    CHECK(r.distB <= bound);
    bool has_ps = false;
    for (const auto& [k, v] : r.references) has_ps = has_ps || k.find("Pearcy") != std::string::npos;
    CHECK(has_ps);
    all_checks_pass(r);
}

TEST_CASE("three_hermitian on diagonal and perturbed inputs") {
    const CMat A = diag({-0.9, -0.9, 0.2, 0.8}), B = diag({0.1, 0.3, -0.4, 0.5}), C = diag({0.7, -0.2, 0.0, 0.6});
    const CommuteReport d = three_hermitian(A, B, C);
    CHECK(d.distA <= 1e-12);
    CHECK(d.comm_residual <= 1e-10);

    Rng rng(8);
    const CMat D = ramp(16);
    const CMat E = unit_hermitian(16, rng), X = unit_hermitian(16, rng);
    const CommuteReport r =
        three_hermitian(D, contraction(CMat(D * D * 0.9 + 1e-3 * E)), contraction(CMat(0.5 * D + 1e-3 * X)));
    CHECK(r.has_C);
    CHECK(r.comm_residual <= 1e-10);
    all_checks_pass(r);
}

TEST_CASE("commute_hermitian_unitary with scalar U and commuting pairs") {
    Rng rng(9);
    const CMat A = unit_hermitian(6, rng);
    const CMat U = std::polar(1.0, 0.7) * CMat::Identity(6, 6);
    const CommuteReport s = commute_hermitian_unitary(A, U);
    CHECK(s.comm_residual <= 1e-10);
    CHECK(s.distA <= 1e-10);

    CMat Ud = CMat::Zero(8, 8), Ad = CMat::Zero(8, 8);
    for (int i = 0; i < 8; ++i) {
        Ud(i, i) = std::polar(1.0, 2 * std::numbers::pi * i / 8);
        Ad(i, i) = std::cos(0.4 * i);
    }
    const CommuteReport c = commute_hermitian_unitary(Ad, Ud);
    CHECK(c.comm_residual <= 1e-10);
    CHECK(c.distA <= 1e-10);
    const double arc = 2 * std::numbers::pi / c.n_cut;
    CHECK(c.distB <= 2 * std::abs(std::polar(1.0, arc) - 1.0) + 1e-12);
    all_checks_pass(c);
}

TEST_CASE("commute_hermitian_unitary on a perturbed joint family of dim 32") {
    Rng rng(10);
    const int n = 32;
    CMat Ad = CMat::Zero(n, n), Ud = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        Ad(i, i) = std::cos(0.3 * i);
        Ud(i, i) = std::polar(1.0, 0.7 * i);
    }
    const CMat Q = random_unitary(n, rng);
    const CMat A = contraction(hermitian_part(Q * Ad * Q.adjoint() + 1e-3 * unit_hermitian(n, rng)));
    const CMat U = expi(eig_hermitian(1e-3 * unit_hermitian(n, rng)), 1.0) * Q * Ud * Q.adjoint();
    const CommuteReport r = commute_hermitian_unitary(A, U);
    CHECK(r.comm_residual <= 1e-10);
    all_checks_pass(r);
}

TEST_CASE("Cayley transforms are inverse to each other") {
    RVec x(41);
    for (int k = 0; k < 41; ++k) x(k) = -20 + k;
    const CMat X = x.cast<cplx>().asDiagonal();
    const CMat back = cayley_g(cayley_f(X));
    CHECK(op_norm(back - X) <= 1e-12 * 20);
    for (int k = 0; k < 41; ++k) CHECK(std::abs(back(k, k) - X(k, k)) <= 1e-12 * std::max(1.0, std::abs(x(k))));
}

TEST_CASE("unitary_pair_gap on commuting and near-commuting pairs") {
    CMat Vd = CMat::Zero(8, 8), Ud = CMat::Zero(8, 8);
    for (int i = 0; i < 8; ++i) {
        Vd(i, i) = std::polar(1.0, -2.0 + 0.5 * i);
        Ud(i, i) = std::polar(1.0, 0.3 * i);
    }
    const CommuteReport c = unitary_pair_gap(Ud, Vd, 0.3);
    CHECK(c.comm_residual <= 1e-10);
    all_checks_pass(c);

    Rng rng(11);
    CMat Hs = CMat::Zero(8, 8);
    for (int i = 0; i < 8; ++i) Hs(i, i) = std::cos(0.3 * i);
    const CMat U = expi(eig_hermitian(CMat(0.05 * random_hermitian(8, rng))), 1.0) * expi(eig_hermitian(Hs), 1.0);
    const CommuteReport r = unitary_pair_gap(U, Vd, 0.3);
    CHECK(r.comm_residual <= 1e-10);
    all_checks_pass(r);
}
