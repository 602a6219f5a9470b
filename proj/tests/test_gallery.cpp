#include "test_util.hpp"

#include "ac/gallery.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ac;
using ac::test::diag;
using ac::test::unit_hermitian;

TEST_CASE("voiculescu n = 1 commutes") {
    const auto [U, V] = voiculescu(1);
    CHECK(U.rows() == 1);
    CHECK(op_norm(commutator(U, V)) <= 1e-15);
}

TEST_CASE("voiculescu commutator norm equals |1 - omega|") {
    for (int n : {2, 3, 4, 8, 17, 64}) {
        const auto [U, V] = voiculescu(n);
        const double expected = std::abs(1.0 - std::polar(1.0, 2 * std::numbers::pi / n));
        CHECK(std::abs(op_norm(commutator(U, V)) - expected) <= 1e-10);
    }
    const auto [U4, V4] = voiculescu(4);
    CHECK(op_norm(commutator(U4, V4)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("voiculescu matrices are unitary") {
    for (int n : {5, 64, 256}) {
        const auto [U, V] = voiculescu(n);
        const CMat I = CMat::Identity(n, n);
        CHECK(op_norm(U.adjoint() * U - I) <= 1e-12);
        CHECK(op_norm(V.adjoint() * V - I) <= 1e-12);
    }
}

TEST_CASE("winding of a commuting pair to itself is zero") {
    CMat U = CMat::Zero(4, 4), V = CMat::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        U(i, i) = std::polar(1.0, 0.5 * i);
        V(i, i) = std::polar(1.0, -0.9 * i);
    }
    const WindingResult w = winding_number(U, V, U, V);
    CHECK(w.winding == 0);
}

TEST_CASE("winding of the Voiculescu pair to the identity") {
    const auto [U, V] = voiculescu(8);
    const CMat I = CMat::Identity(8, 8);
    const WindingResult w = winding_number(U, V, I, I, 256);
    const WindingResult w2 = winding_number(U, V, I, I, 512);
    CHECK(w.winding != 0);
    CHECK(w.winding == w2.winding);
    CHECK(w2.stable);
}

TEST_CASE("winding is invariant along a commuting homotopy of the target") {
    const auto [U, V] = voiculescu(8);
    const CMat I = CMat::Identity(8, 8);
    const WindingResult a = winding_number(U, V, I, I);
    const WindingResult b = winding_number(U, V, std::polar(1.0, 0.3) * I, std::polar(1.0, -0.2) * I);
    CHECK(a.winding == b.winding);
}

TEST_CASE("quarter_tridiag n = 10 matches the printed vector") {
    const QuarterComparison q = quarter_comparison(quarter_tridiag(10));
    CHECK(q.has_reference);
    for (const auto& row : q.rows) {
        INFO("index " << row.index << " computed " << row.scaled << " printed " << row.printed);
        CHECK(row.pass);
    }
}

TEST_CASE("quarter_tridiag n = 50 tail pattern") {
    const QuarterTridiag q = quarter_tridiag(50);
    const QuarterComparison c = quarter_comparison(q);
    CHECK(c.ratios_pass);
    for (double r : c.tail_ratios) CHECK(r == doctest::Approx(2.0).epsilon(0.05));
    const double closed_form = 1.125 * std::ldexp(1.0, -50);
    CHECK(std::abs(q.leakage(49) - closed_form) <= 1e-3 * closed_form);
    CHECK(c.pass);
}

TEST_CASE("quarter_tridiag has an isolated top eigenvalue near 5/8") {
    const QuarterTridiag q = quarter_tridiag(200);
    CHECK(q.top_eigenvalue == doctest::Approx(0.625).epsilon(1e-6));
    const HermitianEig E = eig_hermitian(q.J);
    CHECK(E.values(198) <= 0.5 + 1e-12);
}

TEST_CASE("tn_lift basic cases") {
    Rng rng(1);
    const CMat A = unit_hermitian(3, rng);
    CHECK(op_norm(tn_lift(A, 1) - A) <= 1e-15);
    for (int N = 1; N <= 4; ++N) CHECK(op_norm(tn_lift(CMat::Identity(2, 2), N) - CMat::Identity(1 << N, 1 << N)) <= 1e-14);
}

TEST_CASE("T_3 spectrum of diag(0,1) has binomial multiplicities") {
    const HermitianEig E = eig_hermitian(tn_lift(diag({0, 1}), 3));
    const int binom[4] = {1, 3, 3, 1};
    int k = 0;
    for (int level = 0; level <= 3; ++level)
        for (int m = 0; m < binom[level]; ++m) CHECK(std::abs(E.values(k++) - level / 3.0) <= 1e-12);
}

TEST_CASE("tn_identities on the Pauli pair and random pairs") {
    Rng rng(2);
    const TnIdentityReport p = tn_identities(ac::test::sigma_x(), ac::test::sigma_z(), 3, rng);
    CHECK(p.commutator <= 1e-13);
    for (int N = 2; N <= 5; ++N) {
        const TnIdentityReport r = tn_identities(unit_hermitian(2, rng), unit_hermitian(2, rng), N, rng);
        CHECK(r.recursion <= 1e-13);
        CHECK(r.pass());
    }
}

TEST_CASE("T_N preserves the norm of a normal matrix") {
    const CMat A = diag({-0.4, 0.9});
    for (int N = 1; N <= 4; ++N) CHECK(op_norm(tn_lift(A, N)) == doctest::Approx(0.9));
}

TEST_CASE("minimize_joint_diag on a commuting pair reaches zero") {
    Rng rng(3);
    const CMat Q = random_unitary(6, rng);
    const CMat A = Q * diag({0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) * Q.adjoint();
    const CMat B = Q * diag({0.6, -0.2, 0.1, 0.9, -0.5, 0.0}) * Q.adjoint();
    const JointDiagResult r = minimize_joint_diag(hermitian_part(A), hermitian_part(B));
    CHECK(r.value <= 1e-8);
}

TEST_CASE("minimize_joint_diag in dimension two matches a grid search") {
    Rng rng(4);
    const CMat A = unit_hermitian(2, rng), B = unit_hermitian(2, rng);
    const JointDiagResult r = minimize_joint_diag(A, B);
    auto objective = [&](double t, double phi) {
        CMat U(2, 2);
        U << std::cos(t), -std::polar(std::sin(t), -phi), std::polar(std::sin(t), phi), std::cos(t);
        return joint_diag_objective(A, B, U);
    };
    double best = 1e300, bt = 0.0, bp = 0.0;
    const int grid = 400;
    const double ht = std::numbers::pi / 2 / grid, hp = 2 * std::numbers::pi / grid;
    for (int a = 0; a <= grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const double v = objective(ht * a, hp * b);
            if (v < best) {
                best = v;
                bt = ht * a;
                bp = hp * b;
            }
        }
    const double t0 = bt, p0 = bp;
    for (int a = -200; a <= 200; ++a)
        for (int b = -200; b <= 200; ++b) best = std::min(best, objective(t0 + ht * a / 100, p0 + hp * b / 100));
    CHECK(r.value <= best + 1e-3);
    CHECK(r.value >= best - 1e-3);
}

TEST_CASE("joint_diag objective is Lipschitz in U") {
    Rng rng(5);
    const CMat A = unit_hermitian(5, rng), B = unit_hermitian(5, rng);
    for (int t = 0; t < 100; ++t)
        CHECK(joint_diag_lipschitz(A, B, random_unitary(5, rng), random_unitary(5, rng)).pass());
}
