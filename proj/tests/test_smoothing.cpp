#include "test_util.hpp"

#include "ac/bounds.hpp"
#include "ac/smoothing.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace ac;
using ac::test::diag;
using ac::test::unit_hermitian;

TEST_CASE("smooth step values and symmetry") {
    const auto F = make_smooth_step();
    CHECK(F(0.0) == 1.0);
    CHECK(F(1.0) == 0.0);
    CHECK(F(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    double worst = 0.0;
    for (int k = 0; k <= 10000; ++k) {
        const double x = k / 10000.0;
        worst = std::max(worst, std::abs(F(x) + F(1 - x) - 1));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("profile constants of the cubic bump exceed one") {
    const ProfileConstants pc = profile_constants(poly_profile());
    CHECK(pc.converged);
    CHECK(pc.c1 > 1.0);
}

TEST_CASE("c0 scales as one over the ramp width") {
    const double c0w = profile_constants(bump_profile(1.0, 1.0)).c0;
    const double c02w = profile_constants(bump_profile(2.0, 2.0)).c0;
    CHECK(c0w / c02w == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("indicator profile is flagged divergent") {
    const ProfileConstants pc = profile_constants(indicator_profile());
    CHECK(pc.divergent);
    CHECK_THROWS_AS(finite_range(diag({1, 0}), diag({0, 1}), 1.0, indicator_profile()), PreconditionError);
}

TEST_CASE("finite_range with scalar B returns A") {
    Rng rng(1);
    const CMat A = unit_hermitian(6, rng);
    const FiniteRangeResult fr = finite_range(A, 0.3 * CMat::Identity(6, 6), 0.5, bump_profile(0, 1));
    CHECK(op_norm(fr.H - A) <= 1e-14);
}

TEST_CASE("finite_range on a two-level B evaluates f once") {
    const Profile f = bump_profile(0.0, 1.0);
    const double a = 0.4, b = -0.1, Delta = 0.8, eps = 0.01;
    const FiniteRangeResult fr = finite_range(eps * ac::test::sigma_x(), diag({a, b}), Delta, f);
    CHECK(std::abs(fr.H(0, 1) - eps * f((a - b) / Delta)) <= 1e-15);
}

TEST_CASE("finite_range output has finite range on a random 16x16 pair") {
    Rng rng(2);
    const CMat A = unit_hermitian(16, rng), B = unit_hermitian(16, rng);
    const double Delta = 0.3;
    const FiniteRangeResult fr = finite_range(A, B, Delta, bump_profile(0, 1));
    const HermitianEig EB = eig_hermitian(B);
    for (double x : {-0.8, -0.3, 0.0, 0.4}) {
        const CMat Q1 = spectral_basis(EB, RealSet::at_most(x)), Q2 = spectral_basis(EB, RealSet::at_least(x + Delta));
        if (Q1.cols() && Q2.cols()) CHECK(op_norm(Q1.adjoint() * fr.H * Q2) <= 1e-10);
    }
    CHECK(finite_range_defect(fr.H, EB, Delta) <= 1e-10);
    CHECK(fr.dist_bound.pass());
    CHECK(fr.comm_bound.pass());
}

TEST_CASE("finite_range_multi with one B matches finite_range") {
    Rng rng(3);
    const CMat A = unit_hermitian(8, rng), B = unit_hermitian(8, rng);
    const Profile f = bump_profile(0, 1);
    CHECK(op_norm(finite_range_multi(A, {B}, 0.4, f).H - finite_range(A, B, 0.4, f).H) <= 1e-12);
}

TEST_CASE("finite_range_multi on commuting diagonal B1, B2") {
    Rng rng(4);
    const CMat A = unit_hermitian(8, rng);
    const CMat B1 = diag({0, 0.1, 0.5, 0.9, -0.2, -0.7, 0.3, 0.6});
    const CMat B2 = diag({0.8, -0.4, 0.2, 0.1, 0.0, -0.9, 0.5, -0.6});
    const double Delta = 0.35;
    const FiniteRangeResult fr = finite_range_multi(A, {B1, B2}, Delta, bump_profile(0, 1));
    for (const CMat& B : {B1, B2}) CHECK(finite_range_defect(fr.H, eig_hermitian(B), Delta) <= 1e-10);
    CHECK(fr.dist_bound.pass());
    for (const auto& c : fr.comm_bounds) CHECK(c.pass());
}

TEST_CASE("finite_range_multi leaves a commuting A unchanged") {
    const CMat A = diag({1, 2, 3}), B1 = diag({0.1, 0.5, 0.9}), B2 = diag({0.2, 0.2, 0.7});
    CHECK(op_norm(finite_range_multi(A / 3, {B1, B2}, 0.2, bump_profile(0, 1)).H - A / 3) <= 1e-14);
}

TEST_CASE("finite_range_normal on Hermitian N reduces to the real case") {
    Rng rng(5);
    const CMat A = unit_hermitian(6, rng), N = unit_hermitian(6, rng);
    const Profile f = bump_profile(0, 1);
    CHECK(op_norm(finite_range_normal(A, N, 0.4, f).H - finite_range(A, N, 0.4, f).H) <= 1e-12);
}

TEST_CASE("finite_range_normal on a diagonal unitary has finite range across arcs") {
    Rng rng(6);
    const int n = 10;
    const CMat A = unit_hermitian(n, rng);
    CMat N = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k) N(k, k) = std::polar(1.0, 2 * std::numbers::pi * k / n);
    const double Delta = 0.5;
    const FiniteRangeResult fr = finite_range_normal(A, N, Delta, bump_profile(0, 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx d = N(i, i) - N(j, j);
            if (std::max(std::abs(d.real()), std::abs(d.imag())) >= Delta) CHECK(std::abs(fr.H(i, j)) <= 1e-12);
        }
    CHECK(fr.dist_bound.pass());
    CHECK(fr.comm_bound.pass());
}

TEST_CASE("finite_range_normal with commuting A returns A") {
    CMat N = CMat::Zero(3, 3);
    N(0, 0) = 1.0;
    N(1, 1) = cplx(0, 1);
    N(2, 2) = -1.0;
    const CMat A = diag({0.2, -0.5, 0.7});
    CHECK(op_norm(finite_range_normal(A, N, 0.5, bump_profile(0, 1)).H - A) <= 1e-14);
}

TEST_CASE("partition of unity") {
    const auto two = partition_of_unity(2);
    CHECK(two.size() == 3);
    for (int nw : {2, 5, 17}) {
        const auto parts = partition_of_unity(nw);
        double worst = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            const double x = -1 + k / 1000.0;
            double s = 0.0;
            for (const auto& p : parts) s += p(x);
            worst = std::max(worst, std::abs(s - 1));
        }
        CHECK(worst <= 1e-10);
        for (std::size_t i = 0; i + 2 < parts.size(); ++i)
            for (int k = 0; k <= 400; ++k) {
                const double x = -1 + k / 200.0;
                CHECK(parts[i](x) * parts[i + 2](x) == 0.0);
            }
    }
}

TEST_CASE("tail tables") {
    const Profile f = bump_profile(0, 1);
    const TailTable t = tail_table(f, {0.0, 1.0, 4.0}, "f");
    CHECK(t.tail[0] == doctest::Approx(f.c1()).epsilon(1e-6));
    CHECK(t.tail[1] >= t.tail[2]);
    const SlowGrowth sg = default_slow_growth();
    const TailTables tt = tail_tables({1e3, 2e3}, {100.0, 200.0}, sg);
    if (tt.T.thresholds[0] >= tt.T.monotone_from) CHECK(tt.T.tail[1] < tt.T.tail[0]);
    CHECK(T_of_l(2e6, sg) < T_of_l(1e6, sg));
}

TEST_CASE("tail scaling under dilation") {
    const double w = 0.5;
    const double lhs = bump_profile(1.0 * w, w).tail(2.0);
    const double rhs = bump_profile(1.0, 1.0).tail(2.0 * w);
    CHECK(lhs == doctest::Approx(rhs).epsilon(0.01));
}
