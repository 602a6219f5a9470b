#include "ac/gallery.hpp"
#include "ac/pipeline.hpp"
#include "ac/subspace.hpp"
#include "ac/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace ac;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) o.detail.pop_back();
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = s < budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %s: %s; %.2fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), s,
                budget_seconds);
    std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

bool line_ok(const SuiteResult& r, const std::string& name, int min_trials, std::ostringstream& os) {
    const SuiteLine* l = r.line(name);
    if (!l) {
        os << name << " missing; ";
        return false;
    }
    os << name << " " << l->violations << "/" << l->trials;
    if (std::isfinite(l->worst_slack)) os << " (min rel slack " << fmt("%.2e", l->worst_slack) << ")";
    if (l->worst_value > 0) os << " (max residual " << fmt("%.1e", l->worst_value) << ")";
    os << "; ";
    return l->violations == 0 && l->trials >= min_trials;
}

CMat unit_hermitian(int n, Rng& rng) {
    CMat H = random_hermitian(n, rng);
    return H / op_norm(H);
}

CMat contraction(const CMat& X) { return X / std::max(1.0, op_norm(X)); }

CMat ramp(int n) {
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = -1 + 2.0 * i / (n - 1);
    return D;
}

}  // namespace

int main() {
    criterion("quarter-tridiagonal reproduction", 1.0, [] {
        const QuarterComparison q10 = quarter_comparison(quarter_tridiag(10));
        const QuarterComparison q50 = quarter_comparison(quarter_tridiag(50));
        double worst = 0.0;
        for (const auto& r : q10.rows) worst = std::max(worst, std::abs(r.scaled - r.printed));
        std::ostringstream os;
        os << "n=10 max |computed - printed| = " << fmt("%.2e", worst) << " (x1e-3, tol 1e-4); n=50 tail";
        for (int k = 47; k < 50; ++k) os << " " << fmt("%.4f", q50.rows[k].scaled);
        os << " vs 0.251 0.502 1.004 (1% pattern tol), ratios";
        for (double r : q50.tail_ratios) os << " " << fmt("%.3f", r);
        return Outcome{q10.pass && q50.pass, os.str()};
    });

    criterion("finite-range exactness", 30.0, [] {
        const SuiteResult r = suite_smoothing(20240601, 200);
        std::ostringstream os;
        const bool a = line_ok(r, "finite_range_exact", 200, os);
        const bool b = line_ok(r, "finite_range_distance", 200, os);
        return Outcome{a && b, os.str()};
    });

    criterion("inequality suites", 120.0, [] {
        const SuiteResult b = suite_bounds(20240602, 500);
        const SuiteResult lr = suite_lieb_robinson(20240603, 500);
        std::ostringstream os;
        bool ok = true;
        for (const char* n : {"davis_kahan_sandwich", "comm_proj", "schur_divide", "fourier_commutator"})
            ok = line_ok(b, n, 500, os) && ok;
        ok = line_ok(lr, "decay", 500, os) && ok;
        ok = line_ok(b, "comm_proj_sharpness", 1, os) && ok;
        return Outcome{ok, os.str()};
    });

    criterion("projection geometry", 60.0, [] {
        const SuiteResult r = suite_projections(20240604, 500);
        std::ostringstream os;
        bool ok = line_ok(r, "jordan_reconstruct", 200, os);
        ok = line_ok(r, "nest_sandwich", 500, os) && ok;
        ok = line_ok(r, "nest_distance", 500, os) && ok;
        return Outcome{ok, os.str()};
    });

    criterion("Szarek engine", 300.0, [] {
        Rng rng(20240605);
        int structural = 0, finite = 0;
        std::vector<double> eps2;
        double formula = 0.0;
        for (int t = 0; t < 50; ++t) {
            const TridiagonalSystem sys = random_tridiagonal(std::vector<int>(40, 1), rng);
            const SzarekResult r = szarek_W(sys);
            structural += r.cert.contains_V1 && r.cert.perp_VL;
            finite += std::isfinite(r.cert.eps2);
            eps2.push_back(r.cert.eps2);
            formula = r.diag.eps1_formula;
        }
        double worst_decoupled = 0.0;
        std::uniform_real_distribution<double> u(-1, 1);
        for (int t = 0; t < 10; ++t) {
            CMat J = CMat::Zero(40, 40);
            for (int i = 0; i < 40; ++i) J(i, i) = u(rng);
            const SzarekResult r = szarek_W(verify_tridiagonal(J, singleton_blocks(40)));
            worst_decoupled = std::max(worst_decoupled, r.cert.eps2);
        }
        std::sort(eps2.begin(), eps2.end());
        std::ostringstream os;
        os << "structural " << structural << "/50, finite eps2 " << finite << "/50, measured eps2 median "
           << fmt("%.3f", eps2[25]) << " max " << fmt("%.3f", eps2.back()) << " (asymptotic formula "
           << fmt("%.1f", formula) << ", reference only); decoupled max eps2 " << fmt("%.1e", worst_decoupled);
        return Outcome{structural == 50 && finite == 50 && worst_decoupled <= 1e-10, os.str()};
    });

    criterion("Hastings engine (desk scale)", 300.0, [] {
        HastingsConfig cfg;
        cfg.n_win = 24;
        cfg.l_b = 4;
        bool ok = true;
        int systems = 0, stages = 0;
        double maxc = 0.0, maxi = 0.0, max_alpha = 0.0, min_eps3 = kInf, max_eps3 = 0.0;
        int min_R = 1 << 30, max_R = 0, max_U = 0;
        std::string failed;
        for (int seed = 1; seed <= 12; ++seed) {
            Rng rng(seed);
            std::uniform_int_distribution<int> d(1, 2);
            std::vector<int> dims(60);
            for (auto& x : dims) x = d(rng);
            const HastingsResult r = hastings_W(random_tridiagonal(dims, rng), cfg, LinOracle{});
            const HastingsDiagnostics& g = r.diag;
            ++systems;
            ok = ok && !g.downgraded && !g.stages.empty();
            for (const auto& s : g.stages) {
                ++stages;
                if (!s.passed) failed += " seed" + std::to_string(seed) + ":" + s.id;
                ok = ok && s.passed;
                for (const auto& [k, v] : s.values) {
                    if (k == "dim_R") min_R = std::min(min_R, int(v)), max_R = std::max(max_R, int(v));
                    if (k == "dim_U") max_U = std::max(max_U, int(v));
                }
            }
            for (double c : g.N_commutators) maxc = std::max(maxc, c);
            for (double c : g.item4) maxi = std::max(maxi, c);
            const bool mpos = std::all_of(g.M_positive.begin(), g.M_positive.end(), [](bool b) { return b; });
            ok = ok && mpos && g.alpha < 1;
            max_alpha = std::max(max_alpha, g.alpha);
            min_eps3 = std::min(min_eps3, r.cert.eps3);
            max_eps3 = std::max(max_eps3, r.cert.eps3);
        }
        ok = ok && maxc <= 1 - cfg.chi + 1e-12 && maxi <= 0.5 - cfg.chi / 2 + 1e-12;
        std::ostringstream os;
        os << systems << " seeded L=60 systems, " << stages << " stage checks" << (failed.empty() ? "" : ", failed") << failed
           << "; max|[N,B^]| " << fmt("%.3f", maxc) << " <= " << 1 - cfg.chi << ", max item4 " << fmt("%.1e", maxi)
           << " <= " << 0.5 - cfg.chi / 2 << ", max alpha " << fmt("%.3f", max_alpha) << ", dim R " << min_R << ".."
           << max_R << ", max dim U " << max_U << "; measured eps3 " << fmt("%.3f", min_eps3) << ".."
           << fmt("%.3f", max_eps3) << " (asymptotic rates not tested)";
        return Outcome{ok, os.str()};
    });

    criterion("end-to-end pipeline", 120.0, [] {
        Rng rng(3);
        const CMat a = unit_hermitian(2, rng), b = unit_hermitian(2, rng);
        const CommuteReport r = commute_hermitian_pair(contraction(tn_lift(a, 6)), contraction(tn_lift(b, 6)));
        const bool tn_ok = r.comm_residual <= 1e-10 && r.distB <= 2.0 / r.n_cut + 1e-12;
        Rng rng2(4);
        const CMat D = ramp(32);
        const SweepReport s = sweep(D, CMat(0.9 * D * D * D), random_hermitian(32, rng2), random_hermitian(32, rng2),
                                    {0.1, 0.03, 0.01, 0.003, 0.001});
        std::ostringstream os;
        os << "T_N(n=2,N=6): residual " << fmt("%.1e", r.comm_residual) << ", distA " << fmt("%.3f", r.distA)
           << ", distB " << fmt("%.3f", r.distB) << " <= 2/n_cut = " << fmt("%.3f", 2.0 / r.n_cut)
           << "; sweep distA";
        for (const auto& row : s.rows) os << " " << fmt("%.3g", row.distA);
        os << " distB";
        for (const auto& row : s.rows) os << " " << fmt("%.3g", row.distB);
        os << " (trend A " << (s.distA_trend ? "down" : "not down") << ", B " << (s.distB_trend ? "down" : "not down")
           << "; pointwise A " << (s.distA_nonincreasing ? "monotone" : "not monotone") << ", B "
           << (s.distB_nonincreasing ? "monotone" : "not monotone") << ")";
        return Outcome{tn_ok && s.rows.size() == 5 && s.distA_trend && s.distB_trend, os.str()};
    });

    criterion("T_N identities", 60.0, [] {
        const SuiteResult r = suite_tn(7, 100);
        std::ostringstream os;
        bool ok = true;
        for (const char* n : {"commutator", "recursion", "covariance", "norm_upper", "norm_lower", "spectrum_T3_diag01"})
            ok = line_ok(r, n, 1, os) && ok;
        Rng rng(8);
        double printed = 0.0;
        for (int N = 1; N <= 4; ++N)
            printed = std::max(printed, tn_identities(unit_hermitian(2, rng), unit_hermitian(2, rng), N, rng).recursion_printed);
        os << "recursion as printed max residual " << fmt("%.2e", printed) << " (reported only)";
        return Outcome{ok, os.str()};
    });

    criterion("Voiculescu/winding", 60.0, [] {
        double worst = 0.0;
        for (int n = 1; n <= 64; ++n) {
            const auto [U, V] = voiculescu(n);
            const double expected = std::abs(1.0 - std::polar(1.0, 2 * std::numbers::pi / n));
            worst = std::max(worst, std::abs(op_norm(commutator(U, V)) - expected));
        }
        const auto [U8, V8] = voiculescu(8);
        const CMat I = CMat::Identity(8, 8);
        const WindingResult w = winding_number(U8, V8, I, I);
        CMat Uc = CMat::Zero(8, 8), Vc = CMat::Zero(8, 8);
        for (int i = 0; i < 8; ++i) {
            Uc(i, i) = std::polar(1.0, 0.7 * i);
            Vc(i, i) = std::polar(1.0, -0.4 * i);
        }
        const WindingResult z = winding_number(Uc, Vc, Uc, Vc);
        std::ostringstream os;
        os << "max ||[U,V]| - |1-w|| over n<=64 " << fmt("%.1e", worst) << "; winding(U8,V8 -> I,I) = " << w.winding
           << (w.stable ? " stable" : " unstable") << "; commuting self-path winding " << z.winding;
        return Outcome{worst <= 1e-10 && w.winding != 0 && w.stable && z.winding == 0, os.str()};
    });

    criterion("exponent bookkeeping", 1.0, [] {
        const double g1 = choose_exponents(1.0).gamma;
        const double g9 = choose_exponents(1.0 / 9, false).gamma;
        const double g4 = choose_exponents(0.25).gamma;
        auto exact = [](double x, double y) { return std::abs(x - y) <= 2 * std::numeric_limits<double>::epsilon() * y; };
        std::ostringstream os;
        os.precision(17);
        os << "gamma(1) = " << g1 << ", gamma(1/9, no finite range) = " << g9 << ", gamma(1/4) = " << g4;
        return Outcome{exact(g1, 1.0 / 3) && exact(g9, 0.1) && exact(g4, 1.0 / 6), os.str()};
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
