#include "ac/subspace.hpp"

#include "subspace_detail.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>
#include <sstream>

namespace ac {

namespace {

constexpr double kExact = 1e-10;

int cols(const CMat& M) { return static_cast<int>(M.cols()); }

CMat rows_cols(const CMat& M, const std::vector<int>& r, const std::vector<int>& c) {
    CMat out(r.size(), c.size());
    for (std::size_t j = 0; j < c.size(); ++j)
        for (std::size_t i = 0; i < r.size(); ++i) out(i, j) = M(r[i], c[j]);
    return out;
}

CMat embed_rows(const CMat& local, const std::vector<int>& idx, int n) {
    CMat out = CMat::Zero(n, local.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(idx[i]) = local.row(i);
    return out;
}

double restricted_norm(const CVec& v, const std::vector<int>& idx) {
    double s = 0.0;
    for (int k : idx) s += std::norm(v(k));
    return std::sqrt(s);
}

StageRecord& add_stage(HastingsDiagnostics& d, const std::string& id) {
    d.stages.push_back({id, true, "", {}});
    return d.stages.back();
}

void fail(StageRecord& s, const std::string& what) {
    s.passed = false;
    if (!s.detail.empty()) s.detail += "; ";
    s.detail += what;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

}  // namespace

std::vector<int> HastingsState::coords(double lo, double hi) const {
    std::vector<int> out;
    for (int j = 0; j <= n_win; ++j)
        if (j >= lo && j < hi)
            for (int k = 0; k < size[j]; ++k) out.push_back(offset[j] + k);
    return out;
}

std::vector<int> HastingsState::Y(int i) const {
    const double lo = (i - 1.0) * l_b;
    const double hi = i == n_b ? n_win + 1.0 : (i + 1.0) * l_b;
    return coords(lo, hi);
}

std::vector<int> HastingsState::Yp(int i) const {
    if (i <= 0) return coords(0, 0.75 * l_b);
    if (i >= n_b + 1) return coords((n_b + 0.25) * l_b, n_win + 1.0);
    const double lo = i == 1 ? 0.0 : (i - 0.75) * l_b;
    const double hi = i == n_b ? n_win + 1.0 : (i + 0.75) * l_b;
    return coords(lo, hi);
}

std::vector<int> HastingsState::Ypp(int i) const {
    const double lo = i == 1 ? 0.0 : (i - 0.5) * l_b;
    const double hi = i == n_b ? n_win + 1.0 : (i + 0.5) * l_b;
    return coords(lo, hi);
}

bool HastingsDiagnostics::all_passed() const {
    for (const auto& s : stages)
        if (!s.passed) return false;
    return true;
}

const StageRecord* HastingsDiagnostics::stage(const std::string& id) const {
    for (const auto& s : stages)
        if (s.id == id) return &s;
    return nullptr;
}

DecayFit decay_check_U(const HastingsState& st, int samples, Rng& rng) {
    DecayFit out;
    const int nb = st.n_b;
    const int R = st.dimR();
    out.coefficients.assign(nb, std::vector<double>(nb, 0.0));
    out.YUY.assign(nb, std::vector<double>(nb, 0.0));
    if (nb == 0 || R == 0) return out;
    const CMat Uproj = st.U * st.U.adjoint();
    for (int i = 1; i <= nb; ++i)
        for (int j = 1; j <= nb; ++j) out.YUY[j - 1][i - 1] = op_norm(rows_cols(Uproj, st.Y(j), st.Y(i)));
    const double x = st.chi / (2 - 2 * st.chi);
    const double scale = 2 * (1 + x) / (1 - 2 * st.eta);
    const Eigen::CompleteOrthogonalDecomposition<CMat> cod(st.family);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 1; i <= nb; ++i) {
        const std::vector<int> Yi = st.Y(i);
        if (Yi.empty()) continue;
        for (int t = 0; t < samples; ++t) {
            CVec y = CVec::Zero(R);
            for (int k : Yi) y(k) = cplx(g(rng), g(rng));
            y /= y.norm();
            CVec c = st.family.cols() > 0 ? CVec(cod.solve(y)) : CVec(0);
            std::vector<CVec> n_s(nb, CVec::Zero(R));
            for (int k = 0; k < c.size(); ++k) n_s[st.family_owner[k] - 1] += st.family.col(k) * c(k);
            for (int j = 1; j <= nb; ++j)
                out.coefficients[i - 1][j - 1] = std::max(out.coefficients[i - 1][j - 1], n_s[j - 1].norm());
            std::vector<int> odd;
            for (int s = 1; s <= nb; s += 2)
                if (cols(st.Nprime[s - 1]) > 0) odd.push_back(s);
            const int k = static_cast<int>(odd.size());
            CMat m(R, k);
            RVec cv(k), dv(k);
            for (int a = 0; a < k; ++a) {
                const int s = odd[a];
                const double nn = n_s[s - 1].norm();
                CVec ms = nn > 1e-12 ? CVec(n_s[s - 1] / nn) : CVec(st.Nprime[s - 1].col(0));
                m.col(a) = ms;
                cv(a) = restricted_norm(ms, st.Yp(s - 1));
                dv(a) = restricted_norm(ms, st.Yp(s + 1));
            }
            const CMat Q = (CMat::Identity(R, R) - st.Ne) * m;
            const CMat M = scale * (Q.adjoint() * Q);
            const CMat Mx = hermitian_part(M - x * CMat::Identity(k, k));
            const PositivityResult pr = tridiag_positive_test(Mx, cv, dv);
            out.M_positive.push_back(pr.applicable && pr.positive);
            out.M_min_eigenvalue.push_back(k > 0 ? eig_hermitian(M).values(0) : kInf);
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
            const double v = out.coefficients[i][j];
            if (v <= 1e-14) continue;
            const double dd = std::abs(i - j), ly = std::log(v);
            sx += dd;
            sy += ly;
            sxx += dd * dd;
            sxy += dd * ly;
            ++cnt;
        }
    out.alpha = 0.0;
    if (cnt >= 2 && cnt * sxx - sx * sx > 0) out.alpha = std::exp((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx));
    out.C1 = 0.0;
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
            const double v = out.coefficients[i][j];
            if (v <= 1e-14) continue;
            out.C1 = std::max(out.C1, i == j || out.alpha == 0.0 ? v : v / std::pow(out.alpha, std::abs(i - j)));
        }
    out.ok = out.alpha < 1.0;
    const double a = std::max(out.alpha, 1e-2);
    out.C2 = (1 + a + 1 / a) * out.C1;
    return out;
}

HastingsResult hastings_W(const TridiagonalSystem& sys, const HastingsConfig& cfg, const LinOracle& oracle) {
    const int L = sys.L();
    const int n = sys.dim();
    if (L < 2) throw PreconditionError("hastings_W: need at least two blocks");
    if (cfg.l_b < 1) throw PreconditionError("hastings_W: l_b must be positive");
    if (!(cfg.chi > 0 && cfg.chi < 1)) throw PreconditionError("hastings_W: chi must lie in (0, 1)");
    if (!(cfg.eta > 0 && cfg.eta < cfg.chi / 4)) throw PreconditionError("hastings_W: need 0 < eta < chi/4");
    HastingsResult res;
    HastingsDiagnostics& d = res.diag;
    HastingsState& st = res.state;
    if (auto split = detail::exact_split(sys)) {
        res.cert = detail::trivial_certificate(sys, split->first, "hastings", split->second);
        return res;
    }
    SlowGrowth sg = cfg.growth;
    sg.beta1 = cfg.beta1;
    d.n_win = cfg.n_win ? *cfg.n_win : n_win_for(L, sg);
    if (d.n_win < 2) throw PreconditionError("hastings_W: n_win must be at least 2");
    d.l_b = cfg.l_b;
    d.kappa = 2.0 / d.n_win;
    d.lambda_min = cfg.lambda_min ? *cfg.lambda_min : 1.0 / (std::pow(L, cfg.beta2) * (d.n_win + 1));
    d.G_lb = sg.G(d.l_b);
    const int k_b = (d.n_win + 1) / d.l_b - 1;
    d.n_b = cfg.n_b ? *cfg.n_b : (k_b % 2 == 1 ? k_b : k_b - 1);

    auto downgrade = [&](const std::string& why) {
        d.downgraded = true;
        res.cert = szarek_W(sys).cert;
        res.cert.notes.push_back("hastings downgraded to szarek: " + why);
        return res;
    };
    if (cfg.delta_proxy) {
        d.gate_evaluated = true;
        const double CF = bump_profile(1.0, 1.0).c0();
        d.gate_passed = d.G_lb > 16 * CF / *cfg.delta_proxy;
        if (!d.gate_passed) return downgrade("G(l_b) <= 16 C/delta");
    }
    if (d.n_b < 1) return downgrade("fewer than one superblock");

    st.n_win = d.n_win;
    st.l_b = d.l_b;
    st.n_b = d.n_b;
    st.chi = cfg.chi;
    st.eta = cfg.eta;

    // (a) X-spaces
    {
        StageRecord& s = add_stage(d, "a");
        const HermitianEig EJ = eig_hermitian(sys.J);
        const CMat& V1 = sys.blocks.front();
        const std::vector<Profile> windows = partition_of_unity(d.n_win);
        std::vector<CMat> X;
        double worst_ratio = kInf;
        int offset = 0;
        for (int i = 0; i <= d.n_win; ++i) {
            const CMat tau = apply_real_function(EJ, [&](double t) { return windows[i](t); }) * V1;
            const HermitianEig G = eig_hermitian(hermitian_part(tau.adjoint() * tau));
            std::vector<int> keep;
            for (int k = 0; k < G.dim(); ++k)
                if (G.values(k) > d.lambda_min) keep.push_back(k);
            CMat Xi(n, keep.size());
            for (std::size_t k = 0; k < keep.size(); ++k) {
                const double sv = std::sqrt(G.values(keep[k]));
                Xi.col(k) = tau * G.vectors.col(keep[k]) / sv;
                worst_ratio = std::min(worst_ratio, sv / std::sqrt(d.lambda_min));
            }
            st.offset.push_back(offset);
            st.size.push_back(cols(Xi));
            offset += cols(Xi);
            X.push_back(Xi);
        }
        st.A = hstack(X, n);
        s.values = {{"dim_R", double(offset)}, {"min_tau_ratio", worst_ratio}};
        if (worst_ratio < 1 - 1e-10) fail(s, "|tau x| < lambda_min^{1/2}|x|");
        if (offset == 0) {
            s.detail = "all X-spaces empty";
            res.cert = detail::trivial_certificate(sys, CMat(n, 0), "hastings", "all X-spaces empty");
            return res;
        }
    }

    // (b) superblocks and rho
    {
        StageRecord& s = add_stage(d, "b");
        st.rho = hermitian_part(st.A.adjoint() * st.A);
        double diag_dev = 0.0, off_dev = 0.0;
        for (int i = 0; i <= d.n_win; ++i)
            for (int j = 0; j <= d.n_win; ++j) {
                if (st.size[i] == 0 || st.size[j] == 0) continue;
                const CMat blk = st.rho.block(st.offset[i], st.offset[j], st.size[i], st.size[j]);
                if (i == j) diag_dev = std::max(diag_dev, op_norm(blk - CMat::Identity(st.size[i], st.size[i])));
                else if (std::abs(i - j) >= 2) off_dev = std::max(off_dev, op_norm(blk));
            }
        s.values = {{"n_b", double(d.n_b)}, {"diag_identity_defect", diag_dev}, {"off_tridiagonal", off_dev}};
        if (diag_dev > kExact) fail(s, "diagonal blocks of rho not identity");
        if (off_dev > kExact) fail(s, "rho not block tridiagonal");
        if (d.n_b % 2 == 0) fail(s, "n_b must be odd");
    }

    const int R = st.dimR();
    const CMat IR = CMat::Identity(R, R);

    // (c) N_i
    {
        StageRecord& s = add_stage(d, "c");
        const double g = d.G_lb / d.l_b;
        const Profile bump = bump_profile(g, g);
        double worst_sandwich = 0.0, worst_comm = 0.0, worst_lin = 0.0;
        for (int i = 1; i <= d.n_b; ++i) {
            const std::vector<int> idx = st.Yp(i);
            const int k = static_cast<int>(idx.size());
            if (k == 0) {
                st.N.push_back(CMat(R, 0));
                d.N_commutators.push_back(0.0);
                continue;
            }
            const double lo = i == 1 ? 0.0 : (i - 0.75) * d.l_b;
            std::vector<double> bhat;
            for (int j = 0; j <= d.n_win; ++j) {
                if (!(j >= lo && j < (i == d.n_b ? d.n_win + 1.0 : (i + 0.75) * d.l_b))) continue;
                double b;
                if (j < (i - 0.25) * d.l_b) b = -1.0;
                else if (j >= (i + 0.25) * d.l_b) b = 1.0;
                else b = 2.0 / (d.l_b / 2.0 + 1) * (j - (i + 0.25) * d.l_b) + 1;
                b = std::clamp(b, -1.0, 1.0);
                for (int t = 0; t < st.size[j]; ++t) bhat.push_back(b);
            }
            CMat Bh = CMat::Zero(k, k);
            for (int t = 0; t < k; ++t) Bh(t, t) = bhat[t];
            const CMat rho_i = rows_cols(st.rho, idx, idx);
            const HermitianEig Er = eig_hermitian(rho_i);
            const CMat f = hermitian_part(apply_real_function(Er, [&](double x) { return 1 - 2 * bump(x); }));
            const LinProjection lp = lin_oracle_projection(f, Bh, 1.0 / 22, oracle);
            const CMat Ik = CMat::Identity(k, k);
            const CMat low = spectral_projection(Er, RealSet::closed(-kInf, g)).matrix;
            const CMat high = spectral_projection(Er, RealSet::at_least(2 * g)).matrix;
            const CMat& P = lp.P.matrix;
            const double sw = std::max(op_norm(low - P * low), op_norm(P - (Ik - high) * P));
            worst_sandwich = std::max(worst_sandwich, sw);
            const double cm = op_norm(commutator(P, Bh));
            d.N_commutators.push_back(cm);
            worst_comm = std::max(worst_comm, cm);
            if (!lp.bound.pass()) worst_lin = std::max(worst_lin, lp.bound.lhs - lp.bound.rhs);
            st.N.push_back(embed_rows(projection_basis(lp.P), idx, R));
        }
        s.values = {{"sandwich_defect", worst_sandwich}, {"max_commutator", worst_comm}, {"chi", cfg.chi},
                    {"lin_bound_excess", worst_lin}};
        if (worst_sandwich > kExact) fail(s, "sandwich defect " + fmt(worst_sandwich));
        if (worst_comm > 1 - cfg.chi + 1e-10) fail(s, "|[N_i, B_i]| = " + fmt(worst_comm) + " > 1 - chi");
        if (worst_lin > 0) fail(s, "lin oracle bound violated");
    }

    // (d) pruning and semi-orthogonality
    {
        StageRecord& s = add_stage(d, "d");
        st.Ne = CMat::Zero(R, R);
        for (int i = 2; i <= d.n_b; i += 2) st.Ne += st.N[i - 1] * st.N[i - 1].adjoint();
        const OrthoProjection Ne{st.Ne, 0};
        double worst_item4 = 0.0, worst_pair = 0.0;
        for (int i = 1; i <= d.n_b; ++i) {
            const CMat Pi = st.N[i - 1] * st.N[i - 1].adjoint();
            const double v = op_norm(rows_cols(Pi, st.Yp(i + 1), st.Yp(i - 1)));
            d.item4.push_back(v);
            worst_item4 = std::max(worst_item4, v);
            if (i % 2 == 0) {
                st.Nprime.push_back(st.N[i - 1]);
                continue;
            }
            if (cols(st.N[i - 1]) == 0) {
                st.Nprime.push_back(CMat(R, 0));
                continue;
            }
            const CMat jb = jordan_basis(projector(st.N[i - 1]), Ne);
            std::vector<CMat> keep;
            for (int k = 0; k < cols(jb); ++k)
                if ((st.Ne * jb.col(k)).squaredNorm() <= 0.5 + cfg.eta) keep.push_back(jb.col(k));
            st.Nprime.push_back(hstack(keep, R));
        }
        for (int i = 1; i <= d.n_b; i += 2)
            for (int j = i + 2; j <= d.n_b; j += 2)
                worst_pair = std::max(worst_pair, op_norm(st.Nprime[i - 1].adjoint() * st.Nprime[j - 1]));
        s.values = {{"max_item4", worst_item4}, {"odd_overlap", worst_pair}};
        if (worst_item4 > 0.5 - cfg.chi / 2 + 1e-10)
            fail(s, "|Y'_{i+1} N_i Y'_{i-1}| = " + fmt(worst_item4) + " > 1/2 - chi/2");
    }

    // (e) U and W
    const double p = std::pow(std::sqrt((1 - cfg.eta) / (1 - 2 * cfg.eta)) - 1, 2);
    const double Cc = std::max((1 + std::sqrt(1 - cfg.eta)) / 2, std::sqrt(1 - p * p));
    d.C3 = 1 / (1 - Cc * Cc);
    CMat W;
    {
        StageRecord& s = add_stage(d, "e");
        std::vector<CMat> fam;
        for (int i = 1; i <= d.n_b; ++i) {
            const CMat& b = st.Nprime[i - 1];
            fam.push_back(b);
            for (int k = 0; k < cols(b); ++k) st.family_owner.push_back(i);
        }
        st.family = hstack(fam, R);
        const int frank = cols(range_basis(st.family));
        st.U = orth_complement(st.family, R);
        const CMat AU = st.A * st.U;
        W = range_basis(AU);
        if (cols(st.U) > 0) {
            Eigen::JacobiSVD<CMat> svd(AU);
            d.min_Au = svd.singularValues()(svd.singularValues().size() - 1);
        } else {
            d.min_Au = kInf;
        }
        const double lower = 1 / std::sqrt(d.C3 * d.l_b);
        s.values = {{"dim_U", double(cols(st.U))}, {"family_rank", double(frank)},
                    {"family_cols", double(cols(st.family))}, {"min_Au", d.min_Au}, {"lower_bound", lower}};
        if (d.min_Au < lower) fail(s, "|Au| < (C3 l_b)^{-1/2}|u|");
        if (frank < cols(st.family)) fail(s, "N-family not linearly independent");
    }

    // decay and proof-matrix positivity
    {
        StageRecord& s = add_stage(d, "decay");
        Rng rng(cfg.seed);
        const DecayFit fit = decay_check_U(st, cfg.decay_samples, rng);
        d.C1 = fit.C1;
        d.alpha = fit.alpha;
        d.C2 = fit.C2;
        d.YUY = fit.YUY;
        d.M_positive = fit.M_positive;
        double worst_yuy = 0.0;
        const double a = std::max(fit.alpha, 1e-2);
        for (int i = 0; i < d.n_b; ++i)
            for (int j = 0; j < d.n_b; ++j)
                worst_yuy = std::max(worst_yuy, fit.YUY[j][i] / (fit.C2 * std::pow(a, std::abs(i - j))));
        s.values = {{"alpha", fit.alpha}, {"C1", fit.C1}, {"C2", fit.C2}, {"YUY_ratio", worst_yuy}};
        if (!fit.ok) fail(s, "decay fit alpha = " + fmt(fit.alpha) + " >= 1");
        if (worst_yuy > 1 + 1e-9) fail(s, "|Y_j U Y_i| exceeds C2 alpha^|i-j|");
        StageRecord& sm = add_stage(d, "M");
        int bad = 0;
        for (bool b : fit.M_positive) bad += !b;
        double mineig = kInf;
        for (double v : fit.M_min_eigenvalue) mineig = std::min(mineig, v);
        sm.values = {{"samples", double(fit.M_positive.size())}, {"failures", double(bad)},
                     {"min_eigenvalue", mineig}, {"x", cfg.chi / (2 - 2 * cfg.chi)}};
        if (bad > 0) fail(sm, std::to_string(bad) + " samples without certified positivity of M - xI");
    }

    // (f) certificate and reference lines
    {
        StageRecord& s = add_stage(d, "f");
        res.cert = certify_W(sys, W);
        res.cert.engine = "hastings";
        const double a = std::max(d.alpha, 1e-2);
        const double ca = 1 + a + 1 / a;
        const double C4 = d.C1 * std::sqrt(2 * ca) * (1 + a) / (1 - a);
        double Calpha = 0.0;
        for (int x = 0; x <= 4000; ++x) Calpha = std::max(Calpha, (x + 3) * std::pow(a, x / 2.0));
        const double Ka = 2 * std::sqrt(3.0) * std::sqrt(ca) * Calpha * d.C2 * (2 + a) / (2 - a);
        d.eps3_reference = C4 * std::sqrt(2 * d.G_lb / d.l_b) + std::sqrt(2 * d.lambda_min * (d.n_win + 1));
        d.eps4_reference = d.kappa * d.l_b * Ka * std::sqrt(d.C3 * d.l_b);
        const Profile f = bump_profile(0.0, 1.0);
        const double S = f.tail((L - 1) / (std::exp(2.0) * d.n_win)) + f.c1() * std::exp(-(L - 1) / 2.0);
        d.eps5_reference = S * std::sqrt(d.C3 * (d.n_win + 1) * d.l_b / d.lambda_min);
        if (d.alpha >= 1) d.eps3_reference = d.eps4_reference = kInf;
        s.values = {{"eps3", res.cert.eps3}, {"eps4", res.cert.eps4}, {"eps5", res.cert.eps5},
                    {"eps2", res.cert.eps2}, {"eps3_reference", d.eps3_reference},
                    {"eps4_reference", d.eps4_reference}, {"eps5_reference", d.eps5_reference}};
        if (!res.cert.contains_V1 || !res.cert.perp_VL) fail(s, "repaired W does not nest between V_1 and V_L-perp");
    }
    for (const auto& s : d.stages)
        if (!s.passed) res.cert.notes.push_back("stage " + s.id + " failed: " + s.detail);
    return res;
}

}  // namespace ac
