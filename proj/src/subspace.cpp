#include "ac/subspace.hpp"

#include "ac/gallery.hpp"
#include "subspace_detail.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <map>
#include <cmath>
#include <numbers>

namespace ac {

namespace {

constexpr double kExact = 1e-10;

int cols(const CMat& M) { return static_cast<int>(M.cols()); }

int numeric_rank(const CMat& M, double tol = 1e-10) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<CMat> svd(M);
    const RVec& s = svd.singularValues();
    int r = 0;
    while (r < s.size() && s(r) > tol) ++r;
    return r;
}

}  // namespace

CMat TridiagonalSystem::span(int first, int last) const {
    std::vector<CMat> parts;
    for (int k = std::max(0, first); k <= std::min(last, L() - 1); ++k) parts.push_back(blocks[k]);
    return hstack(parts, dim());
}

std::vector<CMat> singleton_blocks(int n) {
    std::vector<CMat> out;
    for (int i = 0; i < n; ++i) {
        CMat e = CMat::Zero(n, 1);
        e(i, 0) = 1.0;
        out.push_back(e);
    }
    return out;
}

TridiagonalSystem random_tridiagonal(const std::vector<int>& dims, Rng& rng) {
    int n = 0;
    std::vector<int> off;
    for (int d : dims) {
        if (d < 0) throw PreconditionError("random_tridiagonal: negative block size");
        off.push_back(n);
        n += d;
    }
    if (n == 0) throw PreconditionError("random_tridiagonal: empty system");
    CMat J = CMat::Zero(n, n);
    const int L = static_cast<int>(dims.size());
    for (int i = 0; i < L; ++i) {
        if (dims[i] == 0) continue;
        J.block(off[i], off[i], dims[i], dims[i]) = random_hermitian(dims[i], rng);
        if (i + 1 < L && dims[i + 1] > 0) {
            const CMat C = random_complex(dims[i + 1], dims[i], rng);
            J.block(off[i + 1], off[i], dims[i + 1], dims[i]) = C;
            J.block(off[i], off[i + 1], dims[i], dims[i + 1]) = C.adjoint();
        }
    }
    J /= op_norm(J);
    std::vector<CMat> blocks;
    for (int i = 0; i < L; ++i) blocks.push_back(CMat::Identity(n, n).middleCols(off[i], dims[i]));
    return verify_tridiagonal(J, blocks);
}

TridiagonalSystem verify_tridiagonal(const CMat& J, const std::vector<CMat>& blocks) {
    const int n = static_cast<int>(J.rows());
    if (J.cols() != n) throw PreconditionError("verify_tridiagonal: J must be square");
    if (!is_hermitian(J)) throw PreconditionError("verify_tridiagonal: J not Hermitian");
    if (op_norm(J) > 1.0 + 1e-8) throw PreconditionError("verify_tridiagonal: |J| > 1");
    if (blocks.empty()) throw PreconditionError("verify_tridiagonal: no blocks");
    for (const auto& b : blocks)
        if (b.rows() != n) throw PreconditionError("verify_tridiagonal: block row count mismatch");
    const CMat all = hstack(blocks, n);
    if (all.cols() != n || op_norm(all.adjoint() * all - CMat::Identity(n, n)) > 1e-8)
        throw PreconditionError("verify_tridiagonal: blocks are not an orthonormal decomposition");
    TridiagonalSystem sys{hermitian_part(J), blocks, 0.0};
    const int L = sys.L();
    for (int i = 0; i < L; ++i)
        for (int j = i + 2; j < L; ++j) {
            const double c = op_norm(blocks[i].adjoint() * sys.J * blocks[j]);
            sys.coupling_defect = std::max(sys.coupling_defect, c);
            if (c > 1e-8)
                throw PreconditionError("verify_tridiagonal: blocks " + std::to_string(i + 1) + " and " +
                                        std::to_string(j + 1) + " coupled with norm " + std::to_string(c));
        }
    return sys;
}

TridiagonalSystem reversed(const TridiagonalSystem& sys) {
    TridiagonalSystem out = sys;
    std::reverse(out.blocks.begin(), out.blocks.end());
    return out;
}

WCertificate certify_W(const TridiagonalSystem& sys, const CMat& W) {
    const int n = sys.dim();
    if (sys.L() < 2) throw PreconditionError("certify_W: need at least two blocks");
    if (W.rows() != n) throw PreconditionError("certify_W: W has wrong row count");
    if (W.cols() > 0 && op_norm(W.adjoint() * W - CMat::Identity(W.cols(), W.cols())) > 1e-8)
        throw PreconditionError("certify_W: W not orthonormal");
    WCertificate c;
    c.W = W;
    const CMat I = CMat::Identity(n, n);
    const CMat PW = W * W.adjoint();
    const CMat Pperp = I - PW;
    const CMat& V1 = sys.blocks.front();
    const CMat& VL = sys.blocks.back();
    c.eps3 = op_norm(Pperp * V1);
    c.eps4 = op_norm(Pperp * sys.J * W);
    c.eps5 = op_norm(VL.adjoint() * W);
    c.eps3_dual = op_norm(V1.adjoint() * Pperp);
    c.eps4_dual = op_norm(W.adjoint() * sys.J * Pperp);
    c.eps5_dual = op_norm(PW * VL);
    c.dual_gap = std::max({std::abs(c.eps3 - c.eps3_dual), std::abs(c.eps4 - c.eps4_dual),
                           std::abs(c.eps5 - c.eps5_dual)});
    const NestResult nest = nest_projection_any(projector(V1), {I - VL * VL.adjoint(), n - cols(VL)}, {PW, cols(W)});
    c.W_nested = nest.basis;
    c.nest_eps = nest.eps;
    c.nest_distance = nest.distance;
    c.eps2 = op_norm((I - nest.F.matrix) * sys.J * c.W_nested);
    const double worst = std::max(c.eps3, c.eps5);
    c.eps2_bound = make_check(c.eps2, c.eps4 + 15 * worst, "eps2 <= eps4 + 15 max(eps3, eps5)");
    c.eps2_stated_rhs = c.eps4 + 10 * worst;
    c.contains_V1 = op_norm(V1 - nest.F.matrix * V1) <= kExact;
    c.perp_VL = op_norm(VL.adjoint() * c.W_nested) <= kExact;
    return c;
}

KrylovReduction krylov_reduce(const TridiagonalSystem& sys0, int i0) {
    const int L = sys0.L();
    if (i0 < 1 || i0 >= L) throw PreconditionError("krylov_reduce: need 1 <= i < L");
    KrylovReduction out;
    out.i = i0;
    out.m = numeric_rank(sys0.blocks[i0].adjoint() * sys0.J * sys0.blocks[i0 - 1]);
    const int half = (L + 1) / 2;
    out.reversed = i0 > half;
    const TridiagonalSystem sys = out.reversed ? reversed(sys0) : sys0;
    const int i = out.reversed ? L - i0 : i0;
    const int n = sys.dim();
    CMat M = sys.span(0, i - 1);
    out.H.push_back(M);
    out.H0 = M;
    while (true) {
        const CMat next = orth_against(sys.J * out.H.back(), M);
        if (next.cols() == 0) break;
        out.H.push_back(next);
        M = hstack({M, next}, n);
    }
    out.n_plus = static_cast<int>(out.H.size()) - 1;
    if (i + out.n_plus < L) {
        out.trivial = true;
        out.exact_W = M;
        return out;
    }
    const int Lr = L - i;
    std::vector<CMat> amb;
    for (int k = 1; k <= out.n_plus; ++k) amb.push_back(out.H[k]);
    out.embed = hstack(amb, n);
    const CMat Jr = hermitian_part(out.embed.adjoint() * sys.J * out.embed);
    const int nr = cols(out.embed);
    std::vector<CMat> rblocks;
    int offset = 0;
    for (int k = 1; k <= out.n_plus; ++k) {
        const int d = cols(out.H[k]);
        if (k < Lr) {
            CMat b = CMat::Zero(nr, d);
            b.middleRows(offset, d) = CMat::Identity(d, d);
            rblocks.push_back(b);
        } else {
            const int rest = nr - offset;
            CMat b = CMat::Zero(nr, rest);
            b.bottomRows(rest) = CMat::Identity(rest, rest);
            rblocks.push_back(b);
            break;
        }
        offset += d;
    }
    out.reduced = verify_tridiagonal(Jr, rblocks);
    return out;
}

IntervalSelection select_intervals(const std::vector<Atom>& mu, double kappa, double eta) {
    if (!(eta > 0) || !(kappa > 8 * eta)) throw PreconditionError("select_intervals: need kappa > 8 eta > 0");
    if (kappa > 2) throw PreconditionError("select_intervals: kappa must not exceed 2");
    IntervalSelection out;
    for (const auto& a : mu) {
        if (a.x < -1e-12 || a.x > 1 + 1e-12 || a.mass < 0) throw PreconditionError("select_intervals: atom outside [0,1]");
        out.total_mass += a.mass;
    }
    const double h = kappa / 2;
    const int K = static_cast<int>(std::ceil(1.0 / h - 1e-12));
    std::vector<double> cuts;
    const int windows = static_cast<int>(std::floor(h / eta));
    for (int k = 1; k <= K - 2; ++k) {
        const double c0 = k * h;
        std::map<int, double> window_mass;
        for (const auto& a : mu) {
            if (a.x < c0 || a.x >= c0 + windows * eta) continue;
            int j = static_cast<int>(std::floor((a.x - c0) / eta));
            if (a.x < c0 + j * eta) --j;
            if (a.x >= c0 + (j + 1) * eta) ++j;
            if (j >= 0 && j < windows) window_mass[j] += a.mass;
        }
        double best = kInf;
        int best_j = 0;
        for (int j = 0; j < windows; ++j) {
            const auto it = window_mass.find(j);
            const double m = it == window_mass.end() ? 0.0 : it->second;
            if (m < best) {
                best = m;
                best_j = j;
            }
            if (best == 0.0) break;
        }
        cuts.push_back(c0 + best_j * eta);
        out.excluded_mass += best;
    }
    double start = 0.0;
    for (double c : cuts) {
        out.intervals.push_back({start, c, true, false});
        start = c + eta;
    }
    out.intervals.push_back({start, 1.0, true, true});
    double diam = 0.0, gap = kInf;
    for (std::size_t k = 0; k < out.intervals.size(); ++k) {
        diam = std::max(diam, out.intervals[k].hi - out.intervals[k].lo);
        if (k > 0) gap = std::min(gap, out.intervals[k].lo - out.intervals[k - 1].hi);
    }
    if (out.intervals.size() == 1) gap = eta;
    out.count = make_check(static_cast<double>(out.intervals.size()), 2 / kappa, "intervals r <= 2/kappa");
    out.diameter = make_check(diam, kappa * (1 + 1e-12), "interval diameter <= kappa");
    out.gap = make_check(eta * (1 - 1e-12), gap, "interval gap >= eta");
    out.excluded = make_check(out.excluded_mass, 4 * eta / kappa * out.total_mass * (1 + 1e-12), "excluded mass");
    return out;
}

namespace {

double cheb_eval(const RVec& c, double x) {
    const double t = 2 * x - 1;
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        const double b0 = 2 * t * b1 - b2 + c(k);
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c(0);
}

/// Smoothed indicator of I: 1 on I, 0 beyond `ramp` outside.
double mollified(const Interval& I, double ramp, double x) {
    if (x >= I.lo && x <= I.hi) return 1.0;
    const double d = x < I.lo ? I.lo - x : x - I.hi;
    return d >= ramp ? 0.0 : smooth_step(d / ramp);
}

}  // namespace

RVec PolyPartition::eval(double x) const {
    const int r = static_cast<int>(intervals.size());
    RVec p(r);
    for (int j = 0; j < r; ++j) p(j) = std::clamp(cheb_eval(coeffs[j], x), 0.0, 1.0);
    const double s = p.sum();
    if (s <= 1e-300) return RVec::Constant(r, 1.0 / r);
    return p / s;
}

PolyPartition poly_partition(const std::vector<Interval>& intervals, int degree, std::optional<double> gamma_target) {
    if (intervals.empty()) throw PreconditionError("poly_partition: no intervals");
    if (degree < 0) throw PreconditionError("poly_partition: negative degree");
    PolyPartition out;
    out.intervals = intervals;
    out.degree = degree;
    const int r = static_cast<int>(intervals.size());
    double min_gap = 1.0;
    for (int j = 1; j < r; ++j) min_gap = std::min(min_gap, intervals[j].lo - intervals[j - 1].hi);
    if (min_gap <= 0) throw PreconditionError("poly_partition: intervals overlap");
    const double ramp = min_gap / 2;
    const int nodes = degree + 1;
    for (int j = 0; j < r; ++j) {
        RVec c = RVec::Zero(nodes);
        for (int k = 0; k < nodes; ++k) {
            const double th = std::numbers::pi * (k + 0.5) / nodes;
            const double fx = mollified(intervals[j], ramp, (std::cos(th) + 1) / 2);
            for (int q = 0; q < nodes; ++q) c(q) += fx * std::cos(q * th);
        }
        c *= 2.0 / nodes;
        c(0) /= 2;
        out.coeffs.push_back(c);
    }
    if (r == 1) {
        out.coeffs[0] = RVec::Zero(std::max(1, nodes));
        out.coeffs[0](0) = 1.0;
    }
    for (int j = 0; j < r; ++j) {
        const Interval& I = intervals[j];
        const int samples = 64;
        for (int s = 0; s <= samples; ++s) {
            const double x = I.lo + (I.hi - I.lo) * s / samples;
            const RVec p = out.eval(std::min(x, 1.0));
            for (int k = 0; k < r; ++k) out.gamma = std::max(out.gamma, k == j ? 1 - p(k) : p(k));
        }
    }
    if (gamma_target) out.meets_target = out.gamma <= *gamma_target;
    return out;
}

namespace detail {

WCertificate trivial_certificate(const TridiagonalSystem& sys, const CMat& W, const std::string& engine,
                                 const std::string& note) {
    WCertificate c = certify_W(sys, W);
    c.trivial = true;
    c.engine = engine;
    c.notes.push_back(note);
    return c;
}

/// An exact reducing subspace when some block is empty or some coupling vanishes.
std::optional<std::pair<CMat, std::string>> exact_split(const TridiagonalSystem& sys) {
    for (int k = 0; k < sys.L(); ++k)
        if (sys.blocks[k].cols() == 0) return std::make_pair(sys.span(0, k - 1), "empty block " + std::to_string(k + 1));
    for (int i = 0; i + 1 < sys.L(); ++i)
        if (numeric_rank(sys.blocks[i + 1].adjoint() * sys.J * sys.blocks[i]) == 0)
            return std::make_pair(sys.span(0, i), "zero coupling after block " + std::to_string(i + 1));
    return std::nullopt;
}

}  // namespace detail

using detail::exact_split;
using detail::trivial_certificate;

namespace {

struct SzarekCore {
    CMat W;
    SzarekDiagnostics diag;
};

SzarekCore szarek_core(const TridiagonalSystem& sys, double eps, double M) {
    const int n = sys.dim();
    const int L = sys.L();
    const CMat& V1 = sys.blocks.front();
    const CMat& VL = sys.blocks.back();
    const int m = std::max(1, cols(V1));
    SzarekCore out;
    auto& d = out.diag;
    d.eps = eps;
    d.m = m;
    d.reduced_L = L;
    d.kappa = 2.0 / 11.0 * eps;
    d.eta = std::pow(eps, 6) / m;
    d.a = std::pow(eps, 1.5);
    const CMat Jt = (sys.J + CMat::Identity(n, n)) / 2;
    const HermitianEig E = eig_hermitian(hermitian_part(Jt));
    std::vector<Atom> mu;
    const CMat overlap = E.vectors.adjoint() * V1;
    for (int k = 0; k < n; ++k) mu.push_back({std::clamp(E.values(k), 0.0, 1.0), overlap.row(k).squaredNorm()});
    const IntervalSelection sel = select_intervals(mu, d.kappa, d.eta);
    d.intervals = static_cast<int>(sel.intervals.size());
    std::vector<CMat> pieces;
    for (const Interval& I : sel.intervals) {
        const CMat Q = spectral_basis(E, RealSet({I}));
        if (Q.cols() == 0) continue;
        const CMat Aj = Q * (Q.adjoint() * V1);
        Eigen::JacobiSVD<CMat> svd(Aj, Eigen::ComputeThinU);
        const RVec& s = svd.singularValues();
        int keep = 0;
        while (keep < s.size() && s(keep) > d.a) ++keep;
        if (keep > 0) pieces.push_back(svd.matrixU().leftCols(keep));
    }
    const CMat Lsp = range_basis(hstack(pieces, n));
    const CMat I = CMat::Identity(n, n);
    const NestResult nest = nest_projection_any(projector(V1), {I - VL * VL.adjoint(), n - cols(VL)}, projector(Lsp));
    out.W = nest.basis;
    const int L0 = std::max(1, L - 1);
    d.gamma = poly_partition(sel.intervals, std::max(0, L0 - 1)).gamma;
    d.eps1_reference = (1.0 / 11 + 10 * std::sqrt(11.0) * (1 + std::sqrt(2.0))) * eps;
    d.eps1_formula = L > 2 ? 83.4 * std::pow(m * M / (L - 2), 1.0 / 9) : kInf;
    d.eps3_reference = std::sqrt(4 * d.eta * m / d.kappa) + std::sqrt(2 / d.kappa) * d.a;
    d.eps4_reference = d.kappa;
    d.eps5_reference = std::sqrt(8 * d.gamma * d.gamma / d.kappa + 4 * d.eta * m / d.kappa) / d.a;
    return out;
}

}  // namespace

SzarekResult szarek_W(const TridiagonalSystem& sys, const SzarekParams& params) {
    const int L = sys.L();
    if (L < 2) throw PreconditionError("szarek_W: need at least two blocks");
    SzarekResult res;
    if (auto split = exact_split(sys)) {
        res.cert = trivial_certificate(sys, split->first, "szarek", split->second);
        return res;
    }
    std::vector<int> ranks(L - 1);
    int mmin = std::numeric_limits<int>::max();
    for (int i = 1; i < L; ++i) {
        ranks[i - 1] = numeric_rank(sys.blocks[i].adjoint() * sys.J * sys.blocks[i - 1]);
        mmin = std::min(mmin, ranks[i - 1]);
    }
    int maxblock = 0;
    for (const auto& b : sys.blocks) maxblock = std::max(maxblock, cols(b));
    const TridiagonalSystem* work = &sys;
    KrylovReduction kr;
    bool reduced = false;
    if (maxblock > mmin) {
        int best_i = 1, best_len = -1;
        for (int i = 1; i < L; ++i)
            if (ranks[i - 1] == mmin && std::max(i, L - i) > best_len) {
                best_len = std::max(i, L - i);
                best_i = i;
            }
        kr = krylov_reduce(sys, best_i);
        if (kr.trivial) {
            CMat W = kr.reversed ? orth_complement(kr.exact_W, sys.dim()) : kr.exact_W;
            res.cert = trivial_certificate(sys, W, "szarek", "krylov chain closes before V_L");
            res.diag.reversed = kr.reversed;
            return res;
        }
        if (kr.reduced.L() >= 2) {
            work = &kr.reduced;
            reduced = true;
        }
    }
    std::vector<double> grid = params.eps ? std::vector<double>{*params.eps} : params.eps_grid;
    double best = kInf;
    for (double eps : grid) {
        SzarekCore core;
        try {
            core = szarek_core(*work, eps, params.M);
        } catch (const PreconditionError&) {
            if (params.eps) throw;
            continue;
        }
        CMat W = core.W;
        if (reduced) {
            W = hstack({kr.H0, kr.embed * W}, sys.dim());
            if (kr.reversed) W = orth_complement(W, sys.dim());
        }
        WCertificate cert = certify_W(sys, W);
        if (cert.eps2 < best) {
            best = cert.eps2;
            res.cert = cert;
            res.diag = core.diag;
            res.diag.reversed = reduced && kr.reversed;
        }
    }
    if (!std::isfinite(best)) throw PreconditionError("szarek_W: no admissible eps in the grid");
    res.cert.engine = "szarek";
    if (reduced) res.cert.notes.push_back("krylov reduction at i = " + std::to_string(kr.i));
    return res;
}

BruteSearchResult brute_projection_search(const CMat& A, const CMat& B, double eps, int resolution) {
    const int n = static_cast<int>(A.rows());
    if (!is_hermitian(A) || !is_hermitian(B)) throw PreconditionError("brute_projection_search: inputs not Hermitian");
    if (resolution < 2) throw PreconditionError("brute_projection_search: resolution too small");
    const HermitianEig E = eig_hermitian(A);
    const CMat low = spectral_basis(E, RealSet::at_most(-0.5));
    const CMat mid = spectral_basis(E, RealSet::open(-0.5, 0.5));
    const int k = cols(mid);
    if (k > 3) throw PreconditionError("brute_projection_search: middle eigenspace dimension exceeds 3");
    const long long budget = 4'000'000;
    const long long R = resolution;
    const long long cost = k <= 1 ? 2 : k == 2 ? R * R + 2 : 2 * R * R * R * R + 2;
    if (cost > budget) throw PreconditionError("brute_projection_search: search budget exceeded");
    BruteSearchResult out;
    out.commutator = kInf;
    const double nB = std::max(op_norm(B), 1e-300);
    auto consider = [&](const CMat& extra) {
        const CMat basis = hstack({low, extra}, n);
        const OrthoProjection P = projector(basis);
        const double c = op_norm(commutator(P.matrix, B));
        ++out.evaluated;
        if (c < out.commutator) {
            out.commutator = c;
            out.P = P;
        }
    };
    consider(CMat(n, 0));
    consider(mid);
    double radius = 0.0;
    const double pi = std::numbers::pi;
    if (k == 2) {
        for (long long a = 0; a < R; ++a)
            for (long long b = 0; b < R; ++b) {
                const double th = pi / 2 * (a + 0.5) / R, ph = 2 * pi * b / R;
                CVec v(2);
                v << std::cos(th), std::polar(std::sin(th), ph);
                consider(mid * v);
            }
        radius = (pi / 2 / R) / 2 + (2 * pi / R) / 2;
    } else if (k == 3) {
        for (long long a = 0; a < R; ++a)
            for (long long b = 0; b < R; ++b)
                for (long long c = 0; c < R; ++c)
                    for (long long e = 0; e < R; ++e) {
                        const double t1 = pi / 2 * (a + 0.5) / R, t2 = pi / 2 * (b + 0.5) / R;
                        const double p1 = 2 * pi * c / R, p2 = 2 * pi * e / R;
                        CVec v(3);
                        v << std::cos(t1), std::polar(std::sin(t1) * std::cos(t2), p1),
                            std::polar(std::sin(t1) * std::sin(t2), p2);
                        const CMat line = mid * v;
                        consider(line);
                        consider(orth_against(mid, line));
                    }
        radius = 2 * (pi / 2 / R) / 2 + 2 * (2 * pi / R) / 2;
    }
    out.certified_bound = out.commutator + 2 * nB * radius;
    (void)eps;
    return out;
}

LinProjection lin_oracle_projection(const CMat& A, const CMat& B, double eps, const LinOracle& oracle) {
    const int n = static_cast<int>(A.rows());
    if (!is_hermitian(A) || !is_hermitian(B)) throw PreconditionError("lin_oracle_projection: inputs not Hermitian");
    if (op_norm(A) > 1 + 1e-10 || op_norm(B) > 1 + 1e-10)
        throw PreconditionError("lin_oracle_projection: inputs must be contractions");
    const HermitianEig EA = eig_hermitian(A);
    const OrthoProjection lowE = spectral_projection(EA, RealSet::at_most(-0.5));
    const OrthoProjection highE = spectral_projection(EA, RealSet::at_least(0.5));
    const OrthoProjection G = highE.complement();
    LinProjection out;
    if (oracle.mode == OracleMode::Brute) {
        const BruteSearchResult br = brute_projection_search(A, B, eps, oracle.brute_resolution);
        out.P = br.P;
        out.commutator = br.commutator;
        out.bound = make_check(br.commutator, br.certified_bound, "brute search certified bound");
        out.sandwich_defect = std::max(op_norm(lowE.matrix - out.P.matrix * lowE.matrix),
                                       op_norm(out.P.matrix - G.matrix * out.P.matrix));
        return out;
    }
    if (oracle.mode == OracleMode::Given) {
        out.A_prime = oracle.A_given;
        out.B_prime = oracle.B_given;
        if (out.A_prime.rows() != n || out.B_prime.rows() != n)
            throw PreconditionError("lin_oracle_projection: given pair has wrong size");
        if (op_norm(commutator(out.A_prime, out.B_prime)) > 1e-10)
            throw PreconditionError("lin_oracle_projection: given pair does not commute");
    } else {
        JointDiagConfig jc;
        jc.max_sweeps = oracle.sweeps;
        jc.refine = false;
        const JointDiagResult jd = minimize_joint_diag(A, B, jc);
        const CMat DA = (jd.U * A * jd.U.adjoint()).diagonal().asDiagonal();
        const CMat DB = (jd.U * B * jd.U.adjoint()).diagonal().asDiagonal();
        out.A_prime = jd.U.adjoint() * DA * jd.U;
        out.B_prime = jd.U.adjoint() * DB * jd.U;
    }
    const OrthoProjection Pp = spectral_projection(eig_hermitian(hermitian_part(out.A_prime)), RealSet::at_most(0.0, false));
    const NestResult nest = nest_projection_any(lowE, G, Pp);
    out.P = nest.F;
    out.sandwich_defect = nest.sandwich_defect;
    out.commutator = op_norm(commutator(out.P.matrix, B));
    out.bound = make_check(out.commutator, 20 * op_norm(A - out.A_prime) + 2 * op_norm(B - out.B_prime),
                           "lin oracle 20|A-A'| + 2|B-B'|");
    return out;
}

WCertificate subspace_W(const TridiagonalSystem& sys, const EngineConfig& cfg) {
    Engine e = cfg.engine;
    if (e == Engine::Auto) {
        int minblock = std::numeric_limits<int>::max();
        for (const auto& b : sys.blocks) minblock = std::min(minblock, cols(b));
        e = minblock <= cfg.szarek_max_block ? Engine::Szarek : Engine::Hastings;
    }
    if (e == Engine::Szarek) return szarek_W(sys, cfg.szarek).cert;
    return hastings_W(sys, cfg.hastings, cfg.oracle).cert;
}

}  // namespace ac
