#include "ac/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ac {

CMat HermitianEig::reconstruct() const {
    return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

OrthoProjection OrthoProjection::complement() const {
    const int n = dim();
    return {CMat::Identity(n, n) - matrix, n - rank};
}

bool Interval::contains(double x) const {
    const bool above = x > lo || (lo_closed && x == lo);
    const bool below = x < hi || (hi_closed && x == hi);
    return above && below;
}

namespace {

bool interval_empty(const Interval& I) {
    if (I.lo > I.hi) return true;
    if (I.lo == I.hi) return !(I.lo_closed && I.hi_closed);
    return false;
}

std::vector<Interval> normalize(std::vector<Interval> parts) {
    std::vector<Interval> kept;
    for (const auto& I : parts)
        if (!interval_empty(I)) kept.push_back(I);
    std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.lo_closed && !b.lo_closed;
    });
    std::vector<Interval> out;
    for (const auto& I : kept) {
        if (!out.empty()) {
            Interval& last = out.back();
            const bool touches = last.hi > I.lo || (last.hi == I.lo && (last.hi_closed || I.lo_closed));
            if (touches) {
                if (I.hi > last.hi) {
                    last.hi = I.hi;
                    last.hi_closed = I.hi_closed;
                } else if (I.hi == last.hi) {
                    last.hi_closed = last.hi_closed || I.hi_closed;
                }
                continue;
            }
        }
        out.push_back(I);
    }
    return out;
}

double interval_gap(const Interval& a, const Interval& b) {
    return std::max({0.0, b.lo - a.hi, a.lo - b.hi});
}

}  // namespace

RealSet::RealSet(std::vector<Interval> parts) : parts_(normalize(std::move(parts))) {}

RealSet RealSet::all() { return RealSet({Interval{-kInf, kInf, true, true}}); }
RealSet RealSet::none() { return RealSet(); }
RealSet RealSet::closed(double lo, double hi) { return RealSet({Interval{lo, hi, true, true}}); }
RealSet RealSet::open(double lo, double hi) { return RealSet({Interval{lo, hi, false, false}}); }
RealSet RealSet::half_open(double lo, double hi) { return RealSet({Interval{lo, hi, true, false}}); }
RealSet RealSet::point(double x) { return closed(x, x); }
RealSet RealSet::at_most(double x, bool closed) { return RealSet({Interval{-kInf, x, true, closed}}); }
RealSet RealSet::at_least(double x, bool closed) { return RealSet({Interval{x, kInf, closed, true}}); }

bool RealSet::contains(double x, double point_tol) const {
    for (const auto& I : parts_) {
        if (I.contains(x)) return true;
        if (I.lo == I.hi && std::abs(x - I.lo) <= point_tol) return true;
    }
    return false;
}

RealSet RealSet::unite(const RealSet& other) const {
    std::vector<Interval> all_parts = parts_;
    all_parts.insert(all_parts.end(), other.parts_.begin(), other.parts_.end());
    return RealSet(std::move(all_parts));
}

RealSet RealSet::complement() const {
    std::vector<Interval> out;
    double cursor = -kInf;
    bool cursor_closed = true;
    for (const auto& I : parts_) {
        if (!(I.lo == -kInf)) out.push_back(Interval{cursor, I.lo, cursor_closed, !I.lo_closed});
        cursor = I.hi;
        cursor_closed = !I.hi_closed;
    }
    if (cursor != kInf) out.push_back(Interval{cursor, kInf, cursor_closed, true});
    return RealSet(std::move(out));
}

bool RealSet::disjoint(const RealSet& other) const {
    for (const auto& a : parts_)
        for (const auto& b : other.parts_) {
            const double lo = std::max(a.lo, b.lo);
            const double hi = std::min(a.hi, b.hi);
            if (lo < hi) return false;
            if (lo == hi && a.contains(lo) && b.contains(lo)) return false;
        }
    return true;
}

double RealSet::dist(const RealSet& other) const {
    double d = kInf;
    for (const auto& a : parts_)
        for (const auto& b : other.parts_) d = std::min(d, interval_gap(a, b));
    return d;
}

double RealSet::dist(double x) const {
    double d = kInf;
    for (const auto& I : parts_) d = std::min(d, std::max({0.0, I.lo - x, x - I.hi}));
    return d;
}

double RealSet::inf() const { return parts_.empty() ? kInf : parts_.front().lo; }
double RealSet::sup() const { return parts_.empty() ? -kInf : parts_.back().hi; }

std::string RealSet::describe() const {
    if (parts_.empty()) return "{}";
    std::ostringstream os;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const auto& I = parts_[i];
        if (i) os << " u ";
        os << (I.lo_closed ? '[' : '(') << I.lo << ", " << I.hi << (I.hi_closed ? ']' : ')');
    }
    return os.str();
}

double op_norm(const CMat& A) {
    if (A.size() == 0) return 0.0;
    if (A.rows() == 1 || A.cols() == 1) return A.norm();
    Eigen::BDCSVD<CMat> svd(A);
    return svd.singularValues()(0);
}

CMat commutator(const CMat& A, const CMat& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols())
        throw PreconditionError("commutator: dimension mismatch");
    return A * B - B * A;
}

bool is_hermitian(const CMat& A, double rel_tol) {
    if (A.rows() != A.cols()) return false;
    return op_norm(A - A.adjoint()) <= rel_tol * std::max(1.0, op_norm(A));
}

CMat hermitian_part(const CMat& A) { return (A + A.adjoint()) / 2.0; }

namespace {

// Gram–Schmidt of P·e_j in column order, with two orthogonalization passes.
CMat canonical_cluster_basis(const CMat& Vc) {
    const int n = static_cast<int>(Vc.rows());
    const int k = static_cast<int>(Vc.cols());
    CMat out(n, k);
    int found = 0;
    for (double accept : {0.5, 1e-2, 1e-6}) {
        for (int j = 0; j < n && found < k; ++j) {
            CVec v = Vc * Vc.row(j).adjoint();
            for (int pass = 0; pass < 2; ++pass)
                for (int c = 0; c < found; ++c) v -= out.col(c) * out.col(c).dot(v);
            const double nv = v.norm();
            if (nv <= accept / std::sqrt(static_cast<double>(n))) continue;
            out.col(found++) = v / nv;
        }
        if (found == k) break;
    }
    if (found < k) return Vc;
    return out;
}

}  // namespace

HermitianEig eig_hermitian(const CMat& A) {
    if (A.rows() != A.cols()) throw PreconditionError("eig_hermitian: matrix not square");
    HermitianEig E;
    const int n = static_cast<int>(A.rows());
    if (n == 0) return E;
    if (!A.allFinite()) throw PreconditionError("eig_hermitian: non-finite entries");
    const CMat skew = A - A.adjoint();
    E.sym_defect = skew.norm() == 0.0 ? 0.0 : op_norm(skew);
    if (E.sym_defect > 1e-10 * std::max(1.0, op_norm(A)))
        throw PreconditionError("eig_hermitian: input not Hermitian");
    const CMat H = hermitian_part(A);
    Eigen::SelfAdjointEigenSolver<CMat> solver(H);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
    E.values = solver.eigenvalues();
    E.vectors = solver.eigenvectors();
    E.scale = std::max(std::abs(E.values(0)), std::abs(E.values(n - 1)));
    const double tol = eig_tolerance(E);
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && E.values(end) - E.values(end - 1) <= tol) ++end;
        if (end - start > 1) {
            const CMat Vc = E.vectors.middleCols(start, end - start);
            E.vectors.middleCols(start, end - start) = canonical_cluster_basis(Vc);
        }
        start = end;
    }
    return E;
}

double eig_tolerance(const HermitianEig& E) { return 1e-12 * E.dim() * std::max(E.scale, 1e-300); }

OrthoProjection spectral_projection(const HermitianEig& E, const RealSet& S) {
    const double tol = eig_tolerance(E);
    return spectral_projection(E, [&](double x) { return S.contains(x, tol); });
}

OrthoProjection spectral_projection(const HermitianEig& E, const std::function<bool(double)>& S) {
    const int n = E.dim();
    OrthoProjection P{CMat::Zero(n, n), 0};
    for (int i = 0; i < n; ++i) {
        if (!S(E.values(i))) continue;
        P.matrix.noalias() += E.vectors.col(i) * E.vectors.col(i).adjoint();
        ++P.rank;
    }
    return P;
}

CMat spectral_basis(const HermitianEig& E, const RealSet& S) {
    const double tol = eig_tolerance(E);
    std::vector<int> idx;
    for (int i = 0; i < E.dim(); ++i)
        if (S.contains(E.values(i), tol)) idx.push_back(i);
    CMat out(E.dim(), static_cast<int>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) out.col(static_cast<int>(c)) = E.vectors.col(idx[c]);
    return out;
}

CMat apply_function(const HermitianEig& E, const std::function<cplx(double)>& f) {
    CVec d(E.dim());
    for (int i = 0; i < E.dim(); ++i) d(i) = f(E.values(i));
    return E.vectors * d.asDiagonal() * E.vectors.adjoint();
}

CMat apply_real_function(const HermitianEig& E, const std::function<double(double)>& f) {
    return apply_function(E, [&](double x) { return cplx(f(x), 0.0); });
}

CMat expi(const HermitianEig& E, double t) {
    return apply_function(E, [t](double x) { return std::exp(cplx(0.0, t * x)); });
}

CMat pinch(const CMat& A, const std::vector<OrthoProjection>& parts) {
    const int n = static_cast<int>(A.rows());
    CMat sum = CMat::Zero(n, n);
    for (const auto& P : parts) {
        if (P.dim() != n) throw PreconditionError("pinch: dimension mismatch");
        sum += P.matrix;
    }
    if (op_norm(sum - CMat::Identity(n, n)) > 1e-10)
        throw PreconditionError("pinch: parts do not sum to the identity");
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j)
            if (op_norm(parts[i].matrix * parts[j].matrix) > 1e-10)
                throw PreconditionError("pinch: parts not mutually orthogonal");
    CMat out = CMat::Zero(n, n);
    for (const auto& P : parts) out.noalias() += P.matrix * A * P.matrix;
    return out;
}

CMat pinch_bases(const CMat& A, const std::vector<CMat>& bases) {
    const int n = static_cast<int>(A.rows());
    CMat out = CMat::Zero(n, n);
    int total = 0;
    for (const auto& Q : bases) {
        if (Q.cols() == 0) continue;
        out.noalias() += Q * (Q.adjoint() * A * Q) * Q.adjoint();
        total += static_cast<int>(Q.cols());
    }
    if (total != n) throw PreconditionError("pinch_bases: bases do not span the space");
    return out;
}

OrthoProjection projector(const CMat& basis) {
    return {basis * basis.adjoint(), static_cast<int>(basis.cols())};
}

CMat range_basis(const CMat& M, double tol) {
    if (M.cols() == 0 || M.rows() == 0) return CMat(M.rows(), 0);
    Eigen::BDCSVD<CMat> svd(M, Eigen::ComputeThinU);
    const RVec& s = svd.singularValues();
    const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
    int r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return svd.matrixU().leftCols(r);
}

CMat orth_complement(const CMat& basis, int n, double tol) {
    if (basis.cols() == 0) return CMat::Identity(n, n);
    const CMat Q = range_basis(basis, tol);
    const HermitianEig E = eig_hermitian(CMat::Identity(n, n) - Q * Q.adjoint());
    return spectral_basis(E, RealSet::at_least(0.5));
}

CMat orth_against(const CMat& M, const CMat& against, double tol) {
    if (M.cols() == 0) return CMat(M.rows(), 0);
    CMat R = M;
    if (against.cols() > 0)
        for (int pass = 0; pass < 2; ++pass) R -= against * (against.adjoint() * R);
    const double scale = std::max(1.0, op_norm(M));
    Eigen::BDCSVD<CMat> svd(R, Eigen::ComputeThinU);
    const RVec& s = svd.singularValues();
    int r = 0;
    while (r < s.size() && s(r) > tol * scale) ++r;
    CMat out = svd.matrixU().leftCols(r);
    if (against.cols() > 0) out -= against * (against.adjoint() * out);
    Eigen::HouseholderQR<CMat> qr(out);
    CMat Q = qr.householderQ() * CMat::Identity(out.rows(), r);
    return Q;
}

CMat hstack(const std::vector<CMat>& parts, int rows) {
    int cols = 0;
    for (const auto& p : parts) cols += static_cast<int>(p.cols());
    CMat out(rows, cols);
    int c = 0;
    for (const auto& p : parts) {
        if (p.cols() == 0) continue;
        out.middleCols(c, p.cols()) = p;
        c += static_cast<int>(p.cols());
    }
    return out;
}

bool is_projection(const CMat& P, double tol) {
    if (P.rows() != P.cols()) return false;
    return op_norm(P - P.adjoint()) <= tol && op_norm(P * P - P) <= tol;
}

CMat random_complex(int n, int m, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat A(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            const double re = g(rng);
            const double im = g(rng);
            A(i, j) = cplx(re, im);
        }
    return A;
}

CMat random_hermitian(int n, Rng& rng) { return hermitian_part(random_complex(n, n, rng)); }

CMat random_unitary(int n, Rng& rng) { return random_isometry(n, n, rng); }

CMat random_isometry(int n, int k, Rng& rng) {
    const CMat G = random_complex(n, k, rng);
    Eigen::HouseholderQR<CMat> qr(G);
    CMat Q = qr.householderQ() * CMat::Identity(n, k);
    const CMat R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        const cplx d = R(j, j);
        if (std::abs(d) > 0) Q.col(j) *= d / std::abs(d);
    }
    return Q;
}

CMat random_contraction(int n, Rng& rng, double norm) {
    const CMat H = random_hermitian(n, rng);
    const double nh = op_norm(H);
    return nh > 0 ? CMat(H * (norm / nh)) : H;
}

}  // namespace ac
