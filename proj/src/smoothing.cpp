#include "ac/smoothing.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace ac {

namespace {

constexpr int kGridPoints = 1 << 16;
constexpr double kPi = std::numbers::pi;
const double kE2 = std::exp(2.0);

struct RawTransform {
    std::vector<double> absk;
    std::vector<double> absf;
    double dk = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double band0 = 0.0;  // contributions from |k| ≥ K/2
    double band1 = 0.0;
};

RawTransform raw_transform(const std::function<double(double)>& f, double K, int N) {
    const double h = kPi / K;
    const double T = N * h;
    std::vector<double> in(N);
    for (int j = 0; j < N; ++j) in[j] = f(-T / 2 + j * h);
    std::vector<cplx> out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);
    RawTransform r;
    r.dk = 2 * kPi / T;
    r.absk.reserve(N);
    r.absf.reserve(N);
    const double scale = h / (2 * kPi);
    auto push = [&](int m, double k) {
        const double a = scale * std::abs(out[m]);
        r.absk.push_back(std::abs(k));
        r.absf.push_back(a);
        r.c0 += std::abs(k) * a * r.dk;
        r.c1 += a * r.dk;
        if (std::abs(k) >= K / 2) {
            r.band0 += std::abs(k) * a * r.dk;
            r.band1 += a * r.dk;
        }
    };
    push(0, 0.0);
    for (int m = 1; m < N / 2; ++m) {
        push(m, m * r.dk);
        push(N - m, -m * r.dk);
    }
    push(N / 2, -K);
    return r;
}

std::shared_ptr<const FourierData> build_fourier(const std::function<double(double)>& f, double R) {
    const int N = kGridPoints;
    const double T = 32 * R;
    const double K = N * kPi / T;
    const RawTransform raw = raw_transform(f, K, N);
    const RawTransform half = raw_transform(f, K / 2, N / 2);
    const double e0 = std::abs(raw.c0 - half.c0) + raw.band0;
    const double e1 = std::abs(raw.c1 - half.c1) + raw.band1;
    const bool converged = e0 <= 1e-3 * raw.c0 && e1 <= 1e-3 * raw.c1;
    auto fd = std::make_shared<FourierData>();
    fd->K = K;
    fd->dk = raw.dk;
    fd->samples = N;
    fd->c0 = raw.c0;
    fd->c1 = raw.c1;
    fd->c0_err = e0;
    fd->c1_err = e1;
    fd->tail_err_base = fd->c1_err;
    fd->converged = converged;
    fd->divergent = !converged && e0 > 0.05 * raw.c0;
    fd->absk = std::move(raw.absk);
    fd->absf = std::move(raw.absf);
    fd->suffix.assign(fd->absf.size() + 1, 0.0);
    for (int i = static_cast<int>(fd->absf.size()) - 1; i >= 0; --i)
        fd->suffix[i] = fd->suffix[i + 1] + fd->absf[i] * fd->dk;
    return fd;
}

double poly_shape(double x) {
    const double d = std::abs(x);
    if (d >= 1) return 0.0;
    const double s = 1 - d * d;
    return s * s * s;
}

double bump_shape(double d, double r, double w) {
    d = std::abs(d);
    if (d <= r) return 1.0;
    if (d >= r + w) return 0.0;
    return smooth_step((d - r) / w);
}

double mollifier_raw(double x) {
    if (std::abs(x) >= 1) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

double mollifier_mass() {
    static const double mass = [] {
        const int n = 200000;
        const double h = 2.0 / n;
        double s = 0.0;
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * mollifier_raw(-1 + i * h);
        return s * h / 3.0;
    }();
    return mass;
}

// Memoized transforms keyed by profile family and shape parameter.
std::shared_ptr<const FourierData> cached_fourier(int family, double param,
                                                  const std::function<double(double)>& f, double R) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::shared_ptr<const FourierData>> cache;
    const auto key = std::make_pair(family, param);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto fd = build_fourier(f, R);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, fd);
    return fd;
}

}  // namespace

double FourierData::tail(double c) const {
    if (c <= 0) return suffix.front();
    const auto it = std::lower_bound(absk.begin(), absk.end(), c);
    return suffix[static_cast<std::size_t>(it - absk.begin())];
}

double FourierData::tail_err(double) const { return tail_err_base; }

std::shared_ptr<const FourierData> fourier_transform(const std::function<double(double)>& f, double R) {
    if (!(R > 0)) throw PreconditionError("fourier_transform: support radius must be positive");
    return build_fourier(f, R);
}

double smooth_step(double x) {
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    return 1.0 / (1.0 + std::exp(1.0 / (1.0 - x) - 1.0 / x));
}

std::function<double(double)> make_smooth_step() { return [](double x) { return smooth_step(x); }; }

double Profile::operator()(double x) const {
    const double d = x - omega0;
    switch (kind) {
        case ProfileKind::SmoothBump: return bump_shape(d, r, w);
        case ProfileKind::Polynomial: return poly_shape(d);
        case ProfileKind::Indicator: return std::abs(d) <= r ? 1.0 : 0.0;
        case ProfileKind::Custom: return shape(d);
    }
    return 0.0;
}

Profile Profile::translated(double omega) const {
    Profile p = *this;
    p.omega0 = omega;
    return p;
}

double Profile::c0() const { return fourier->c0 / fscale; }
double Profile::c1() const { return fourier->c1; }
double Profile::tail(double c) const { return fourier->tail(c * fscale); }
double Profile::tail_err(double c) const { return fourier->tail_err(c * fscale); }

Profile bump_profile(double r, double w, double omega0) {
    if (!(w > 0) || r < 0) throw PreconditionError("bump_profile: need r >= 0 and w > 0");
    Profile p;
    p.kind = ProfileKind::SmoothBump;
    p.r = r;
    p.w = w;
    p.omega0 = omega0;
    p.radius = r + w;
    const double rho = r / w;
    p.fourier = cached_fourier(0, rho, [rho](double x) { return bump_shape(x, rho, 1.0); }, rho + 1.0);
    p.fscale = w;
    return p;
}

Profile poly_profile() {
    Profile p;
    p.kind = ProfileKind::Polynomial;
    p.r = 0.0;
    p.w = 1.0;
    p.radius = 1.0;
    p.fourier = cached_fourier(1, 0.0, poly_shape, 1.0);
    return p;
}

Profile indicator_profile(double r) {
    Profile p;
    p.kind = ProfileKind::Indicator;
    p.r = r;
    p.w = 0.0;
    p.radius = r;
    p.fourier = cached_fourier(2, r, [r](double x) { return std::abs(x) <= r ? 1.0 : 0.0; }, r);
    return p;
}

Profile custom_profile(std::function<double(double)> f, double radius) {
    Profile p;
    p.kind = ProfileKind::Custom;
    p.radius = radius;
    p.w = radius;
    p.shape = f;
    p.fourier = build_fourier(f, radius);
    return p;
}

Profile mollifier_profile() {
    Profile p;
    p.kind = ProfileKind::Custom;
    p.radius = 1.0;
    p.w = 1.0;
    const double mass = mollifier_mass();
    p.shape = [mass](double x) { return mollifier_raw(x) / mass; };
    p.fourier = cached_fourier(3, 0.0, p.shape, 1.0);
    return p;
}

ProfileConstants profile_constants(const Profile& f) {
    ProfileConstants pc;
    pc.c0 = f.c0();
    pc.c1 = f.c1();
    pc.c0_err = f.fourier->c0_err / f.fscale;
    pc.c1_err = f.fourier->c1_err;
    pc.converged = f.fourier->converged;
    pc.divergent = f.fourier->divergent;
    return pc;
}

namespace {

void check_averaging_profile(const Profile& f, double Delta) {
    if (!(Delta > 0)) throw PreconditionError("finite_range: Delta must be positive");
    if (std::abs(f.centered(0.0) - 1.0) > 1e-12) throw PreconditionError("finite_range: f(0) != 1");
    if (f.radius > 1.0 + 1e-12) throw PreconditionError("finite_range: support exceeds [-1, 1]");
    if (f.divergent()) throw PreconditionError("finite_range: divergent Fourier constants");
}

}  // namespace

FiniteRangeResult finite_range(const CMat& A, const CMat& B, double Delta, const Profile& f) {
    check_averaging_profile(f, Delta);
    if (!is_hermitian(A) || !is_hermitian(B)) throw PreconditionError("finite_range: inputs must be Hermitian");
    const HermitianEig EB = eig_hermitian(B);
    const int n = EB.dim();
    CMat Ht = EB.vectors.adjoint() * A * EB.vectors;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) Ht(i, j) *= f.centered((EB.values(i) - EB.values(j)) / Delta);
    FiniteRangeResult out;
    out.H = hermitian_part(EB.vectors * Ht * EB.vectors.adjoint());
    out.c0 = f.c0();
    out.c1 = f.c1();
    const double delta = op_norm(commutator(A, B));
    out.dist_bound = make_check(op_norm(A - out.H), out.c0 / Delta * delta, "finite_range: |A-H| <= c0/Delta |[A,B]|");
    out.comm_bound = make_check(op_norm(commutator(out.H, B)), out.c1 * delta, "finite_range: |[H,B]| <= c1 |[A,B]|");
    out.comm_bounds = {out.comm_bound};
    return out;
}

JointEig joint_eigenbasis(const std::vector<CMat>& Bs, double commute_tol) {
    if (Bs.empty()) throw PreconditionError("joint_eigenbasis: empty family");
    const int n = static_cast<int>(Bs.front().rows());
    for (std::size_t i = 0; i < Bs.size(); ++i) {
        if (!is_hermitian(Bs[i])) throw PreconditionError("joint_eigenbasis: family member not Hermitian");
        for (std::size_t j = i + 1; j < Bs.size(); ++j)
            if (op_norm(commutator(Bs[i], Bs[j])) > commute_tol * std::max(1.0, op_norm(Bs[i]) * op_norm(Bs[j])))
                throw PreconditionError("joint_eigenbasis: family not commuting");
    }
    std::vector<CMat> clusters = {CMat::Identity(n, n)};
    for (const CMat& B : Bs) {
        const double tol = 1e-9 * std::max(1.0, op_norm(B));
        std::vector<CMat> next;
        for (const CMat& Vc : clusters) {
            const HermitianEig E = eig_hermitian(hermitian_part(Vc.adjoint() * B * Vc));
            const CMat rotated = Vc * E.vectors;
            int start = 0;
            while (start < E.dim()) {
                int end = start + 1;
                while (end < E.dim() && E.values(end) - E.values(end - 1) <= tol) ++end;
                next.push_back(rotated.middleCols(start, end - start));
                start = end;
            }
        }
        clusters = std::move(next);
    }
    JointEig J;
    J.vectors = hstack(clusters, n);
    for (const CMat& B : Bs) J.values.push_back((J.vectors.adjoint() * B * J.vectors).diagonal().real());
    return J;
}

FiniteRangeResult finite_range_multi(const CMat& A, const std::vector<CMat>& Bs, double Delta, const Profile& f) {
    check_averaging_profile(f, Delta);
    if (!is_hermitian(A)) throw PreconditionError("finite_range_multi: A must be Hermitian");
    const JointEig J = joint_eigenbasis(Bs);
    const int n = static_cast<int>(A.rows());
    CMat Ht = J.vectors.adjoint() * A * J.vectors;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double mult = 1.0;
            for (const RVec& lam : J.values) mult *= f.centered((lam(i) - lam(j)) / Delta);
            Ht(i, j) *= mult;
        }
    FiniteRangeResult out;
    out.H = hermitian_part(J.vectors * Ht * J.vectors.adjoint());
    out.c0 = f.c0();
    out.c1 = f.c1();
    const double m = static_cast<double>(Bs.size());
    double sum = 0.0;
    double worst_slack = kInf;
    for (const CMat& B : Bs) {
        const double d = op_norm(commutator(A, B));
        sum += d;
        BoundCheck bc = make_check(op_norm(commutator(out.H, B)), std::pow(out.c1, m) * d,
                                   "finite_range_multi: |[H,B_j]| <= c1^m |[A,B_j]|");
        if (bc.slack < worst_slack) {
            worst_slack = bc.slack;
            out.comm_bound = bc;
        }
        out.comm_bounds.push_back(bc);
    }
    out.dist_bound = make_check(op_norm(A - out.H), out.c0 * std::pow(out.c1, m - 1) / Delta * sum,
                                "finite_range_multi: |A-H| <= c0 c1^(m-1)/Delta sum |[A,B_j]|");
    return out;
}

FiniteRangeResult finite_range_normal(const CMat& A, const CMat& N, double Delta, const Profile& f) {
    const double nn = op_norm(N);
    if (op_norm(N * N.adjoint() - N.adjoint() * N) > 1e-10 * std::max(1.0, nn * nn))
        throw PreconditionError("finite_range_normal: N not normal");
    const CMat ReN = hermitian_part(N);
    const CMat ImN = (N - N.adjoint()) / cplx(0.0, 2.0);
    FiniteRangeResult out = finite_range_multi(A, {ReN, ImN}, Delta, f);
    const double delta = op_norm(commutator(A, N));
    out.dist_bound = make_check(op_norm(A - out.H), 2 * out.c0 * out.c1 / Delta * delta,
                                "finite_range_normal: |A-H| <= 2 c0 c1/Delta |[A,N]|");
    out.comm_bound = make_check(op_norm(commutator(out.H, N)), 2 * out.c1 * out.c1 * delta,
                                "finite_range_normal: |[H,N]| <= 2 c1^2 |[A,N]|");
    out.comm_bounds = {out.comm_bound};
    return out;
}

std::vector<Profile> partition_of_unity(int n_win) {
    if (n_win < 2) throw PreconditionError("partition_of_unity: n_win must be at least 2");
    const double kappa = 2.0 / n_win;
    std::vector<Profile> out;
    for (int i = 0; i <= n_win; ++i) out.push_back(bump_profile(0.0, kappa, -1.0 + kappa * i));
    return out;
}

SlowGrowth default_slow_growth() {
    SlowGrowth sg;
    sg.G = [](double l) { return std::max(2.0, std::pow(std::log(2.0 + l), 2)); };
    sg.F = [](double L) { return std::pow(std::log(2.0 + L), 2); };
    return sg;
}

int n_win_for(double L, const SlowGrowth& sg) {
    return std::max(2, static_cast<int>(std::ceil(std::pow(L, sg.beta1) / sg.F(L))));
}

void TailTable::write_csv(std::ostream& os) const {
    os << "threshold,tail,error_estimate\n";
    os.precision(17);
    for (std::size_t i = 0; i < thresholds.size(); ++i)
        os << thresholds[i] << ',' << tail[i] << ',' << error[i] << '\n';
}

namespace {

double monotone_start(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty()) return 0.0;
    std::size_t start = y.size() - 1;
    while (start > 0 && y[start - 1] >= y[start]) --start;
    return x[start];
}

}  // namespace

TailTable tail_table(const Profile& f, const std::vector<double>& thresholds, const std::string& id) {
    TailTable t;
    t.id = id;
    t.thresholds = thresholds;
    t.l1 = f.c1();
    for (double c : thresholds) {
        t.tail.push_back(f.tail(c));
        t.error.push_back(f.tail_err(c));
    }
    t.monotone_from = monotone_start(t.thresholds, t.tail);
    return t;
}

double S_of_L(double L, const SlowGrowth& sg, double* err) {
    const Profile f = bump_profile(0.0, 1.0);
    const double thr = (L - 1) / (kE2 * n_win_for(L, sg));
    if (err) *err = f.tail_err(thr);
    return f.tail(thr) + f.c1() * std::exp(-(L - 1) / 2);
}

double T_of_l(double l, const SlowGrowth& sg, double* err) {
    const Profile f = bump_profile(1.0, 1.0);
    const double thr = sg.G(l) / (10 * kE2);
    if (err) *err = 2 * f.tail_err(thr);
    return 2 * f.tail(thr) + 3 * f.c1() * std::exp(-l / 5);
}

TailTables tail_tables(const std::vector<double>& l_grid, const std::vector<double>& L_grid, const SlowGrowth& sg) {
    for (double l : l_grid)
        if (sg.G(l) < 2.0) throw PreconditionError("tail_tables: G must be at least 2");
    TailTables out;
    out.growth = sg;
    std::vector<double> thr;
    for (int i = 0; i <= 200; ++i) thr.push_back(0.05 * i);
    out.base00 = tail_table(bump_profile(0.0, 1.0), thr, "F^{0,1}");
    out.base11 = tail_table(bump_profile(1.0, 1.0), thr, "F^{1,1}");
    out.S.id = "S(L)";
    out.S.l1 = out.base00.l1;
    for (double L : L_grid) {
        double e = 0.0;
        out.S.thresholds.push_back(L);
        out.S.tail.push_back(S_of_L(L, sg, &e));
        out.S.error.push_back(e);
    }
    out.S.monotone_from = monotone_start(out.S.thresholds, out.S.tail);
    out.T.id = "T(l)";
    out.T.l1 = out.base11.l1;
    for (double l : l_grid) {
        double e = 0.0;
        out.T.thresholds.push_back(l);
        out.T.tail.push_back(T_of_l(l, sg, &e));
        out.T.error.push_back(e);
    }
    out.T.monotone_from = monotone_start(out.T.thresholds, out.T.tail);
    return out;
}

}  // namespace ac
