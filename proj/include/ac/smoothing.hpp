#pragma once

#include "ac/boundcheck.hpp"
#include "ac/matcore.hpp"

#include <memory>
#include <ostream>

namespace ac {

/// |f̂| sampled on a symmetric k-grid, with f̂(k) = (1/2π)∫ f(x) e^{−ikx} dx.
struct FourierData {
    double K = 0.0;             ///< grid half-width
    double dk = 0.0;
    int samples = 0;
    std::vector<double> absk;   ///< ascending |k|
    std::vector<double> absf;   ///< |f̂| at absk
    std::vector<double> suffix; ///< suffix[i] = Σ_{j≥i} absf[j]·dk
    double c0 = 0.0;            ///< ∫|k f̂|
    double c1 = 0.0;            ///< ∫|f̂|
    double c0_err = 0.0;
    double c1_err = 0.0;
    bool converged = false;
    bool divergent = false;

    /// ∫_{|k|≥c} |f̂(k)| dk
    double tail(double c) const;
    /// Error bar for tail(c): halving difference plus the truncated band.
    double tail_err(double c) const;
    double tail_err_base = 0.0;
};

/// Transform of a function supported in [−R, R] on a 2^16-point grid.
std::shared_ptr<const FourierData> fourier_transform(const std::function<double(double)>& f, double R);

/// F̄(x) = g(1−x)/(g(x)+g(1−x)), g(x) = e^{−1/x} for x > 0.
double smooth_step(double x);
std::function<double(double)> make_smooth_step();

enum class ProfileKind { SmoothBump, Polynomial, Indicator, Custom };

/// Even bump around ω0: flat on radius r, ramp of width w.
struct Profile {
    ProfileKind kind = ProfileKind::SmoothBump;
    double r = 0.0;
    double w = 1.0;
    double omega0 = 0.0;
    double radius = 1.0;  ///< support radius about ω0
    std::function<double(double)> shape;  ///< Custom kind, centered
    std::shared_ptr<const FourierData> fourier;  ///< transform of the w = 1 rescaling
    double fscale = 1.0;

    double operator()(double x) const;
    double centered(double x) const { return (*this)(x + omega0); }
    Profile translated(double omega) const;

    double c0() const;
    double c1() const;
    double tail(double c) const;
    double tail_err(double c) const;
    bool divergent() const { return fourier && fourier->divergent; }
};

/// F^{r,w}_{ω0}
Profile bump_profile(double r, double w, double omega0 = 0.0);
/// (1−x²)³ on [−1, 1]
Profile poly_profile();
/// χ_{[−r, r]}
Profile indicator_profile(double r = 1.0);
Profile custom_profile(std::function<double(double)> f, double radius);
/// Normalized mollifier exp(−1/(1−x²)) on [−1, 1] with unit integral.
Profile mollifier_profile();

struct ProfileConstants {
    double c0 = 0.0;
    double c1 = 0.0;
    double c0_err = 0.0;
    double c1_err = 0.0;
    bool converged = false;
    bool divergent = false;
};

ProfileConstants profile_constants(const Profile& f);

struct FiniteRangeResult {
    CMat H;
    BoundCheck dist_bound;   ///< ‖A − H‖ against its constant
    BoundCheck comm_bound;   ///< ‖[H, B]‖ against its constant
    std::vector<BoundCheck> comm_bounds;  ///< per B_j for the multi form
    double c0 = 0.0;
    double c1 = 0.0;
};

FiniteRangeResult finite_range(const CMat& A, const CMat& B, double Delta, const Profile& f);

/// Joint eigenbasis of commuting Hermitian matrices by successive refinement.
struct JointEig {
    CMat vectors;
    std::vector<RVec> values;
};
JointEig joint_eigenbasis(const std::vector<CMat>& Bs, double commute_tol = 1e-10);

FiniteRangeResult finite_range_multi(const CMat& A, const std::vector<CMat>& Bs, double Delta, const Profile& f);
FiniteRangeResult finite_range_normal(const CMat& A, const CMat& N, double Delta, const Profile& f);

/// F^{0,κ}_{−1+κi}, κ = 2/n_win, i = 0..n_win.
std::vector<Profile> partition_of_unity(int n_win);

struct SlowGrowth {
    std::function<double(double)> G;
    std::function<double(double)> F;
    std::string G_id = "max(2, log^2(2+l))";
    std::string F_id = "log^2(2+L)";
    double beta1 = 1.0;
};
SlowGrowth default_slow_growth();
int n_win_for(double L, const SlowGrowth& sg);

struct TailTable {
    std::string id;
    std::vector<double> thresholds;
    std::vector<double> tail;
    std::vector<double> error;
    double l1 = 0.0;
    double monotone_from = 0.0;  ///< values are nonincreasing for arguments past this point

    void write_csv(std::ostream& os) const;
};

TailTable tail_table(const Profile& f, const std::vector<double>& thresholds, const std::string& id);

struct TailTables {
    TailTable base00;  ///< tails of F^{0,1}
    TailTable base11;  ///< tails of F^{1,1}
    TailTable S;       ///< S(L) over the L grid
    TailTable T;       ///< T(l) over the l grid
    SlowGrowth growth;
};

double S_of_L(double L, const SlowGrowth& sg, double* err = nullptr);
double T_of_l(double l, const SlowGrowth& sg, double* err = nullptr);
TailTables tail_tables(const std::vector<double>& l_grid, const std::vector<double>& L_grid, const SlowGrowth& sg);

}  // namespace ac
