#pragma once

#include "ac/boundcheck.hpp"
#include "ac/matcore.hpp"
#include "ac/smoothing.hpp"
#include "ac/subspace.hpp"

#include <optional>

namespace ac {

struct Exponents {
    double gamma0 = 0.0;  ///< Δ = δ^{γ0}
    double gamma1 = 0.0;  ///< n_cut = ⌈1/Δ^{γ1}⌉
    double gamma = 0.0;   ///< final rate
    bool finite_range = true;
};

Exponents choose_exponents(double gamma2, bool finite_range_needed = true);

/// Per-interval record of the subspace construction.
struct IntervalLog {
    int index = 0;
    int dim = 0;
    int blocks = 0;
    double scale = 1.0;  ///< J_i = compression of H divided by this factor
    double eps2 = 0.0;   ///< in units of H
    double eps3 = 0.0;
    double eps4 = 0.0;
    double eps5 = 0.0;
    bool trivial = false;
    std::string engine;
};

struct CommuteReport {
    CMat A_prime;
    CMat B_prime;  ///< U′ for the Hermitian–unitary variants
    CMat C_prime;  ///< three-Hermitian variant only
    bool has_C = false;
    double distA = 0.0;
    double distB = 0.0;
    double distC = 0.0;
    double comm_residual = 0.0;  ///< max pairwise commutator of the outputs
    double delta = 0.0;          ///< input commutator norm
    double Delta = 0.0;
    int n_cut = 0;
    Exponents exponents;
    double finite_range_dist = 0.0;  ///< ‖A − H‖
    std::vector<IntervalLog> intervals;
    std::vector<BoundCheck> checks;
    std::vector<std::pair<std::string, double>> references;
    std::vector<std::string> notes;

    double max_eps2() const;
    bool checks_pass() const;
};

struct PipelineConfig {
    double gamma2 = 1.0;
    EngineConfig engine;
    std::optional<Profile> profile;  ///< averaging profile, default F^{0,1}_0
    int n_cut_commuting = 16;        ///< n_cut used when the input commutes exactly
    double cluster_tol = 1e-8;       ///< relative tolerance for distinct eigenvalues
};

/// Nearby commuting Hermitian pair through finite range, interval pinching and subspace certificates.
CommuteReport commute_hermitian_pair(const CMat& A, const CMat& B, const PipelineConfig& cfg = {});

/// Merged eigenvalue clusters of A with gaps ≥ √2·δ^{1/2}; A′ block midpoints, B′ the pinched B.
CommuteReport cheap_commute(const CMat& A, const CMat& B, const PipelineConfig& cfg = {});

/// Pairwise commuting A′, B′, C′ from cluster blocks of A and per-block pair repair.
CommuteReport three_hermitian(const CMat& A, const CMat& B, const CMat& C, const PipelineConfig& cfg = {});

/// Hermitian–unitary variant with cyclic arcs; B_prime holds U′.
CommuteReport commute_hermitian_unitary(const CMat& A, const CMat& U, const PipelineConfig& cfg = {});

/// g_θ(z) = i(1+z)/(1−z)
CMat cayley_g(const CMat& V);
/// f_θ(x) = (x−i)/(x+i)
CMat cayley_f(const CMat& W);

/// Unitary pair with a spectral gap of V: Cayley transform, Hermitian–unitary repair, inverse transform.
/// A_prime holds U′ and B_prime holds V′.
CommuteReport unitary_pair_gap(const CMat& U, const CMat& V, double theta, const PipelineConfig& cfg = {});

struct SweepRow {
    double scale = 0.0;
    double delta = 0.0;
    double Delta = 0.0;
    int n_cut = 0;
    double distA = 0.0;
    double distB = 0.0;
    double comm_residual = 0.0;
    double eps2_max = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;  ///< ordered by decreasing scale
    bool distA_nonincreasing = true;
    bool distB_nonincreasing = true;
    bool distA_trend = true;  ///< least-squares slope of distA against log delta is nonnegative and last <= first
    bool distB_trend = true;
};

/// Runs commute_hermitian_pair on (A0 + sX, B0 + sY) rescaled to contractions, for decreasing s.
SweepReport sweep(const CMat& A0, const CMat& B0, const CMat& X, const CMat& Y, std::vector<double> scales,
                  const PipelineConfig& cfg = {});

}  // namespace ac
