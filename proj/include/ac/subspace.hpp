#pragma once

#include "ac/boundcheck.hpp"
#include "ac/matcore.hpp"
#include "ac/projgeom.hpp"
#include "ac/smoothing.hpp"

#include <optional>

namespace ac {

/// J block tridiagonal with respect to ordered orthogonal blocks V_1..V_L.
struct TridiagonalSystem {
    CMat J;
    std::vector<CMat> blocks;  ///< orthonormal bases, possibly with zero columns
    double coupling_defect = 0.0;  ///< max ‖P_{V_i} J P_{V_j}‖ over |i − j| ≥ 2

    int dim() const { return static_cast<int>(J.rows()); }
    int L() const { return static_cast<int>(blocks.size()); }
    /// Orthonormal basis of V_first ⊕ … ⊕ V_last (0-based, inclusive).
    CMat span(int first, int last) const;
};

/// Checks the tridiagonal hypothesis; throws PreconditionError naming the offending pair.
TridiagonalSystem verify_tridiagonal(const CMat& J, const std::vector<CMat>& blocks);

/// Singleton blocks e_1, …, e_n.
std::vector<CMat> singleton_blocks(int n);

/// Random block tridiagonal Hermitian contraction with coordinate blocks of the given sizes, ‖J‖ = 1.
TridiagonalSystem random_tridiagonal(const std::vector<int>& dims, Rng& rng);

struct WCertificate {
    CMat W;          ///< basis as proposed by the engine
    CMat W_nested;   ///< basis after the V_1 ≤ W ⊥ V_L repair
    double eps3 = 0.0;  ///< ‖P_{W⊥} P_{V_1}‖
    double eps4 = 0.0;  ///< ‖P_{W⊥} J P_W‖
    double eps5 = 0.0;  ///< ‖P_{V_L} P_W‖
    double eps3_dual = 0.0;
    double eps4_dual = 0.0;
    double eps5_dual = 0.0;
    double dual_gap = 0.0;  ///< max |primal − dual|
    double eps2 = 0.0;      ///< ‖P_{W⊥} J P_W‖ for the repaired W
    double nest_eps = 0.0;
    BoundCheck nest_distance;
    BoundCheck eps2_bound;        ///< eps2 ≤ eps4 + 15 max(eps3, eps5)
    double eps2_stated_rhs = 0.0; ///< eps4 + 10 max(eps3, eps5)
    bool contains_V1 = false;
    bool perp_VL = false;
    bool trivial = false;  ///< exact reducing subspace found without running the engine
    std::string engine;
    std::vector<std::string> notes;
};

/// Measures Items 1–3 for W, repairs W to V_1 ≤ W ⊥ V_L and measures the leak of the result.
WCertificate certify_W(const TridiagonalSystem& sys, const CMat& W);

struct KrylovReduction {
    bool trivial = false;   ///< M_{n+} reduces J and is orthogonal to V_L
    bool reversed = false;  ///< set when i > ⌈L/2⌉ and the blocks were reversed
    int i = 0;              ///< 1-based split index in the original orientation
    int m = 0;              ///< rank of P_{V_{i+1}} J P_{V_i}
    int n_plus = 0;
    std::vector<CMat> H;    ///< H_0, …, H_{n+} in ambient coordinates
    CMat exact_W;           ///< ⊕ H_k when trivial
    CMat H0;                ///< H_0 in ambient coordinates (oriented)
    CMat embed;             ///< ambient basis of ⊕_{k≥1} H_k
    TridiagonalSystem reduced;  ///< compression of J to ⊕_{k≥1} H_k with blocks H_1.., tail merged
};

KrylovReduction krylov_reduce(const TridiagonalSystem& sys, int i);

/// Reverses the block order.
TridiagonalSystem reversed(const TridiagonalSystem& sys);

struct Atom {
    double x = 0.0;
    double mass = 0.0;
};

struct IntervalSelection {
    std::vector<Interval> intervals;  ///< half-open [lo, hi), the last may be closed at 1
    double excluded_mass = 0.0;
    double total_mass = 0.0;
    BoundCheck count;      ///< r ≤ 2/κ
    BoundCheck diameter;   ///< max diam ≤ κ
    BoundCheck gap;        ///< η ≤ min gap
    BoundCheck excluded;   ///< excluded ≤ (4η/κ) μ([0,1])
};

IntervalSelection select_intervals(const std::vector<Atom>& mu, double kappa, double eta);

struct PolyPartition {
    std::vector<Interval> intervals;
    int degree = 0;
    std::vector<RVec> coeffs;  ///< Chebyshev coefficients on [0, 1] before clamping
    double gamma = 0.0;
    bool meets_target = true;

    /// Values (p_1(x), …, p_r(x)) after clamping and normalization.
    RVec eval(double x) const;
};

PolyPartition poly_partition(const std::vector<Interval>& intervals, int degree,
                             std::optional<double> gamma_target = std::nullopt);

struct SzarekParams {
    std::optional<double> eps;  ///< unset: scan eps_grid and keep the smallest eps2
    std::vector<double> eps_grid = {0.05, 0.08, 0.12, 0.18, 0.25, 0.35, 0.5};
    double M = 1.0;             ///< polynomial-approximation constant for the reference line
};

struct SzarekDiagnostics {
    double eps = 0.0;
    double kappa = 0.0;
    double eta = 0.0;
    double a = 0.0;
    int m = 0;
    int reduced_L = 0;
    int intervals = 0;
    double gamma = 0.0;
    double eps1_reference = 0.0;     ///< (1/11 + 10√11(1+√2)) ε
    double eps1_formula = 0.0;       ///< 83.4 (mM/(L−2))^{1/9}
    double eps3_reference = 0.0;
    double eps4_reference = 0.0;
    double eps5_reference = 0.0;
    bool reversed = false;
};

struct SzarekResult {
    WCertificate cert;
    SzarekDiagnostics diag;
};

SzarekResult szarek_W(const TridiagonalSystem& sys, const SzarekParams& params = {});

enum class OracleMode { Heuristic, Brute, Given };

struct LinOracle {
    OracleMode mode = OracleMode::Heuristic;
    CMat A_given;
    CMat B_given;
    int brute_resolution = 64;
    int sweeps = 60;
};

struct LinProjection {
    OrthoProjection P;
    CMat A_prime;
    CMat B_prime;
    double commutator = 0.0;  ///< ‖[P, B]‖
    BoundCheck bound;         ///< ‖[P,B]‖ ≤ 20‖A − A′‖ + 2‖B − B′‖
    double sandwich_defect = 0.0;
};

/// Projection with E_{[−1,−1/2]}(A) ≤ P ≤ 1 − E_{[1/2,1]}(A) nearly commuting with B.
LinProjection lin_oracle_projection(const CMat& A, const CMat& B, double eps, const LinOracle& oracle);

struct BruteSearchResult {
    OrthoProjection P;
    double commutator = 0.0;
    double certified_bound = 0.0;  ///< grid minimum plus the covering-radius slack
    long long evaluated = 0;
};

/// Grid minimizer of ‖[P,B]‖ over projections sandwiched as above; middle eigenspace dim ≤ 3.
BruteSearchResult brute_projection_search(const CMat& A, const CMat& B, double eps, int resolution);

struct HastingsConfig {
    std::optional<int> n_win;  ///< default from the slow-growth function F
    int l_b = 4;
    std::optional<int> n_b;    ///< default from k_b = ⌊(n_win+1)/l_b⌋ − 1
    std::optional<double> lambda_min;  ///< default 1/(L^{β₂}(n_win+1))
    double chi = 0.5;
    double eta = 0.1;
    double beta0 = 0.5;
    double beta1 = 1.0;
    double beta2 = 0.5;
    SlowGrowth growth = default_slow_growth();
    std::optional<double> delta_proxy;  ///< when set, the gate G(l_b) > 16 C/δ is enforced
    int decay_samples = 3;
    unsigned long long seed = 1;
};

struct StageRecord {
    std::string id;
    bool passed = true;
    std::string detail;
    std::vector<std::pair<std::string, double>> values;
};

struct HastingsDiagnostics {
    int n_win = 0;
    int l_b = 0;
    int n_b = 0;
    double kappa = 0.0;
    double lambda_min = 0.0;
    double G_lb = 0.0;
    bool gate_evaluated = false;
    bool gate_passed = true;
    bool downgraded = false;
    std::vector<StageRecord> stages;
    std::vector<double> N_commutators;   ///< ‖[N_i, B̂_i]‖
    std::vector<double> item4;           ///< ‖Y′_{i+1} N_i Y′_{i−1}‖
    std::vector<bool> M_positive;
    double C1 = 0.0;
    double alpha = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double min_Au = 0.0;                 ///< min |Au|/|u| over U
    double eps3_reference = 0.0;
    double eps4_reference = 0.0;
    double eps5_reference = 0.0;
    std::vector<std::vector<double>> YUY;  ///< ‖Y_j U Y_i‖

    bool all_passed() const;
    const StageRecord* stage(const std::string& id) const;
};

/// Window bookkeeping and stage outputs of the construction, in coordinates of ℛ = ⊕ ℛ_j.
struct HastingsState {
    int n_win = 0;
    int l_b = 0;
    int n_b = 0;
    double chi = 0.5;
    double eta = 0.1;
    std::vector<int> offset;   ///< first ℛ-coordinate of window j
    std::vector<int> size;     ///< dim 𝒳_j
    CMat A;                    ///< ℛ → ℬ, isometric on each ℛ_j
    CMat rho;                  ///< A*A
    std::vector<CMat> N;       ///< N_i bases, i = 1..n_b (index i−1)
    std::vector<CMat> Nprime;  ///< pruned bases for odd i, N_i itself for even i
    CMat Ne;                   ///< Σ_{i even} N_i
    CMat family;               ///< even N_i and odd N′_i bases side by side
    std::vector<int> family_owner;  ///< superblock index of each family column
    CMat U;                    ///< orthonormal basis of the complement of the family

    int dimR() const { return static_cast<int>(rho.rows()); }
    /// Coordinates of windows j with lo ≤ j < hi.
    std::vector<int> coords(double lo, double hi) const;
    std::vector<int> Y(int i) const;
    std::vector<int> Yp(int i) const;
    std::vector<int> Ypp(int i) const;
};

struct DecayFit {
    double C1 = 0.0;
    double alpha = 0.0;
    double C2 = 0.0;
    bool ok = false;  ///< α < 1
    std::vector<std::vector<double>> coefficients;  ///< max |n_j^i| / |y_i|
    std::vector<std::vector<double>> YUY;           ///< ‖Y_j U Y_i‖
    std::vector<bool> M_positive;                   ///< per sample, M − xI certified positive
    std::vector<double> M_min_eigenvalue;
};

/// Expansion of U^⊥ y_i over the N-family for random y_i ∈ Y_i and the geometric fit of its decay.
DecayFit decay_check_U(const HastingsState& st, int samples, Rng& rng);

struct HastingsResult {
    WCertificate cert;
    HastingsDiagnostics diag;
    HastingsState state;
};

HastingsResult hastings_W(const TridiagonalSystem& sys, const HastingsConfig& cfg, const LinOracle& oracle);

enum class Engine { Auto, Szarek, Hastings };

struct EngineConfig {
    Engine engine = Engine::Auto;
    int szarek_max_block = 4;
    SzarekParams szarek;
    HastingsConfig hastings;
    LinOracle oracle;
};

/// Dispatches to szarek_W or hastings_W.
WCertificate subspace_W(const TridiagonalSystem& sys, const EngineConfig& cfg);

}  // namespace ac
