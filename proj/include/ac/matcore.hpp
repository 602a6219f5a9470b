#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ac {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Rng = std::mt19937_64;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised when an operation's precondition does not hold.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Ascending eigenvalues with a unitary matrix of eigenvectors (columns).
struct HermitianEig {
    RVec values;
    CMat vectors;
    double sym_defect = 0.0;  ///< ‖A − A*‖ of the input before symmetrization
    double scale = 0.0;       ///< ‖A‖ of the symmetrized input

    int dim() const { return static_cast<int>(values.size()); }
    CMat reconstruct() const;
};

struct OrthoProjection {
    CMat matrix;
    int rank = 0;

    int dim() const { return static_cast<int>(matrix.rows()); }
    OrthoProjection complement() const;
};

struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool lo_closed = true;
    bool hi_closed = true;

    bool contains(double x) const;
};

/// Finite union of intervals on the real line.
class RealSet {
public:
    RealSet() = default;
    explicit RealSet(std::vector<Interval> parts);

    static RealSet all();
    static RealSet none();
    static RealSet closed(double lo, double hi);
    static RealSet open(double lo, double hi);
    static RealSet half_open(double lo, double hi);  ///< [lo, hi)
    static RealSet point(double x);
    static RealSet at_most(double x, bool closed = true);
    static RealSet at_least(double x, bool closed = true);

    /// Degenerate intervals (single points) match within `point_tol`.
    bool contains(double x, double point_tol = 0.0) const;
    RealSet unite(const RealSet& other) const;
    RealSet complement() const;
    bool disjoint(const RealSet& other) const;
    double dist(const RealSet& other) const;
    double dist(double x) const;
    bool empty() const { return parts_.empty(); }
    double inf() const;
    double sup() const;
    const std::vector<Interval>& parts() const { return parts_; }
    std::string describe() const;

private:
    std::vector<Interval> parts_;
};

double op_norm(const CMat& A);
CMat commutator(const CMat& A, const CMat& B);
bool is_hermitian(const CMat& A, double rel_tol = 1e-10);
CMat hermitian_part(const CMat& A);

HermitianEig eig_hermitian(const CMat& A);

/// Tolerance used to decide eigenvalue equality for an eigendecomposition.
double eig_tolerance(const HermitianEig& E);

OrthoProjection spectral_projection(const HermitianEig& E, const RealSet& S);
OrthoProjection spectral_projection(const HermitianEig& E, const std::function<bool(double)>& S);
/// Orthonormal basis of Ran E_S.
CMat spectral_basis(const HermitianEig& E, const RealSet& S);

CMat apply_function(const HermitianEig& E, const std::function<cplx(double)>& f);
CMat apply_real_function(const HermitianEig& E, const std::function<double(double)>& f);
CMat expi(const HermitianEig& E, double t);  ///< e^{itA}

CMat pinch(const CMat& A, const std::vector<OrthoProjection>& parts);
/// Pinch along orthonormal bases whose columns jointly form a unitary.
CMat pinch_bases(const CMat& A, const std::vector<CMat>& bases);

OrthoProjection projector(const CMat& basis);
/// Orthonormal basis of the column span of M (singular values above tol·max(1,‖M‖)).
CMat range_basis(const CMat& M, double tol = 1e-10);
/// Orthonormal basis of the orthogonal complement of span(basis) in ℂⁿ.
CMat orth_complement(const CMat& basis, int n, double tol = 1e-10);
/// Orthonormal basis of span(M) with span(against) projected out.
CMat orth_against(const CMat& M, const CMat& against, double tol = 1e-10);
CMat hstack(const std::vector<CMat>& parts, int rows);
bool is_projection(const CMat& P, double tol = 1e-10);

CMat random_complex(int n, int m, Rng& rng);
CMat random_hermitian(int n, Rng& rng);
CMat random_unitary(int n, Rng& rng);
CMat random_isometry(int n, int k, Rng& rng);
/// Hermitian contraction scaled so ‖A‖ = norm.
CMat random_contraction(int n, Rng& rng, double norm = 1.0);

}  // namespace ac
