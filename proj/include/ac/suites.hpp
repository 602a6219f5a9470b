#pragma once

#include "ac/boundcheck.hpp"
#include "ac/matcore.hpp"

#include <string>
#include <vector>

namespace ac {

/// Tally of one property family inside a suite.
struct SuiteLine {
    std::string name;
    int trials = 0;
    int violations = 0;
    double worst_slack = kInf;  ///< min over trials of slack / max(1, rhs)
    double worst_value = 0.0;   ///< largest residual for identity-type checks
    std::string detail;

    void add(const BoundCheck& c);
    void add_residual(double value, double tol);
};

struct SuiteResult {
    std::string id;
    unsigned long long seed = 0;
    int trials = 0;
    std::vector<SuiteLine> lines;
    double seconds = 0.0;

    int violations() const;
    bool pass() const { return violations() == 0; }
    const SuiteLine* line(const std::string& name) const;
};

/// Davis–Kahan sandwich, comm-proj (with the sharpness pair), Schur division, spectral gap, Fourier commutator.
SuiteResult suite_bounds(unsigned long long seed, int trials);
/// Lieb–Robinson decay on banded systems, operator forms, monotonicity in distance.
SuiteResult suite_lieb_robinson(unsigned long long seed, int trials);
/// Jordan blocks, Jordan bases, nested projections, tridiagonal positivity, inverse decay.
SuiteResult suite_projections(unsigned long long seed, int trials);
/// Finite-range exactness and bounds, partition of unity, profile invariants.
SuiteResult suite_smoothing(unsigned long long seed, int trials);
/// T_N identities for n = 2, 3 and N ≤ 5, and the spectrum of T_3(diag(0,1)).
SuiteResult suite_tn(unsigned long long seed, int trials);

/// Dispatch by id; throws PreconditionError for an unknown id.
SuiteResult run_suite(const std::string& id, unsigned long long seed, int trials);
std::vector<std::string> suite_ids();

}  // namespace ac
