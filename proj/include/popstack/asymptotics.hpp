#pragma once

// Differential approximants and growth-constant extrapolation.
//
// An approximant of order k and degree d is a linear ODE
//     sum_{j=0}^{k} p_j(x) F^{(j)}(x) [+ q(x)] = 0,   deg p_j, deg q <= d,
// whose unknown coefficients are determined by making the first U - 1
// coefficients of the left-hand side vanish (U = number of unknowns). The
// solve runs in MPFR floating point at the configured precision; the terms
// themselves enter as exact rationals rounded once.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "popstack/series.hpp"

namespace popstack::asym {

using Real = boost::multiprecision::mpfr_float;

inline constexpr int kDefaultPrecisionBits = 256;

/// Solve precision for a series of the given length. The pivots of the
/// approximant systems shrink geometrically with the size, so a fixed 256
/// bits loses the subdominant singularities past ~150 terms.
inline int default_precision_bits(int terms) { return terms * 3 > kDefaultPrecisionBits ? terms * 3 : kDefaultPrecisionBits; }
/// Terms left unused by the default grid.
inline constexpr int kDefaultSpareTerms = 10;
/// Relative distance under which estimates from different approximants merge.
inline constexpr double kClusterRadius = 1e-3;

struct Complex {
    Real re;
    Real im;
};

/// Sets the default MPFR precision for the current scope.
class PrecisionScope {
public:
    explicit PrecisionScope(int bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

struct ApproximantConfig {
    int k = 2;
    int d = 10;
    bool inhomogeneous = false;
    int precision_bits = kDefaultPrecisionBits;

    [[nodiscard]] int unknowns() const { return (k + 1 + (inhomogeneous ? 1 : 0)) * (d + 1); }
    /// Coefficients a_0..a_{m-1} consumed by the U - 1 equations.
    [[nodiscard]] int terms_needed() const { return unknowns() - 1 + k; }
    [[nodiscard]] std::string label() const;
};

/// Numeric ODE: coefficients[j] is p_j in ascending powers of x.
struct Approximant {
    ApproximantConfig config;
    std::vector<std::vector<Real>> coefficients;
    std::vector<Real> inhomogeneous;
    int kernel_dimension = 1;  // > 1 when the terms satisfy a smaller ODE
    Real smallest_pivot;       // conditioning diagnostic, rows scaled to max 1
};

/// Fits one approximant. Throws PreconditionError when the series is too
/// short for the config and std::runtime_error when the solution has a zero
/// leading polynomial (adjust k or d).
Approximant differential_approximant(const SeriesTerms& egf_terms, const ApproximantConfig& config);

struct SingularityEstimate {
    Complex location;
    Real exponent;           // real part of the critical exponent
    bool exponent_defined = true;  // false at multiple roots
    int agreed_digits = 0;
};

/// Roots of p_k with the critical exponent k - 1 - p_{k-1}(x0) / p_k'(x0)
/// at each simple root. Throws ConvergenceError if the roots cannot be
/// polished to the requested precision.
std::vector<SingularityEstimate> singularities(const Approximant& ode, int precision_bits);

/// Real roots are the ones with |Im| below this fraction of |z|.
bool is_real(const Complex& z, double relative = 1e-20);

struct SingularityCluster {
    SingularityEstimate estimate;  // mean location and exponent, Im >= 0
    bool conjugate_pair = false;
    int support = 0;               // approximants contributing a root
    bool confirmed = false;        // support from a majority of approximants
    std::vector<std::string> members;  // labels of contributing approximants
};

struct AnalysisReport {
    int terms = 0;
    int approximants_ok = 0;
    std::vector<std::string> failures;  // "label: reason"
    std::vector<SingularityCluster> clusters;  // ascending modulus
};

/// k in {2,3,4} x {homogeneous, inhomogeneous} x the two largest degrees
/// leaving `spare` terms unused.
std::vector<ApproximantConfig> default_grid(int terms, int precision_bits = kDefaultPrecisionBits,
                                            int spare = kDefaultSpareTerms);

/// Runs every approximant in the grid and clusters their roots. Throws
/// std::runtime_error if every approximant failed.
AnalysisReport analyze(const SeriesTerms& egf_terms, const std::vector<ApproximantConfig>& grid);

/// Confirmed cluster of least modulus on the positive real axis.
const SingularityCluster* dominant(const AnalysisReport& report);

struct GrowthEstimate {
    Real mu;
    Real mu_inv;
    Real C;
    int mu_digits = 0;
    int C_digits = 0;
    int terms = 0;
    bool partial = false;  // fewer terms than a stable extrapolation needs
    std::string note;
};

/// C_n = a_n mu^n / n!, extrapolated by eliminating a geometric tail with
/// ratio r = mu / mu2 (Aitken's estimate of r when mu2 is absent). C_digits
/// are the digits that survive dropping the last 10% of terms.
GrowthEstimate growth_constants(const SeriesTerms& counting_terms, const Real& mu, int mu_digits,
                                const std::optional<Real>& mu2 = std::nullopt);

/// growth_constants at the dominant cluster, with mu2 the modulus of the
/// next confirmed cluster. Empty when no dominant cluster was confirmed.
std::optional<GrowthEstimate> growth_from_report(const AnalysisReport& report, const SeriesTerms& counting_terms);

/// Number of leading significant decimal digits shared by a and b.
int agreed_digits(const Real& a, const Real& b);
int agreed_digits(const Complex& a, const Complex& b);

/// Decimal string with `digits` significant digits.
std::string format(const Real& x, int digits);

std::string to_text(const AnalysisReport& report, const std::optional<GrowthEstimate>& growth);

}  // namespace popstack::asym
