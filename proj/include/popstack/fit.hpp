#pragma once

// Automated guessing of generating functions from initial terms.
//
// Every ansatz is a homogeneous linear system over Q whose unknowns are the
// coefficients of the polynomials in the ansatz. Candidate sizes are first
// decided mod a word-size prime (a trivial kernel mod p proves a trivial
// kernel over Q); only when the modular kernel is nontrivial is the system
// solved exactly, by fraction-free elimination on the modular pivot rows,
// and the result checked against every equation.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "popstack/dp.hpp"
#include "popstack/series.hpp"

namespace popstack {

/// The default prime for modular pre-solves, 2^31 - 1.
inline constexpr std::uint64_t kDefaultFitPrime = 2147483647ULL;
inline constexpr int kDefaultFitMargin = 10;

enum class FitFamily { rational, algebraic, dfinite };

std::string family_name(FitFamily f);

/// F = numerator / denominator, coprime, denominator(0) = 1.
struct RationalFit {
    Polynomial numerator;
    Polynomial denominator;
    int degree = 0;        // d: max degree allowed in the solved system
    int terms = 0;         // number of coefficients a_0..a_n used
    int confirmation = 0;  // n - 2d, the terms beyond what the unknowns absorb
};

/// sum_{i=0}^{m} p_i(x) F(x)^i = 0.
struct AlgebraicFit {
    int m = 0;
    int d = 0;
    std::vector<Polynomial> coefficients;  // p_0 .. p_m, primitive integer scaling
    int terms = 0;
    int confirmation = 0;
};

/// sum_{j=0}^{k} p_j(x) F^{(j)}(x) + q(x) = 0.
struct DFiniteFit {
    int k = 0;
    int d = 0;
    std::vector<Polynomial> coefficients;  // p_0 .. p_k
    Polynomial inhomogeneous;              // q; empty for homogeneous fits
    int terms = 0;
    int confirmation = 0;
};

/// No nontrivial solution exists for any searched parameter pair, given the
/// stated terms. `boundary` lists the maximal pairs (order or power, degree)
/// whose systems were solved; every other searched pair embeds in one of
/// them.
struct NegativeCertificate {
    FitFamily family = FitFamily::rational;
    std::vector<std::pair<int, int>> boundary;
    int max_unknowns = 0;  // largest unknown count searched
    int terms = 0;
    int margin = 0;
    std::uint64_t prime = 0;  // modulus of the rank computations
};

struct FitOptions {
    int margin = kDefaultFitMargin;
    std::uint64_t prime = kDefaultFitPrime;
    /// Upper bound on the number of unknowns; 0 means only the margin limits it.
    int max_unknowns = 0;
    /// D-finite only: include the inhomogeneous term q(x).
    bool inhomogeneous = true;
};

using RationalResult = std::variant<RationalFit, NegativeCertificate>;
using AlgebraicResult = std::variant<AlgebraicFit, NegativeCertificate>;
using DFiniteResult = std::variant<DFiniteFit, NegativeCertificate>;

/// Searches d = 0, 1, ..., min(d_max, floor((n - margin) / 2)) and returns
/// the first d with a fit, else a certificate for the whole range.
RationalResult fit_rational(const SeriesTerms& terms, int d_max, const FitOptions& options = {});

/// Searches pairs (m, d), 1 <= m <= m_max, with (m+1)(d+1) <= terms - margin,
/// ordered by (m+1)(d+1), ties by m.
AlgebraicResult fit_algebraic(const SeriesTerms& terms, int m_max, int d_max, const FitOptions& options = {});

/// Searches pairs (k, d), 0 <= k <= k_max, with unknowns <= terms - margin and
/// more equations than unknowns, ordered by unknown count, ties by k.
DFiniteResult fit_dfinite(const SeriesTerms& terms, int k_max, int d_max, const FitOptions& options = {});

bool verify_fit(const RationalFit& fit, const SeriesTerms& terms);
bool verify_fit(const AlgebraicFit& fit, const SeriesTerms& terms);
bool verify_fit(const DFiniteFit& fit, const SeriesTerms& terms);

/// "numerator=[...]; denominator=[...]"; equal strings mean equal fits.
std::string canonical_string(const RationalFit& fit);

/// Structured text: one "key value" line per field, polynomials as
/// space-separated base-10 rationals.
std::string to_text(const RationalFit& fit);
std::string to_text(const AlgebraicFit& fit);
std::string to_text(const DFiniteFit& fit);
std::string to_text(const NegativeCertificate& cert);

/// prod_{i=1}^{k} (1 - i x)^{k - i + 1}.
Polynomial conjectured_runs_denominator(int k);

struct RunsFamilyEntry {
    int k = 0;
    std::optional<RationalFit> fit;
    std::optional<NegativeCertificate> certificate;
    std::string error;  // set when the column was too short to search
    bool denominator_matches_conjecture = false;
    bool numerator_degree_matches_conjecture = false;  // degree k(k+1)/2
};

/// Fits F_k(x) = sum_n f(n, k) x^n (a_0 = 0) for each k in [k_lo, k_hi].
std::vector<RunsFamilyEntry> fit_runs_family(const CountMatrix<BigIntRing>& counts, int k_lo, int k_hi, int d_max,
                                             const FitOptions& options = {});

namespace fit_detail {

/// Coefficient rows of the rational system with unknowns q_0..q_d: the
/// equations for x^{d+1}..x^n, which involve only q (p is then read off
/// the first d + 1 coefficients of qF).
std::vector<std::vector<mpq_class>> rational_rows(const SeriesTerms& terms, int d);
/// Unknown (i, t) at column i (d + 1) + t; equations x^0..x^n.
std::vector<std::vector<mpq_class>> algebraic_rows(const SeriesTerms& terms, int m, int d);
/// Unknown (j, t) at column j (d + 1) + t, then q_t; equations x^0..x^{n-k}.
std::vector<std::vector<mpq_class>> dfinite_rows(const SeriesTerms& terms, int k, int d, bool inhomogeneous);

/// Rank of a rational system mod p.
int modular_rank(const std::vector<std::vector<mpq_class>>& rows, int cols, std::uint64_t p);

}  // namespace fit_detail

}  // namespace popstack
