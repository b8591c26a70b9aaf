#pragma once

#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace popstack {

/// Dense polynomial over Q, coefficients in ascending degree.
using Polynomial = std::vector<mpq_class>;

/// Truncated power series a_0 + a_1 x + ... + a_n x^n over Q.
struct SeriesTerms {
    std::vector<mpq_class> coefficients;
    /// How a_0 was obtained when the source sequence starts at n = 1,
    /// e.g. "a0=0 (assumed)". Empty when a_0 came with the data.
    std::string a0_convention;

    [[nodiscard]] int size() const { return static_cast<int>(coefficients.size()); }
    /// Highest known exponent n.
    [[nodiscard]] int order() const { return size() - 1; }
};

/// Builds a_0, f(1), ..., f(N) from a counting sequence that starts at n = 1.
SeriesTerms series_from_counts(std::span<const mpz_class> counts_from_one, const mpq_class& a0);
SeriesTerms series_from_integers(std::span<const mpz_class> coefficients);

enum class Transform { egf, reciprocal, revert };

Transform parse_transform(const std::string& name);
std::string transform_name(Transform t);

/// Applies one transform to the same truncation order. Throws
/// PreconditionError naming the transform when its precondition fails:
/// reciprocal needs a_0 != 0, revert needs a_0 = 0 and a_1 != 0.
SeriesTerms transform_series(const SeriesTerms& terms, Transform transform);
SeriesTerms transform_series(const SeriesTerms& terms, std::span<const Transform> chain);

namespace series {

std::vector<mpq_class> multiply(std::span<const mpq_class> a, std::span<const mpq_class> b, int length);
std::vector<mpq_class> reciprocal(std::span<const mpq_class> a, int length);
std::vector<mpq_class> derivative(std::span<const mpq_class> a);
/// Power series of p/q through x^(length-1); q(0) must be nonzero.
std::vector<mpq_class> expand_rational(const Polynomial& p, const Polynomial& q, int length);

}  // namespace series

namespace poly {

void trim(Polynomial& p);
/// Degree after trimming; -1 for the zero polynomial.
int degree(const Polynomial& p);
Polynomial multiply(const Polynomial& a, const Polynomial& b);
/// prod_i (1 - r_i x)^{e_i} for (r_i, e_i) pairs.
Polynomial from_linear_factors(std::span<const std::pair<long, int>> factors);
/// "[c0, c1, ...]" with exact rationals in base 10.
std::string to_string(const Polynomial& p);

}  // namespace poly

}  // namespace popstack
