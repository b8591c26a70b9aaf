#include "popstack/series.hpp"

#include <algorithm>

#include "popstack/errors.hpp"

namespace popstack {

SeriesTerms series_from_counts(std::span<const mpz_class> counts_from_one, const mpq_class& a0) {
    SeriesTerms s;
    s.coefficients.reserve(counts_from_one.size() + 1);
    s.coefficients.push_back(a0);
    for (const auto& c : counts_from_one) s.coefficients.emplace_back(c);
    s.a0_convention = "a0=" + a0.get_str() + " (assumed)";
    return s;
}

SeriesTerms series_from_integers(std::span<const mpz_class> coefficients) {
    SeriesTerms s;
    for (const auto& c : coefficients) s.coefficients.emplace_back(c);
    return s;
}

Transform parse_transform(const std::string& name) {
    if (name == "egf") return Transform::egf;
    if (name == "reciprocal" || name == "inverse") return Transform::reciprocal;
    if (name == "revert" || name == "reversion") return Transform::revert;
    throw PreconditionError("unknown transform '" + name + "' (expected egf, reciprocal or revert)");
}

std::string transform_name(Transform t) {
    switch (t) {
        case Transform::egf: return "egf";
        case Transform::reciprocal: return "reciprocal";
        case Transform::revert: return "revert";
    }
    return "?";
}

namespace series {

std::vector<mpq_class> multiply(std::span<const mpq_class> a, std::span<const mpq_class> b, int length) {
    std::vector<mpq_class> out(static_cast<std::size_t>(std::max(length, 0)));
    for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<mpq_class> reciprocal(std::span<const mpq_class> a, int length) {
    if (a.empty() || sgn(a[0]) == 0) throw PreconditionError("reciprocal: a_0 must be nonzero");
    std::vector<mpq_class> b(static_cast<std::size_t>(length));
    if (length == 0) return b;
    const mpq_class inv0 = 1 / a[0];
    b[0] = inv0;
    for (std::size_t i = 1; i < b.size(); ++i) {
        mpq_class s = 0;
        for (std::size_t j = 1; j <= i && j < a.size(); ++j) s += a[j] * b[i - j];
        b[i] = -s * inv0;
    }
    return b;
}

std::vector<mpq_class> derivative(std::span<const mpq_class> a) {
    std::vector<mpq_class> out;
    for (std::size_t i = 1; i < a.size(); ++i) out.push_back(a[i] * static_cast<long>(i));
    return out;
}

std::vector<mpq_class> expand_rational(const Polynomial& p, const Polynomial& q, int length) {
    const auto inv_q = reciprocal(q, length);
    return multiply(p, inv_q, length);
}

}  // namespace series

namespace {

SeriesTerms apply_egf(const SeriesTerms& in) {
    SeriesTerms out = in;
    mpz_class fact = 1;
    for (std::size_t n = 0; n < out.coefficients.size(); ++n) {
        if (n > 0) fact *= static_cast<unsigned long>(n);
        out.coefficients[n] /= mpq_class(fact);
    }
    return out;
}

SeriesTerms apply_reciprocal(const SeriesTerms& in) {
    if (in.coefficients.empty() || sgn(in.coefficients[0]) == 0) {
        throw PreconditionError("transform 'reciprocal' needs a_0 != 0 (supply a nonzero a_0, e.g. --a0 1)");
    }
    SeriesTerms out = in;
    out.coefficients = series::reciprocal(in.coefficients, in.size());
    return out;
}

// Lagrange inversion: [x^i] G = (1/i) [x^{i-1}] H^i with H = x / F.
SeriesTerms apply_revert(const SeriesTerms& in) {
    const auto& a = in.coefficients;
    if (a.size() < 2 || sgn(a[0]) != 0 || sgn(a[1]) == 0) {
        throw PreconditionError("transform 'revert' needs a_0 = 0 and a_1 != 0");
    }
    const int length = in.size();
    const std::vector<mpq_class> shifted(a.begin() + 1, a.end());  // F / x
    const auto h = series::reciprocal(shifted, length);
    SeriesTerms out = in;
    out.coefficients.assign(static_cast<std::size_t>(length), mpq_class(0));
    std::vector<mpq_class> power = h;  // H^i
    for (int i = 1; i < length; ++i) {
        if (i > 1) power = series::multiply(power, h, length);
        out.coefficients[static_cast<std::size_t>(i)] = power[static_cast<std::size_t>(i - 1)] / mpq_class(i);
    }
    return out;
}

}  // namespace

SeriesTerms transform_series(const SeriesTerms& terms, Transform transform) {
    switch (transform) {
        case Transform::egf: return apply_egf(terms);
        case Transform::reciprocal: return apply_reciprocal(terms);
        case Transform::revert: return apply_revert(terms);
    }
    throw PreconditionError("unknown transform");
}

SeriesTerms transform_series(const SeriesTerms& terms, std::span<const Transform> chain) {
    SeriesTerms out = terms;
    for (Transform t : chain) out = transform_series(out, t);
    return out;
}

namespace poly {

void trim(Polynomial& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int degree(const Polynomial& p) {
    for (std::size_t i = p.size(); i-- > 0;) {
        if (sgn(p[i]) != 0) return static_cast<int>(i);
    }
    return -1;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    if (a.empty() || b.empty()) return {};
    Polynomial out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

Polynomial from_linear_factors(std::span<const std::pair<long, int>> factors) {
    Polynomial out{mpq_class(1)};
    for (const auto& [root_inverse, exponent] : factors) {
        const Polynomial factor{mpq_class(1), mpq_class(-root_inverse)};
        for (int e = 0; e < exponent; ++e) out = multiply(out, factor);
    }
    return out;
}

std::string to_string(const Polynomial& p) {
    Polynomial t = p;
    trim(t);
    std::string out = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0) out += ", ";
        out += t[i].get_str();
    }
    if (t.empty()) out += "0";
    return out + "]";
}

}  // namespace poly

}  // namespace popstack
