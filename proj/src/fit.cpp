#include "popstack/fit.hpp"

#include <algorithm>
#include <sstream>

#include "popstack/errors.hpp"
#include "popstack/linalg.hpp"

namespace popstack {

namespace {

// Arithmetic policies so one set of row builders serves Q and F_p.
struct QArith {
    using T = mpq_class;
    [[nodiscard]] T zero() const { return 0; }
    [[nodiscard]] T from(const mpq_class& x) const { return x; }
    [[nodiscard]] T from_long(long x) const { return x; }
    [[nodiscard]] T add(const T& a, const T& b) const { return a + b; }
    [[nodiscard]] T mul(const T& a, const T& b) const { return a * b; }
};

struct ModArith {
    using T = std::uint64_t;
    std::uint64_t p;
    [[nodiscard]] T zero() const { return 0; }
    [[nodiscard]] T from(const mpq_class& x) const { return linalg::reduce_mod(x, p); }
    [[nodiscard]] T from_long(long x) const {
        const long r = x % static_cast<long>(p);
        return static_cast<T>(r < 0 ? r + static_cast<long>(p) : r);
    }
    [[nodiscard]] T add(T a, T b) const { return (a + b) % p; }
    [[nodiscard]] T mul(T a, T b) const { return a * b % p; }
};

template <class A>
using Rows = std::vector<std::vector<typename A::T>>;

template <class A>
std::vector<typename A::T> convert(const SeriesTerms& terms, const A& ar) {
    std::vector<typename A::T> out;
    out.reserve(terms.coefficients.size());
    for (const auto& c : terms.coefficients) out.push_back(ar.from(c));
    return out;
}

template <class A>
std::vector<typename A::T> multiply(const std::vector<typename A::T>& a, const std::vector<typename A::T>& b,
                                    const A& ar) {
    const std::size_t n = a.size();
    std::vector<typename A::T> out(n, ar.zero());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == ar.zero()) continue;
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] = ar.add(out[i + j], ar.mul(a[i], b[j]));
    }
    return out;
}

template <class A>
Rows<A> build_rational(const std::vector<typename A::T>& a, int d, const A& ar) {
    const int n = static_cast<int>(a.size()) - 1;
    Rows<A> rows;
    for (int i = d + 1; i <= n; ++i) {
        std::vector<typename A::T> row(static_cast<std::size_t>(d + 1), ar.zero());
        for (int j = 0; j <= d; ++j) row[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(i - j)];
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class A>
Rows<A> build_algebraic(const std::vector<typename A::T>& a, int m, int d, const A& ar) {
    const int n = static_cast<int>(a.size()) - 1;
    std::vector<std::vector<typename A::T>> powers;
    powers.emplace_back(a.size(), ar.zero());
    powers[0][0] = ar.from_long(1);
    for (int i = 1; i <= m; ++i) powers.push_back(multiply(powers.back(), a, ar));
    const int cols = (m + 1) * (d + 1);
    Rows<A> rows;
    for (int s = 0; s <= n; ++s) {
        std::vector<typename A::T> row(static_cast<std::size_t>(cols), ar.zero());
        for (int i = 0; i <= m; ++i)
            for (int t = 0; t <= d && t <= s; ++t)
                row[static_cast<std::size_t>(i * (d + 1) + t)] =
                    powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(s - t)];
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class A>
Rows<A> build_dfinite(const std::vector<typename A::T>& a, int k, int d, bool inhomogeneous, const A& ar) {
    const int n = static_cast<int>(a.size()) - 1;
    // derivs[j][e] = [x^e] F^{(j)}, known for e <= n - j.
    std::vector<std::vector<typename A::T>> derivs{a};
    for (int j = 1; j <= k; ++j) {
        const auto& prev = derivs.back();
        std::vector<typename A::T> next;
        for (std::size_t e = 1; e < prev.size(); ++e) next.push_back(ar.mul(prev[e], ar.from_long(static_cast<long>(e))));
        derivs.push_back(std::move(next));
    }
    const int cols = (k + 1 + (inhomogeneous ? 1 : 0)) * (d + 1);
    Rows<A> rows;
    for (int s = 0; s <= n - k; ++s) {
        std::vector<typename A::T> row(static_cast<std::size_t>(cols), ar.zero());
        for (int j = 0; j <= k; ++j)
            for (int t = 0; t <= d && t <= s; ++t)
                row[static_cast<std::size_t>(j * (d + 1) + t)] =
                    derivs[static_cast<std::size_t>(j)][static_cast<std::size_t>(s - t)];
        if (inhomogeneous && s <= d) row[static_cast<std::size_t>((k + 1) * (d + 1) + s)] = ar.from_long(1);
        rows.push_back(std::move(row));
    }
    return rows;
}

linalg::ModMatrix to_mod_matrix(const std::vector<std::vector<std::uint64_t>>& rows, int cols) {
    linalg::ModMatrix m(static_cast<int>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < cols; ++j) m(static_cast<int>(i), j) = rows[i][static_cast<std::size_t>(j)];
    return m;
}

bool row_annihilates(const std::vector<mpq_class>& row, const linalg::IntegerRow& v) {
    mpq_class s = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (sgn(v[j]) != 0 && sgn(row[j]) != 0) s += row[j] * mpq_class(v[j]);
    }
    return sgn(s) == 0;
}

// Exact kernel vector of `rows`, guided by the modular pivot rows. Returns
// nullopt when the kernel over Q is trivial (the modular kernel was an
// artefact of an unlucky prime).
std::optional<linalg::IntegerRow> exact_kernel_vector(const std::vector<std::vector<mpq_class>>& rows, int cols,
                                                      const linalg::ModEchelon& echelon) {
    auto all_ok = [&](const linalg::IntegerRow& v) {
        return std::all_of(rows.begin(), rows.end(), [&](const auto& row) { return row_annihilates(row, v); });
    };
    std::vector<linalg::IntegerRow> sub;
    sub.reserve(echelon.pivot_rows.size());
    for (int r : echelon.pivot_rows) sub.push_back(linalg::clear_denominators(rows[static_cast<std::size_t>(r)]));
    const auto kernel = linalg::integer_nullspace(std::move(sub), cols);
    for (const auto& v : kernel.basis) {
        if (all_ok(v)) return v;
    }
    std::vector<linalg::IntegerRow> full;
    full.reserve(rows.size());
    for (const auto& row : rows) full.push_back(linalg::clear_denominators(row));
    const auto full_kernel = linalg::integer_nullspace(std::move(full), cols);
    if (full_kernel.basis.empty()) return std::nullopt;
    return full_kernel.basis.front();
}

// Outcome of a modular check: the echelon when the kernel is nontrivial.
std::optional<linalg::ModEchelon> modular_kernel(const std::vector<std::vector<std::uint64_t>>& rows, int cols,
                                                  std::uint64_t p) {
    auto echelon = linalg::modular_echelon(to_mod_matrix(rows, cols), p);
    if (echelon.rank >= cols) return std::nullopt;
    return echelon;
}

// Maximal elements of a downward-closed set of (a, d) pairs.
std::vector<std::pair<int, int>> maximal_pairs(const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [a, d] : pairs) {
        const bool dominated = std::any_of(pairs.begin(), pairs.end(), [&](const auto& q) {
            return q != std::make_pair(a, d) && q.first >= a && q.second >= d;
        });
        if (!dominated) out.emplace_back(a, d);
    }
    return out;
}

void check_common(const SeriesTerms& terms, const FitOptions& options) {
    if (options.margin < 1) throw PreconditionError("margin must be at least 1");
    if (terms.size() < 2) throw PreconditionError("need at least two terms to fit");
    if (options.prime < 3 || options.prime >= (std::uint64_t{1} << 31)) {
        throw PreconditionError("fit prime must lie in [3, 2^31)");
    }
}

bool all_zero(const SeriesTerms& terms) {
    return std::all_of(terms.coefficients.begin(), terms.coefficients.end(),
                       [](const mpq_class& x) { return sgn(x) == 0; });
}

Polynomial to_poly(const linalg::IntegerRow& v, std::size_t begin, std::size_t count) {
    Polynomial p;
    for (std::size_t i = 0; i < count; ++i) p.emplace_back(v[begin + i]);
    poly::trim(p);
    return p;
}

std::string poly_fields(const Polynomial& p) {
    Polynomial t = p;
    poly::trim(t);
    if (t.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0) out += ' ';
        out += t[i].get_str();
    }
    return out;
}

// Search over a downward-closed set of (a, d) pairs. `order` is the search
// order; `build` yields the rows and column count for a pair over a given
// arithmetic.
template <class BuildMod, class BuildQ>
std::optional<std::tuple<int, int, linalg::IntegerRow>> search_pairs(std::vector<std::pair<int, int>> order,
                                                                     std::uint64_t p, BuildMod build_mod,
                                                                     BuildQ build_q,
                                                                     std::vector<std::pair<int, int>>& boundary) {
    boundary = maximal_pairs(order);
    std::vector<std::pair<int, int>> positive_boundary;
    for (const auto& [a, d] : boundary) {
        const auto [rows, cols] = build_mod(a, d);
        if (modular_kernel(rows, cols, p)) positive_boundary.emplace_back(a, d);
    }
    if (positive_boundary.empty()) return std::nullopt;
    for (const auto& [a, d] : order) {
        const bool reachable = std::any_of(positive_boundary.begin(), positive_boundary.end(),
                                           [&](const auto& q) { return q.first >= a && q.second >= d; });
        if (!reachable) continue;
        const auto [rows, cols] = build_mod(a, d);
        const auto echelon = modular_kernel(rows, cols, p);
        if (!echelon) continue;
        const auto [qrows, qcols] = build_q(a, d);
        if (auto v = exact_kernel_vector(qrows, qcols, *echelon)) return std::make_tuple(a, d, std::move(*v));
    }
    return std::nullopt;
}

}  // namespace

std::string family_name(FitFamily f) {
    switch (f) {
        case FitFamily::rational: return "rational";
        case FitFamily::algebraic: return "algebraic";
        case FitFamily::dfinite: return "dfinite";
    }
    return "?";
}

namespace fit_detail {

std::vector<std::vector<mpq_class>> rational_rows(const SeriesTerms& terms, int d) {
    const QArith ar;
    return build_rational(convert(terms, ar), d, ar);
}

std::vector<std::vector<mpq_class>> algebraic_rows(const SeriesTerms& terms, int m, int d) {
    const QArith ar;
    return build_algebraic(convert(terms, ar), m, d, ar);
}

std::vector<std::vector<mpq_class>> dfinite_rows(const SeriesTerms& terms, int k, int d, bool inhomogeneous) {
    const QArith ar;
    return build_dfinite(convert(terms, ar), k, d, inhomogeneous, ar);
}

int modular_rank(const std::vector<std::vector<mpq_class>>& rows, int cols, std::uint64_t p) {
    linalg::ModMatrix m(static_cast<int>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < cols; ++j) m(static_cast<int>(i), j) = linalg::reduce_mod(rows[i][static_cast<std::size_t>(j)], p);
    return linalg::modular_echelon(std::move(m), p).rank;
}

}  // namespace fit_detail

RationalResult fit_rational(const SeriesTerms& terms, int d_max, const FitOptions& options) {
    check_common(terms, options);
    const int n = terms.order();
    if (all_zero(terms)) {
        return RationalFit{{}, {mpq_class(1)}, 0, terms.size(), n};
    }
    int top = std::min(d_max, (n - options.margin) / 2);
    if (options.max_unknowns > 0) top = std::min(top, options.max_unknowns / 2 - 1);
    if (top < 0) {
        throw PreconditionError("too few terms for a rational fit with margin " + std::to_string(options.margin));
    }
    const ModArith mod{options.prime};
    const auto a_mod = convert(terms, mod);
    std::vector<std::pair<int, int>> order;
    for (int d = 0; d <= top; ++d) order.emplace_back(1, d);
    std::vector<std::pair<int, int>> boundary;
    auto found = search_pairs(
        order, options.prime,
        [&](int, int d) { return std::make_pair(build_rational(a_mod, d, mod), d + 1); },
        [&](int, int d) { return std::make_pair(fit_detail::rational_rows(terms, d), d + 1); }, boundary);
    if (!found) {
        NegativeCertificate cert;
        cert.family = FitFamily::rational;
        cert.boundary = {{0, top}};
        cert.max_unknowns = 2 * top + 2;
        cert.terms = terms.size();
        cert.margin = options.margin;
        cert.prime = options.prime;
        return cert;
    }
    const auto& [unused, d, v] = *found;
    Polynomial q = to_poly(v, 0, static_cast<std::size_t>(d + 1));
    Polynomial p(static_cast<std::size_t>(d + 1), mpq_class(0));
    for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= i && j < static_cast<int>(q.size()); ++j)
            p[static_cast<std::size_t>(i)] += q[static_cast<std::size_t>(j)] * terms.coefficients[static_cast<std::size_t>(i - j)];
    // q(0) = 0 would force p(0) = 0 and a smaller d; strip x anyway.
    while (!q.empty() && sgn(q.front()) == 0 && (p.empty() || sgn(p.front()) == 0)) {
        q.erase(q.begin());
        if (!p.empty()) p.erase(p.begin());
    }
    const mpq_class lead = q.front();
    for (auto& c : q) c /= lead;
    for (auto& c : p) c /= lead;
    poly::trim(p);
    poly::trim(q);
    return RationalFit{p, q, d, terms.size(), n - 2 * d};
}

AlgebraicResult fit_algebraic(const SeriesTerms& terms, int m_max, int d_max, const FitOptions& options) {
    check_common(terms, options);
    const int n = terms.order();
    std::vector<std::pair<int, int>> order;
    for (int m = 1; m <= m_max; ++m) {
        for (int d = 0; d <= d_max; ++d) {
            const int unknowns = (m + 1) * (d + 1);
            if ((n + 1) - unknowns < options.margin) break;
            if (options.max_unknowns > 0 && unknowns > options.max_unknowns) break;
            order.emplace_back(m, d);
        }
    }
    if (order.empty()) throw PreconditionError("too few terms for an algebraic fit");
    std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
        const int ux = (x.first + 1) * (x.second + 1);
        const int uy = (y.first + 1) * (y.second + 1);
        return ux != uy ? ux < uy : x.first < y.first;
    });
    const ModArith mod{options.prime};
    const auto a_mod = convert(terms, mod);
    std::vector<std::pair<int, int>> boundary;
    auto found = search_pairs(
        order, options.prime,
        [&](int m, int d) { return std::make_pair(build_algebraic(a_mod, m, d, mod), (m + 1) * (d + 1)); },
        [&](int m, int d) { return std::make_pair(fit_detail::algebraic_rows(terms, m, d), (m + 1) * (d + 1)); },
        boundary);
    if (!found) {
        NegativeCertificate cert;
        cert.family = FitFamily::algebraic;
        cert.boundary = boundary;
        for (const auto& [m, d] : boundary) cert.max_unknowns = std::max(cert.max_unknowns, (m + 1) * (d + 1));
        cert.terms = terms.size();
        cert.margin = options.margin;
        cert.prime = options.prime;
        return cert;
    }
    const auto& [m, d, v] = *found;
    AlgebraicFit fit;
    fit.m = m;
    fit.d = d;
    for (int i = 0; i <= m; ++i) {
        fit.coefficients.push_back(
            to_poly(v, static_cast<std::size_t>(i * (d + 1)), static_cast<std::size_t>(d + 1)));
    }
    fit.terms = terms.size();
    fit.confirmation = (n + 1) - ((m + 1) * (d + 1) - 1);
    return fit;
}

DFiniteResult fit_dfinite(const SeriesTerms& terms, int k_max, int d_max, const FitOptions& options) {
    check_common(terms, options);
    const int n = terms.order();
    const int extra = options.inhomogeneous ? 1 : 0;
    auto unknowns_of = [&](int k, int d) { return (k + 1 + extra) * (d + 1); };
    std::vector<std::pair<int, int>> order;
    for (int k = 0; k <= k_max; ++k) {
        for (int d = 0; d <= d_max; ++d) {
            const int unknowns = unknowns_of(k, d);
            // The margin counts terms, as for the other families; the k
            // highest terms only feed derivatives, so also insist on at
            // least one equation beyond what the unknowns absorb.
            const int equations = n - k + 1;
            if ((n + 1) - unknowns < options.margin || equations - (unknowns - 1) < 1) break;
            if (options.max_unknowns > 0 && unknowns > options.max_unknowns) break;
            order.emplace_back(k, d);
        }
    }
    if (order.empty()) throw PreconditionError("too few terms for a D-finite fit");
    std::stable_sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
        const int ux = unknowns_of(x.first, x.second);
        const int uy = unknowns_of(y.first, y.second);
        return ux != uy ? ux < uy : x.first < y.first;
    });
    const ModArith mod{options.prime};
    const auto a_mod = convert(terms, mod);
    std::vector<std::pair<int, int>> boundary;
    auto found = search_pairs(
        order, options.prime,
        [&](int k, int d) {
            return std::make_pair(build_dfinite(a_mod, k, d, options.inhomogeneous, mod), unknowns_of(k, d));
        },
        [&](int k, int d) {
            return std::make_pair(fit_detail::dfinite_rows(terms, k, d, options.inhomogeneous), unknowns_of(k, d));
        },
        boundary);
    if (!found) {
        NegativeCertificate cert;
        cert.family = FitFamily::dfinite;
        cert.boundary = boundary;
        for (const auto& [k, d] : boundary) cert.max_unknowns = std::max(cert.max_unknowns, unknowns_of(k, d));
        cert.terms = terms.size();
        cert.margin = options.margin;
        cert.prime = options.prime;
        return cert;
    }
    auto [k, d, v] = *found;
    // Sign convention: the leading coefficient of the highest-order nonzero
    // p_j is positive.
    for (int j = k; j >= 0; --j) {
        int s = 0;
        for (int t = d; t >= 0 && s == 0; --t) s = sgn(v[static_cast<std::size_t>(j * (d + 1) + t)]);
        if (s != 0) {
            if (s < 0)
                for (auto& x : v) x = -x;
            break;
        }
    }
    DFiniteFit fit;
    fit.k = k;
    fit.d = d;
    for (int j = 0; j <= k; ++j) {
        fit.coefficients.push_back(
            to_poly(v, static_cast<std::size_t>(j * (d + 1)), static_cast<std::size_t>(d + 1)));
    }
    if (options.inhomogeneous) {
        fit.inhomogeneous = to_poly(v, static_cast<std::size_t>((k + 1) * (d + 1)), static_cast<std::size_t>(d + 1));
    }
    fit.terms = terms.size();
    fit.confirmation = (n - k + 1) - (unknowns_of(k, d) - 1);
    return fit;
}

bool verify_fit(const RationalFit& fit, const SeriesTerms& terms) {
    const auto& a = terms.coefficients;
    if (fit.denominator.empty()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mpq_class s = i < fit.numerator.size() ? mpq_class(-fit.numerator[i]) : mpq_class(0);
        for (std::size_t j = 0; j <= i && j < fit.denominator.size(); ++j) s += fit.denominator[j] * a[i - j];
        if (sgn(s) != 0) return false;
    }
    return true;
}

bool verify_fit(const AlgebraicFit& fit, const SeriesTerms& terms) {
    const auto& a = terms.coefficients;
    const int length = terms.size();
    if (std::all_of(fit.coefficients.begin(), fit.coefficients.end(), [](const auto& p) { return poly::degree(p) < 0; }))
        return false;
    std::vector<mpq_class> power(static_cast<std::size_t>(length), mpq_class(0));
    if (length > 0) power[0] = 1;
    std::vector<mpq_class> total(static_cast<std::size_t>(length), mpq_class(0));
    for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
        if (i > 0) power = series::multiply(power, a, length);
        const auto term = series::multiply(fit.coefficients[i], power, length);
        for (int s = 0; s < length; ++s) total[static_cast<std::size_t>(s)] += term[static_cast<std::size_t>(s)];
    }
    return std::all_of(total.begin(), total.end(), [](const mpq_class& x) { return sgn(x) == 0; });
}

bool verify_fit(const DFiniteFit& fit, const SeriesTerms& terms) {
    const int n = terms.order();
    const int k = static_cast<int>(fit.coefficients.size()) - 1;
    if (k < 0 || n - k < 0) return false;
    const bool trivial =
        std::all_of(fit.coefficients.begin(), fit.coefficients.end(), [](const auto& p) { return poly::degree(p) < 0; }) &&
        poly::degree(fit.inhomogeneous) < 0;
    if (trivial) return false;
    const int length = n - k + 1;
    std::vector<mpq_class> total(static_cast<std::size_t>(length), mpq_class(0));
    std::vector<mpq_class> deriv = terms.coefficients;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) deriv = series::derivative(deriv);
        const auto term = series::multiply(fit.coefficients[static_cast<std::size_t>(j)], deriv, length);
        for (int s = 0; s < length; ++s) total[static_cast<std::size_t>(s)] += term[static_cast<std::size_t>(s)];
    }
    for (std::size_t t = 0; t < fit.inhomogeneous.size() && t < total.size(); ++t) total[t] += fit.inhomogeneous[t];
    return std::all_of(total.begin(), total.end(), [](const mpq_class& x) { return sgn(x) == 0; });
}

std::string canonical_string(const RationalFit& fit) {
    return "numerator=" + poly::to_string(fit.numerator) + "; denominator=" + poly::to_string(fit.denominator);
}

std::string to_text(const RationalFit& fit) {
    std::ostringstream out;
    out << "family rational\nstatus fit\ndegree " << fit.degree << "\nterms " << fit.terms << "\nconfirmation "
        << fit.confirmation << "\nnumerator " << poly_fields(fit.numerator) << "\ndenominator "
        << poly_fields(fit.denominator) << '\n';
    return out.str();
}

std::string to_text(const AlgebraicFit& fit) {
    std::ostringstream out;
    out << "family algebraic\nstatus fit\nm " << fit.m << "\ndegree " << fit.d << "\nterms " << fit.terms
        << "\nconfirmation " << fit.confirmation << '\n';
    for (std::size_t i = 0; i < fit.coefficients.size(); ++i) out << 'p' << i << ' ' << poly_fields(fit.coefficients[i]) << '\n';
    return out.str();
}

std::string to_text(const DFiniteFit& fit) {
    std::ostringstream out;
    out << "family dfinite\nstatus fit\nk " << fit.k << "\ndegree " << fit.d << "\nterms " << fit.terms
        << "\nconfirmation " << fit.confirmation << '\n';
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) out << 'p' << j << ' ' << poly_fields(fit.coefficients[j]) << '\n';
    out << "q " << poly_fields(fit.inhomogeneous) << '\n';
    return out.str();
}

std::string to_text(const NegativeCertificate& cert) {
    std::ostringstream out;
    out << "family " << family_name(cert.family) << "\nstatus negative\nterms " << cert.terms << "\nmargin "
        << cert.margin << "\nmax_unknowns " << cert.max_unknowns << "\nprime " << cert.prime << "\nboundary";
    for (const auto& [a, d] : cert.boundary) {
        if (cert.family == FitFamily::rational) {
            out << " d=" << d;
        } else {
            out << ' ' << (cert.family == FitFamily::algebraic ? "m=" : "k=") << a << ",d=" << d;
        }
    }
    out << '\n';
    return out.str();
}

Polynomial conjectured_runs_denominator(int k) {
    std::vector<std::pair<long, int>> factors;
    for (int i = 1; i <= k; ++i) factors.emplace_back(i, k - i + 1);
    return poly::from_linear_factors(factors);
}

std::vector<RunsFamilyEntry> fit_runs_family(const CountMatrix<BigIntRing>& counts, int k_lo, int k_hi, int d_max,
                                             const FitOptions& options) {
    if (k_lo < 1 || k_hi > counts.max_k || k_lo > k_hi) {
        throw PreconditionError("k range must lie within 1.." + std::to_string(counts.max_k));
    }
    std::vector<RunsFamilyEntry> out;
    for (int k = k_lo; k <= k_hi; ++k) {
        RunsFamilyEntry entry;
        entry.k = k;
        const auto& row = counts.rows[static_cast<std::size_t>(k - 1)];
        const SeriesTerms terms = series_from_counts(row, 0);
        try {
            auto result = fit_rational(terms, d_max, options);
            if (auto* fit = std::get_if<RationalFit>(&result)) {
                Polynomial expected = conjectured_runs_denominator(k);
                entry.denominator_matches_conjecture = fit->denominator == expected;
                entry.numerator_degree_matches_conjecture = poly::degree(fit->numerator) == k * (k + 1) / 2;
                entry.fit = std::move(*fit);
            } else {
                entry.certificate = std::get<NegativeCertificate>(result);
            }
        } catch (const PreconditionError& e) {
            entry.error = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace popstack
