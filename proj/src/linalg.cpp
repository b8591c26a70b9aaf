#include "popstack/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "popstack/errors.hpp"

namespace popstack::linalg {

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e > 0) {
        if (e & 1U) r = r * b % p;
        b = b * b % p;
        e >>= 1U;
    }
    return r;
}

}  // namespace

ModEchelon modular_echelon(ModMatrix m, std::uint64_t p) {
    ModEchelon out;
    std::vector<int> row_id(static_cast<std::size_t>(m.rows));
    std::iota(row_id.begin(), row_id.end(), 0);
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pivot = -1;
        for (int i = r; i < m.rows; ++i) {
            if (m(i, c) != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != r) {
            std::swap_ranges(&m(pivot, 0), &m(pivot, 0) + m.cols, &m(r, 0));
            std::swap(row_id[static_cast<std::size_t>(pivot)], row_id[static_cast<std::size_t>(r)]);
        }
        const std::uint64_t inv = pow_mod(m(r, c), p - 2, p);
        for (int j = c; j < m.cols; ++j) m(r, j) = m(r, j) * inv % p;
        const std::uint64_t* prow = &m(r, 0);
        for (int i = r + 1; i < m.rows; ++i) {
            const std::uint64_t factor = m(i, c);
            if (factor == 0) continue;
            const std::uint64_t neg = p - factor;
            std::uint64_t* irow = &m(i, 0);
            for (int j = c; j < m.cols; ++j) irow[j] = (irow[j] + neg * prow[j]) % p;
        }
        out.pivot_rows.push_back(row_id[static_cast<std::size_t>(r)]);
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.rank = r;
    return out;
}

std::uint64_t reduce_mod(const mpq_class& x, std::uint64_t p) {
    const unsigned long den = mpz_fdiv_ui(x.get_den_mpz_t(), p);
    if (den == 0) {
        throw PreconditionError("modulus " + std::to_string(p) + " divides a term denominator; pick another prime");
    }
    const unsigned long num = mpz_fdiv_ui(x.get_num_mpz_t(), p);
    return num * pow_mod(den, p - 2, p) % p;
}

IntegerRow clear_denominators(const std::vector<mpq_class>& row) {
    mpz_class l = 1;
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntegerRow out;
    out.reserve(row.size());
    for (const auto& x : row) {
        mpz_class v = l / x.get_den();
        v *= x.get_num();
        out.push_back(std::move(v));
    }
    return out;
}

void make_primitive(IntegerRow& v) {
    mpz_class g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return;
    int sign = 0;
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
        if (sgn(*it) != 0) {
            sign = sgn(*it);
            break;
        }
    }
    if (sign < 0) g = -g;
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

ExactNullspace integer_nullspace(std::vector<IntegerRow> m, int cols) {
    const int rows = static_cast<int>(m.size());
    for (const auto& row : m) {
        if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("ragged matrix");
    }
    // Fraction-free forward elimination. After step r every entry of the
    // remaining rows is an (r+1)-minor, so the division is exact.
    std::vector<int> pivot_cols;
    mpz_class previous = 1;
    mpz_class t;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pivot = -1;
        std::size_t best = 0;
        for (int i = r; i < rows; ++i) {
            if (sgn(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) == 0) continue;
            const std::size_t bits =
                mpz_sizeinbase(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get_mpz_t(), 2);
            if (pivot < 0 || bits < best) {
                pivot = i;
                best = bits;
            }
        }
        if (pivot < 0) continue;
        std::swap(m[static_cast<std::size_t>(pivot)], m[static_cast<std::size_t>(r)]);
        const IntegerRow& prow = m[static_cast<std::size_t>(r)];
        const mpz_class& piv = prow[static_cast<std::size_t>(c)];
        for (int i = r + 1; i < rows; ++i) {
            IntegerRow& row = m[static_cast<std::size_t>(i)];
            const mpz_class factor = row[static_cast<std::size_t>(c)];
            for (int j = c + 1; j < cols; ++j) {
                auto& x = row[static_cast<std::size_t>(j)];
                mpz_mul(x.get_mpz_t(), x.get_mpz_t(), piv.get_mpz_t());
                mpz_mul(t.get_mpz_t(), factor.get_mpz_t(), prow[static_cast<std::size_t>(j)].get_mpz_t());
                x -= t;
                mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), previous.get_mpz_t());
            }
            row[static_cast<std::size_t>(c)] = 0;
        }
        previous = piv;
        pivot_cols.push_back(c);
        ++r;
    }

    ExactNullspace out;
    out.rank = r;
    std::vector<char> is_pivot(static_cast<std::size_t>(cols), 0);
    for (int c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = 1;
    // Back substitution scaled by the last pivot D keeps every entry integral
    // (Cramer's rule on the pivot minor).
    const mpz_class det = r > 0 ? m[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(pivot_cols.back())]
                                : mpz_class(1);
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        IntegerRow x(static_cast<std::size_t>(cols), mpz_class(0));
        x[static_cast<std::size_t>(f)] = det;
        for (int i = r - 1; i >= 0; --i) {
            const IntegerRow& row = m[static_cast<std::size_t>(i)];
            mpz_class s = 0;
            mpz_submul(s.get_mpz_t(), det.get_mpz_t(), row[static_cast<std::size_t>(f)].get_mpz_t());
            for (int k = i + 1; k < r; ++k) {
                const int pc = pivot_cols[static_cast<std::size_t>(k)];
                mpz_submul(s.get_mpz_t(), row[static_cast<std::size_t>(pc)].get_mpz_t(),
                           x[static_cast<std::size_t>(pc)].get_mpz_t());
            }
            const int pc = pivot_cols[static_cast<std::size_t>(i)];
            if (!mpz_divisible_p(s.get_mpz_t(), row[static_cast<std::size_t>(pc)].get_mpz_t())) {
                throw std::logic_error("fraction-free back substitution lost integrality");
            }
            mpz_divexact(x[static_cast<std::size_t>(pc)].get_mpz_t(), s.get_mpz_t(),
                         row[static_cast<std::size_t>(pc)].get_mpz_t());
        }
        make_primitive(x);
        out.basis.push_back(std::move(x));
    }
    return out;
}

}  // namespace popstack::linalg
