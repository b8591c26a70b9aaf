#pragma once

// Counting overlapping ballots (equivalently pop-stacked permutations) with a
// cubic-memory dynamic program over the prefix sums
//
//   g_{c,d}(n) = sum_{a <= c} sum_{b <= d} f_{a,b}(n),
//
// where f_{a,b}(n) counts overlapping ballots of [n] whose last block has
// minimum a and maximum b. Everything is templated on the coefficient ring so
// the same code runs over exact integers and over prime fields.

#include <algorithm>
#include <functional>
#include <new>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "popstack/errors.hpp"
#include "popstack/ring.hpp"

namespace popstack {

/// Binomial coefficients C(n, k), 0 <= k <= n <= N, built with Pascal's rule
/// in ring arithmetic.
template <Ring R>
class BinomialTable {
public:
    using value_type = typename R::value_type;

    BinomialTable(int max_n, const R& ring) : max_n_(max_n) {
        if (max_n < 0) throw PreconditionError("binomial table size must be nonnegative");
        entries_.reserve(static_cast<std::size_t>(max_n + 1) * static_cast<std::size_t>(max_n + 2) / 2);
        for (int n = 0; n <= max_n; ++n) {
            for (int k = 0; k <= n; ++k) {
                if (k == 0 || k == n) {
                    entries_.push_back(ring.one());
                } else {
                    entries_.push_back(ring.add((*this)(n - 1, k - 1), (*this)(n - 1, k)));
                }
            }
        }
    }

    [[nodiscard]] int max_n() const { return max_n_; }

    /// Requires 0 <= k <= n <= max_n().
    [[nodiscard]] const value_type& operator()(int n, int k) const {
        return entries_[static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2 +
                        static_cast<std::size_t>(k)];
    }

private:
    int max_n_;
    std::vector<value_type> entries_;
};

/// The prefix-sum tensor g[n][c][d]. Level n is one contiguous n x n slab,
/// row-major in (c, d). Reads with c = 0 or d = 0 give zero; reads with c or
/// d above n are clamped to n, since f_{a,b}(n) vanishes for a, b > n.
template <Ring R>
class PrefixTable {
public:
    using value_type = typename R::value_type;

    PrefixTable() = default;

    PrefixTable(int max_n, const R& ring) : max_n_(max_n), zero_(ring.zero()) {
        offsets_.resize(static_cast<std::size_t>(max_n) + 2, 0);
        for (int n = 1; n <= max_n; ++n) {
            offsets_[static_cast<std::size_t>(n) + 1] =
                offsets_[static_cast<std::size_t>(n)] + static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
        }
        try {
            cells_.assign(offsets_.back(), zero_);
        } catch (const std::bad_alloc&) {
            throw ResourceError("cannot allocate prefix table of " + std::to_string(offsets_.back()) +
                                    " cells",
                                max_n);
        } catch (const std::length_error&) {
            throw ResourceError("prefix table too large", max_n);
        }
    }

    [[nodiscard]] int max_n() const { return max_n_; }

    [[nodiscard]] const value_type& g(int n, int c, int d) const {
        if (c <= 0 || d <= 0 || n <= 0) return zero_;
        c = std::min(c, n);
        d = std::min(d, n);
        return cells_[index(n, c, d)];
    }

    /// Row c of level n as a span over d = 1..n.
    [[nodiscard]] std::span<const value_type> row(int n, int c) const {
        return {cells_.data() + index(n, c, 1), static_cast<std::size_t>(n)};
    }

    value_type& cell(int n, int c, int d) { return cells_[index(n, c, d)]; }

    [[nodiscard]] std::size_t cell_count() const { return cells_.size(); }
    [[nodiscard]] std::size_t memory_bytes() const { return cells_.capacity() * sizeof(value_type); }

private:
    [[nodiscard]] std::size_t index(int n, int c, int d) const {
        return offsets_[static_cast<std::size_t>(n)] +
               static_cast<std::size_t>(c - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(d - 1);
    }

    int max_n_ = 0;
    value_type zero_{};
    std::vector<std::size_t> offsets_;
    std::vector<value_type> cells_;
};

namespace detail {

// Fills level n of `dst` from levels < n of `src`. For total counts src and
// dst are the same table; for counts by blocks src holds the (k-1)-block
// slice. `with_single_block` adds the one-block ballot [n] itself.
template <Ring R>
void compute_level(int n, const R& ring, const BinomialTable<R>& binom, const PrefixTable<R>& src,
                   PrefixTable<R>& dst, bool with_single_block) {
    using value_type = typename R::value_type;
    using accumulator = typename R::accumulator;
    const auto stride = static_cast<std::size_t>(n) + 1;

    // acc[d * stride + c] gathers the two-or-more-block case for c < d:
    //   sum_l C(d-c-1, l) * (g_{d-2-l, n-2-l}(m) - g_{d-2-l, c-1}(m)),  m = n-2-l.
    // Levels m = 0 hold no ballots, so l stops at n-3.
    std::vector<accumulator> acc(stride * stride, ring.zero_accumulator());
    std::vector<value_type> binom_column(stride, ring.zero());
    const value_type zero = ring.zero();
    for (int l = 0; l + 3 <= n; ++l) {
        const int m = n - 2 - l;
        for (int t = l; t <= n; ++t) binom_column[static_cast<std::size_t>(t)] = binom(t, l);
        for (int d = l + 3; d <= n; ++d) {
            const int u = d - 2 - l;  // 1 <= u <= m
            const auto g_row = src.row(m, u);
            const value_type& full = g_row[static_cast<std::size_t>(m - 1)];
            accumulator* out = acc.data() + static_cast<std::size_t>(d) * stride;
            const int c_max = d - 1 - l;
            ring.accumulate_scaled_difference(out[1], binom_column[static_cast<std::size_t>(d - 2)], full, zero);
            for (int c = 2; c <= c_max; ++c) {
                ring.accumulate_scaled_difference(out[c], binom_column[static_cast<std::size_t>(d - c - 1)], full,
                                                  g_row[static_cast<std::size_t>(c - 2)]);
            }
        }
    }

    for (int c = 1; c <= n; ++c) {
        for (int d = 1; d <= n; ++d) {
            value_type f = ring.zero();
            if (c == d) {
                if (n == 1 && with_single_block) f = ring.one();
                // Last block {c}; the previous block straddles c.
                if (c >= 2) f = ring.add(f, ring.sub(src.g(n - 1, c - 1, n), src.g(n - 1, c - 1, c - 1)));
            } else if (c < d) {
                f = ring.reduce(acc[static_cast<std::size_t>(d) * stride + static_cast<std::size_t>(c)]);
                if (c == 1 && d == n && with_single_block) f = ring.add(f, ring.one());
            }
            value_type g = ring.add(f, ring.sub(dst.g(n, c - 1, d), dst.g(n, c - 1, d - 1)));
            dst.cell(n, c, d) = ring.add(g, dst.g(n, c, d - 1));
        }
    }
}

}  // namespace detail

/// Builds the full prefix table for levels 1..N.
template <Ring R>
PrefixTable<R> build_prefix_table(int max_n, const R& ring) {
    if (max_n < 0) throw PreconditionError("N must be nonnegative");
    const BinomialTable<R> binom(max_n, ring);
    PrefixTable<R> table(max_n, ring);
    for (int n = 1; n <= max_n; ++n) detail::compute_level(n, ring, binom, table, table, true);
    return table;
}

/// f(1..N) via the prefix-sum recurrence; element n-1 holds f(n).
/// O(N^4) ring operations, O(N^3) ring elements of memory.
template <Ring R>
std::vector<typename R::value_type> count_sequence(int max_n, const R& ring) {
    const PrefixTable<R> table = build_prefix_table(max_n, ring);
    std::vector<typename R::value_type> out;
    out.reserve(static_cast<std::size_t>(std::max(max_n, 0)));
    for (int n = 1; n <= max_n; ++n) out.push_back(table.g(n, n, n));
    return out;
}

/// f(n, k) for 1 <= n <= N, 1 <= k <= Kmax.
template <Ring R>
struct CountMatrix {
    using value_type = typename R::value_type;

    int max_n = 0;
    int max_k = 0;
    std::vector<std::vector<value_type>> rows;  // rows[k-1][n-1] = f(n, k)

    [[nodiscard]] const value_type& at(int n, int k) const {
        return rows[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(n - 1)];
    }
};

/// Receives the finished k-row f(1..N, k); return false to stop early.
template <Ring R>
using RunsRowSink = std::function<bool(int k, std::span<const typename R::value_type> row)>;

/// Counts by number of blocks. Slices are produced for k = 1, 2, ... in
/// order, each handed to `sink` as soon as it is complete; only the
/// (k-1)- and k-slices of the prefix tensor are alive at any time.
template <Ring R>
void count_by_runs(int max_n, int max_k, const R& ring, const RunsRowSink<R>& sink) {
    if (max_n < 1) throw PreconditionError("count_by_runs needs N >= 1");
    if (max_k < 1 || max_k > max_n) throw PreconditionError("count_by_runs needs 1 <= Kmax <= N");
    const BinomialTable<R> binom(max_n, ring);
    PrefixTable<R> previous(max_n, ring);  // slice k-1; slice 0 is all zero
    PrefixTable<R> current(max_n, ring);
    std::vector<typename R::value_type> row(static_cast<std::size_t>(max_n));
    for (int k = 1; k <= max_k; ++k) {
        for (int n = 1; n <= max_n; ++n) {
            if (n < k) {
                // Fewer elements than blocks: the level stays zero.
                for (int c = 1; c <= n; ++c)
                    for (int d = 1; d <= n; ++d) current.cell(n, c, d) = ring.zero();
            } else {
                detail::compute_level(n, ring, binom, previous, current, k == 1);
            }
            row[static_cast<std::size_t>(n - 1)] = current.g(n, n, n);
        }
        if (!sink(k, row)) return;
        std::swap(previous, current);
    }
}

template <Ring R>
CountMatrix<R> count_by_runs(int max_n, int max_k, const R& ring) {
    CountMatrix<R> m;
    m.max_n = max_n;
    m.max_k = max_k;
    count_by_runs<R>(max_n, max_k, ring, [&](int, std::span<const typename R::value_type> row) {
        m.rows.emplace_back(row.begin(), row.end());
        return true;
    });
    return m;
}

// ---------------------------------------------------------------------------
// Reference path: the three-case recurrence written out literally, with the
// double sums evaluated term by term. Quintic-ish in N; only for checking.

/// Largest N accepted by the reference recurrence.
inline constexpr int kSlowReferenceMaxN = 60;

/// Upper limit of b in the c = d case. Both limits give the same counts
/// because f_{a,n}(n-1) is zero; the option exists so that claim is tested.
enum class SingletonUpperLimit { n, n_minus_1 };

/// f_{c,d}(n) for all 1 <= c, d <= n <= N.
template <Ring R>
class FTable {
public:
    using value_type = typename R::value_type;

    FTable(int max_n, const R& ring) : max_n_(max_n), zero_(ring.zero()) {
        levels_.resize(static_cast<std::size_t>(max_n) + 1);
        for (int n = 1; n <= max_n; ++n) {
            levels_[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                                                        zero_);
        }
    }

    [[nodiscard]] int max_n() const { return max_n_; }

    /// Zero outside 1 <= c, d <= n.
    [[nodiscard]] const value_type& f(int n, int c, int d) const {
        if (n < 1 || c < 1 || d < 1 || c > n || d > n) return zero_;
        return levels_[static_cast<std::size_t>(n)][static_cast<std::size_t>((c - 1) * n + (d - 1))];
    }
    value_type& cell(int n, int c, int d) {
        return levels_[static_cast<std::size_t>(n)][static_cast<std::size_t>((c - 1) * n + (d - 1))];
    }

private:
    int max_n_;
    value_type zero_;
    std::vector<std::vector<value_type>> levels_;
};

template <Ring R>
FTable<R> slow_f_table(int max_n, const R& ring,
                       SingletonUpperLimit limit = SingletonUpperLimit::n) {
    if (max_n < 0 || max_n > kSlowReferenceMaxN) {
        throw PreconditionError("reference recurrence limited to N <= " + std::to_string(kSlowReferenceMaxN));
    }
    const BinomialTable<R> binom(max_n, ring);
    FTable<R> table(max_n, ring);
    for (int n = 1; n <= max_n; ++n) {
        for (int c = 1; c <= n; ++c) {
            for (int d = c; d <= n; ++d) {
                auto f = ring.zero();
                if (c == 1 && d == n) f = ring.one();
                if (c == d) {
                    const int b_max = limit == SingletonUpperLimit::n ? n : n - 1;
                    for (int a = 1; a <= c - 1; ++a)
                        for (int b = c; b <= b_max; ++b) f = ring.add(f, table.f(n - 1, a, b));
                } else {
                    for (int l = 0; l <= d - c - 1; ++l) {
                        auto inner = ring.zero();
                        const int m = n - l - 2;
                        for (int a = 1; a <= d - l - 2; ++a)
                            for (int b = c; b <= m; ++b) inner = ring.add(inner, table.f(m, a, b));
                        f = ring.add(f, ring.mul(binom(d - c - 1, l), inner));
                    }
                }
                table.cell(n, c, d) = f;
            }
        }
    }
    return table;
}

/// f(1..N) by the literal recurrence; element n-1 holds f(n).
template <Ring R>
std::vector<typename R::value_type> count_slow_reference(int max_n, const R& ring) {
    const FTable<R> table = slow_f_table(max_n, ring);
    std::vector<typename R::value_type> out;
    for (int n = 1; n <= max_n; ++n) {
        auto total = ring.zero();
        for (int a = 1; a <= n; ++a)
            for (int b = a; b <= n; ++b) total = ring.add(total, table.f(n, a, b));
        out.push_back(total);
    }
    return out;
}

}  // namespace popstack
