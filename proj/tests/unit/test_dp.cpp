#include <doctest.h>

#include <map>

#include "popstack/dp.hpp"
#include "popstack/errors.hpp"
#include "popstack/permutation.hpp"
#include "popstack/series.hpp"

using namespace popstack;

namespace {

// Independent oracle: enumerate ordered set partitions of [n] as surjections
// onto block labels and test adjacent blocks for interval overlap.
std::map<int, long> overlapping_ballots_by_blocks(int n) {
    std::map<int, long> out;
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    const auto visit = [&](int k) {
        std::vector<int> lo(static_cast<std::size_t>(k), n + 1);
        std::vector<int> hi(static_cast<std::size_t>(k), 0);
        for (int e = 1; e <= n; ++e) {
            const auto b = static_cast<std::size_t>(label[static_cast<std::size_t>(e - 1)]);
            lo[b] = std::min(lo[b], e);
            hi[b] = std::max(hi[b], e);
        }
        for (int b = 0; b < k; ++b)
            if (hi[static_cast<std::size_t>(b)] == 0) return;
        for (int b = 0; b + 1 < k; ++b) {
            const auto i = static_cast<std::size_t>(b);
            if (!(hi[i] > lo[i + 1] && lo[i] < hi[i + 1])) return;
        }
        ++out[k];
    };
    for (int k = 1; k <= n; ++k) {
        std::fill(label.begin(), label.end(), 0);
        while (true) {
            visit(k);
            int i = 0;
            while (i < n && ++label[static_cast<std::size_t>(i)] == k) label[static_cast<std::size_t>(i++)] = 0;
            if (i == n) break;
        }
    }
    return out;
}

const PrimeField kFields[] = {PrimeField(2147483647U), PrimeField(1000000007U), PrimeField(65521U)};

}  // namespace

TEST_SUITE("dp-engine") {

TEST_CASE("totals agree with brute force for n <= 10") {
    const auto f = count_sequence(10, BigIntRing{});
    REQUIRE(f.size() == 10);
    for (int n = 1; n <= 10; ++n) CHECK(f[static_cast<std::size_t>(n - 1)] == brute_count(n).total);
    CHECK(f[9] == 862047);
}

TEST_CASE("counts by runs agree with brute force for n <= 9") {
    const auto m = count_by_runs(9, 9, BigIntRing{});
    for (int n = 1; n <= 9; ++n) {
        const auto report = brute_count(n);
        for (int k = 1; k <= 9; ++k) {
            const auto it = report.by_runs.find(k);
            const std::uint64_t expected = it == report.by_runs.end() ? 0 : it->second;
            CHECK(m.at(n, k) == expected);
        }
    }
}

TEST_CASE("counts by runs agree with ballot enumeration for n <= 7") {
    const auto m = count_by_runs(7, 7, BigIntRing{});
    for (int n = 1; n <= 7; ++n) {
        const auto oracle = overlapping_ballots_by_blocks(n);
        for (int k = 1; k <= 7; ++k) {
            const auto it = oracle.find(k);
            CHECK(m.at(n, k) == (it == oracle.end() ? 0 : it->second));
        }
    }
}

TEST_CASE("slow and fast recurrences agree for N <= 40") {
    const auto fast = count_sequence(40, BigIntRing{});
    const auto slow = count_slow_reference(40, BigIntRing{});
    CHECK(fast == slow);
    for (const auto& field : kFields) {
        CHECK(count_sequence(40, field) == count_slow_reference(40, field));
    }
}

TEST_CASE("both upper limits of the singleton case give the same table") {
    const auto a = slow_f_table(25, BigIntRing{}, SingletonUpperLimit::n);
    const auto b = slow_f_table(25, BigIntRing{}, SingletonUpperLimit::n_minus_1);
    for (int n = 1; n <= 25; ++n)
        for (int c = 1; c <= n; ++c)
            for (int d = 1; d <= n; ++d) CHECK(a.f(n, c, d) == b.f(n, c, d));
    // The term that differs, f_{a,n}(n-1), lies outside the table's support.
    CHECK(a.f(24, 3, 25) == 0);
}

TEST_CASE("prime-field results are the integer results reduced") {
    const auto exact = count_sequence(50, BigIntRing{});
    for (const auto& field : kFields) {
        const auto mod = count_sequence(50, field);
        for (std::size_t i = 0; i < exact.size(); ++i) CHECK(mod[i] == field.from_integer(exact[i]));
    }
}

TEST_CASE("row sums of the runs matrix equal the totals") {
    const auto m = count_by_runs(30, 30, BigIntRing{});
    const auto f = count_sequence(30, BigIntRing{});
    for (int n = 1; n <= 30; ++n) {
        mpz_class s = 0;
        for (int k = 1; k <= 30; ++k) s += m.at(n, k);
        CHECK(s == f[static_cast<std::size_t>(n - 1)]);
    }
}

TEST_CASE("columns k = 1 and k = 2 match their closed forms") {
    const auto m = count_by_runs(30, 2, BigIntRing{});
    for (int n = 1; n <= 30; ++n) CHECK(m.at(n, 1) == 1);
    // F_2 = 2x^3 / ((1 - 2x)(1 - x)^2)
    const std::pair<long, int> factors[] = {{2, 1}, {1, 2}};
    const auto series = series::expand_rational({0, 0, 0, 2}, poly::from_linear_factors(factors), 31);
    for (int n = 1; n <= 30; ++n) CHECK(mpq_class(m.at(n, 2)) == series[static_cast<std::size_t>(n)]);
}

TEST_CASE("entries vanish when k > n") {
    const auto m = count_by_runs(12, 12, BigIntRing{});
    for (int n = 1; n <= 12; ++n)
        for (int k = n + 1; k <= 12; ++k) CHECK(m.at(n, k) == 0);
}

TEST_CASE("the row sink can stop early") {
    std::vector<int> seen;
    count_by_runs<BigIntRing>(10, 10, BigIntRing{}, [&](int k, std::span<const mpz_class>) {
        seen.push_back(k);
        return k < 3;
    });
    CHECK(seen == std::vector<int>{1, 2, 3});
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(count_by_runs(5, 6, BigIntRing{}), PreconditionError);
    CHECK_THROWS_AS(count_by_runs(5, 0, BigIntRing{}), PreconditionError);
    CHECK_THROWS_AS(count_slow_reference(kSlowReferenceMaxN + 1, BigIntRing{}), PreconditionError);
    CHECK(count_sequence(1, BigIntRing{}) == std::vector<mpz_class>{1});
}

}
