#include <doctest.h>

#include "popstack/errors.hpp"
#include "popstack/series.hpp"

using namespace popstack;

namespace {

SeriesTerms from_longs(std::initializer_list<long> xs) {
    SeriesTerms s;
    for (long x : xs) s.coefficients.emplace_back(x);
    return s;
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("egf of n! is all ones") {
    SeriesTerms s;
    mpz_class f = 1;
    for (int n = 0; n < 12; ++n) {
        if (n > 0) f *= n;
        s.coefficients.emplace_back(f);
    }
    const auto e = transform_series(s, Transform::egf);
    for (const auto& c : e.coefficients) CHECK(c == 1);
}

TEST_CASE("reciprocal of 1/(1-x) is 1 - x") {
    const auto r = transform_series(from_longs({1, 1, 1, 1, 1}), Transform::reciprocal);
    CHECK(r.coefficients == std::vector<mpq_class>{1, -1, 0, 0, 0});
}

TEST_CASE("reversion of x/(1-x) is x/(1+x)") {
    const auto r = transform_series(from_longs({0, 1, 1, 1, 1, 1}), Transform::revert);
    CHECK(r.coefficients == std::vector<mpq_class>{0, 1, -1, 1, -1, 1});
}

TEST_CASE("transform preconditions name the remedy") {
    const auto s = from_longs({0, 1, 1});
    try {
        (void)transform_series(s, Transform::reciprocal);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("--a0") != std::string::npos);
    }
    CHECK_THROWS_AS(transform_series(from_longs({1, 1}), Transform::revert), PreconditionError);
    CHECK_THROWS_AS(parse_transform("laplace"), PreconditionError);
    CHECK(parse_transform("egf") == Transform::egf);
}

TEST_CASE("transform chains apply in order") {
    const Transform chain[] = {Transform::reciprocal, Transform::reciprocal};
    const auto s = from_longs({1, 2, 5, 14, 42});
    CHECK(transform_series(s, chain).coefficients == s.coefficients);
}

TEST_CASE("series_from_counts records the a0 convention") {
    const std::vector<mpz_class> counts{1, 1, 3};
    const auto s = series_from_counts(counts, 0);
    CHECK(s.size() == 4);
    CHECK(s.coefficients[0] == 0);
    CHECK(s.a0_convention.find("assumed") != std::string::npos);
}

TEST_CASE("polynomial helpers") {
    const std::pair<long, int> factors[] = {{2, 1}, {1, 2}};
    const auto q = poly::from_linear_factors(factors);
    CHECK(poly::to_string(q) == "[1, -4, 5, -2]");
    CHECK(poly::degree(q) == 3);
    CHECK(poly::degree(Polynomial{0, 0}) == -1);
    CHECK(poly::to_string(Polynomial{}) == "[0]");
    const auto s = series::expand_rational({1}, {1, -1, -1}, 8);
    CHECK(s == std::vector<mpq_class>{1, 1, 2, 3, 5, 8, 13, 21});
}

}
