#include <doctest.h>

#include "popstack/asymptotics.hpp"
#include "popstack/errors.hpp"

using namespace popstack;
using asym::Real;

namespace {

// Coefficients of (1 - lambda x)^gamma: c_{n+1} = c_n lambda (n - gamma) / (n + 1).
SeriesTerms power_series(const mpq_class& lambda, const mpq_class& gamma, int length) {
    SeriesTerms s;
    s.coefficients.emplace_back(1);
    for (int n = 0; n + 1 < length; ++n) {
        s.coefficients.push_back(s.coefficients.back() * lambda * (n - gamma) / (n + 1));
    }
    return s;
}

const asym::SingularityEstimate* nearest(const std::vector<asym::SingularityEstimate>& roots, double x) {
    const asym::SingularityEstimate* best = nullptr;
    double dist = 1e300;
    for (const auto& r : roots) {
        const double d = std::hypot(static_cast<double>(r.location.re) - x, static_cast<double>(r.location.im));
        if (d < dist) {
            dist = d;
            best = &r;
        }
    }
    return best;
}

}  // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("simple pole of 1/(1 - 3x)") {
    const asym::PrecisionScope scope(128);
    const auto s = power_series(3, -1, 12);
    const auto ode = asym::differential_approximant(s, {1, 1, false, 128});
    const auto roots = asym::singularities(ode, 128);
    REQUIRE(roots.size() == 1);
    CHECK(asym::agreed_digits(roots[0].location.re, Real(1) / 3) >= 30);
    CHECK(abs(roots[0].location.im) < 1e-30);
    REQUIRE(roots[0].exponent_defined);
    CHECK(abs(roots[0].exponent + 1) < 1e-30);
}

TEST_CASE("square-root singularity of (1 - 4x)^(1/2)") {
    const asym::PrecisionScope scope(128);
    const auto s = power_series(4, mpq_class(1, 2), 12);
    const auto ode = asym::differential_approximant(s, {1, 1, false, 128});
    // (1 - 4x) F' + 2 F = 0 up to scaling
    const auto& p1 = ode.coefficients[1];
    const auto& p0 = ode.coefficients[0];
    CHECK(abs(p1[1] / p1[0] + 4) < 1e-30);
    CHECK(abs(p0[0] / p1[0] - 2) < 1e-30);
    const auto roots = asym::singularities(ode, 128);
    REQUIRE(roots.size() == 1);
    CHECK(abs(roots[0].location.re - Real(0.25)) < 1e-30);
    CHECK(abs(roots[0].exponent - Real(0.5)) < 1e-30);
}

TEST_CASE("constructed exponents within 1e-6") {
    const mpq_class gammas[] = {-2, -1, mpq_class(-1, 2), mpq_class(1, 2)};
    const mpq_class lambdas[] = {1, mpq_class(1, 3)};
    for (const auto& gamma : gammas) {
        for (const auto& lambda : lambdas) {
            const double x0 = 1.0 / lambda.get_d();
            for (const asym::ApproximantConfig config :
                 {asym::ApproximantConfig{1, 1, false, 192}, asym::ApproximantConfig{2, 3, false, 192},
                  asym::ApproximantConfig{2, 3, true, 192}}) {
                CAPTURE(gamma.get_str());
                CAPTURE(lambda.get_str());
                CAPTURE(config.label());
                const auto s = power_series(lambda, gamma, config.terms_needed() + 5);
                const auto ode = asym::differential_approximant(s, config);
                const auto roots = asym::singularities(ode, 192);
                const auto* r = nearest(roots, x0);
                REQUIRE(r != nullptr);
                CHECK(std::abs(static_cast<double>(r->location.re) - x0) < 1e-20);
                REQUIRE(r->exponent_defined);
                CHECK(std::abs(static_cast<double>(r->exponent) - gamma.get_d()) < 1e-6);
            }
        }
    }
}

TEST_CASE("analyze finds both poles of a rational EGF and merges conjugates") {
    const asym::PrecisionScope scope(256);
    // 1 / ((1 - 2x/3)(1 - x/3)(1 + x^2/16)): poles 1.5, 3 and +-4i.
    const Polynomial q = poly::multiply(poly::multiply({1, mpq_class(-2, 3)}, {1, mpq_class(-1, 3)}),
                                        {1, 0, mpq_class(1, 16)});
    SeriesTerms s;
    s.coefficients = series::expand_rational({1}, q, 80);
    const auto grid = asym::default_grid(s.size(), 256);
    const auto report = asym::analyze(s, grid);
    CHECK(report.approximants_ok == static_cast<int>(grid.size()));
    const auto* dom = asym::dominant(report);
    REQUIRE(dom != nullptr);
    CHECK(abs(dom->estimate.location.re - Real(1.5)) < 1e-20);
    CHECK(abs(dom->estimate.exponent + 1) < 1e-10);
    CHECK(dom->estimate.agreed_digits >= 20);
    bool found_three = false;
    bool found_pair = false;
    for (const auto& c : report.clusters) {
        if (!c.confirmed) continue;
        if (!c.conjugate_pair && abs(c.estimate.location.re - 3) < 1e-10) found_three = true;
        if (c.conjugate_pair && abs(c.estimate.location.im - 4) < 1e-10 && abs(c.estimate.location.re) < 1e-10)
            found_pair = true;
    }
    CHECK(found_three);
    CHECK(found_pair);
    const auto text = asym::to_text(report, std::nullopt);
    CHECK(text.find("conjugate_pair yes") != std::string::npos);
}

TEST_CASE("default grid consumes all but the spare terms") {
    const auto grid = asym::default_grid(301, 256, 10);
    CHECK(grid.size() == 12);
    int maximal = 0;
    for (const auto& c : grid) {
        CHECK(c.terms_needed() <= 291);
        auto bigger = c;
        bigger.d += 1;
        if (bigger.terms_needed() > 291) ++maximal;
    }
    CHECK(maximal == 6);  // one maximal degree per (k, variant)
}

TEST_CASE("growth constants of n! 2^-n") {
    const asym::PrecisionScope scope(256);
    SeriesTerms s;
    mpq_class v = 1;
    for (int n = 0; n < 80; ++n) {
        if (n > 0) v = v * n / 2;
        s.coefficients.push_back(v);
    }
    const auto g = asym::growth_constants(s, Real(2), 70);
    CHECK(abs(g.C - 1) < 1e-60);
    CHECK(abs(g.mu_inv - Real(0.5)) < 1e-70);
    CHECK(!g.partial);
    SeriesTerms short_terms;
    short_terms.coefficients.assign(s.coefficients.begin(), s.coefficients.begin() + 20);
    CHECK(asym::growth_constants(short_terms, Real(2), 70).partial);
    CHECK_THROWS_AS(asym::growth_constants(s, Real(-1), 5), PreconditionError);
}

TEST_CASE("agreed digits and preconditions") {
    const asym::PrecisionScope scope(128);
    CHECK(asym::agreed_digits(Real("1.1134390417"), Real("1.1134390499")) == 8);
    CHECK(asym::agreed_digits(Real(2), Real(2)) >= 38);
    SeriesTerms s;
    s.coefficients.assign(5, mpq_class(1));
    CHECK_THROWS_AS(asym::differential_approximant(s, {2, 3, false, 128}), PreconditionError);
    CHECK_THROWS_AS(asym::analyze(s, {}), PreconditionError);
}

}
