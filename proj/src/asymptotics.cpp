#include "popstack/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "popstack/errors.hpp"

namespace popstack::asym {

namespace {

unsigned bits_to_digits10(int bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

Real from_rational(const mpq_class& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real pow2(long e) {
    Real r = 1;
    mpfr_mul_2si(r.backend().data(), r.backend().data(), e, MPFR_RNDN);
    return r;
}

// Minimal complex arithmetic over Real.
Complex c_add(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex c_sub(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex c_mul(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex c_div(const Complex& a, const Complex& b) {
    const Real den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
Real c_abs(const Complex& a) { return boost::multiprecision::hypot(a.re, a.im); }

// p(z) and p'(z) by Horner; coefficients ascending.
std::pair<Complex, Complex> eval_with_derivative(const std::vector<Real>& c, const Complex& z) {
    Complex p{0, 0};
    Complex dp{0, 0};
    for (std::size_t i = c.size(); i-- > 0;) {
        dp = c_add(c_mul(dp, z), p);
        p = c_add(c_mul(p, z), Complex{c[i], 0});
    }
    return {p, dp};
}

Complex eval(const std::vector<Real>& c, const Complex& z) { return eval_with_derivative(c, z).first; }

// Initial root guesses: eigenvalues of the companion matrix in double,
// after rescaling x = s y so the coefficients stay in double range.
std::vector<std::complex<double>> initial_roots(const std::vector<Real>& c) {
    const int m = static_cast<int>(c.size()) - 1;
    const Real scale = boost::multiprecision::pow(abs(c[0] / c[static_cast<std::size_t>(m)]), Real(1) / m);
    const bool usable_scale = isfinite(scale) && scale > 0;
    const Real s = usable_scale ? scale : Real(1);
    std::vector<double> monic(static_cast<std::size_t>(m));
    bool finite = true;
    Real sp = 1;
    for (int i = 0; i < m; ++i) {
        // coefficient of y^i in p(s y) / (c_m s^m)
        const Real v = c[static_cast<std::size_t>(i)] * sp / (c[static_cast<std::size_t>(m)] * pow(s, m));
        monic[static_cast<std::size_t>(i)] = static_cast<double>(v);
        finite = finite && std::isfinite(monic[static_cast<std::size_t>(i)]);
        sp *= s;
    }
    std::vector<std::complex<double>> roots;
    const double sd = static_cast<double>(s);
    if (finite) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
        for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < m; ++i) companion(i, m - 1) = -monic[static_cast<std::size_t>(i)];
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        if (solver.info() == Eigen::Success) {
            for (int i = 0; i < m; ++i) roots.push_back(solver.eigenvalues()[i] * sd);
        }
    }
    if (static_cast<int>(roots.size()) != m || !std::all_of(roots.begin(), roots.end(), [](auto z) {
            return std::isfinite(z.real()) && std::isfinite(z.imag());
        })) {
        roots.clear();
        for (int i = 0; i < m; ++i) roots.push_back(std::polar(sd, 2 * M_PI * (i + 0.25) / m));
    }
    // Aberth needs distinct starting points.
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-12 * (1 + std::abs(roots[i])))
                roots[i] *= std::polar(1.0 + 1e-8 * static_cast<double>(i), 1e-8);
    return roots;
}

// Simultaneous polishing of all roots (Aberth-Ehrlich).
std::vector<Complex> polish_roots(const std::vector<Real>& c, int bits) {
    const int m = static_cast<int>(c.size()) - 1;
    std::vector<Complex> z;
    for (const auto& r : initial_roots(c)) z.push_back({Real(r.real()), Real(r.imag())});
    const Real target = pow2(-(bits - 12));
    const Real acceptable = pow2(-bits / 3);
    // Roots whose last correction fell below target are frozen.
    std::vector<char> done(static_cast<std::size_t>(m), 0);
    std::vector<Real> last(static_cast<std::size_t>(m), Real(1));
    const int max_iterations = 200 + 4 * m;
    for (int it = 0; it < max_iterations; ++it) {
        bool all_done = true;
        for (int i = 0; i < m; ++i) {
            if (done[static_cast<std::size_t>(i)]) continue;
            const auto [p, dp] = eval_with_derivative(c, z[static_cast<std::size_t>(i)]);
            if (p.re == 0 && p.im == 0) {
                done[static_cast<std::size_t>(i)] = 1;
                last[static_cast<std::size_t>(i)] = 0;
                continue;
            }
            const Complex w = c_div(p, dp);
            Complex s{0, 0};
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                s = c_add(s, c_div(Complex{1, 0}, c_sub(z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(j)])));
            }
            const Complex step = c_div(w, c_sub(Complex{1, 0}, c_mul(w, s)));
            z[static_cast<std::size_t>(i)] = c_sub(z[static_cast<std::size_t>(i)], step);
            const Real size = std::max(c_abs(z[static_cast<std::size_t>(i)]), Real(1e-30));
            last[static_cast<std::size_t>(i)] = c_abs(step) / size;
            if (last[static_cast<std::size_t>(i)] < target) {
                done[static_cast<std::size_t>(i)] = 1;
            } else {
                all_done = false;
            }
        }
        if (all_done) return z;
    }
    const Real worst = *std::max_element(last.begin(), last.end());
    if (worst < acceptable) return z;
    throw ConvergenceError("root polishing stalled at relative correction " + format(worst, 3) +
                           "; raise the precision");
}

}  // namespace

PrecisionScope::PrecisionScope(int bits) : saved_(Real::default_precision()) {
    Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

std::string ApproximantConfig::label() const {
    return "k=" + std::to_string(k) + ",d=" + std::to_string(d) + (inhomogeneous ? ",inhom" : ",hom");
}

Approximant differential_approximant(const SeriesTerms& egf_terms, const ApproximantConfig& config) {
    if (config.k < 1 || config.d < 0) throw PreconditionError("approximant needs k >= 1 and d >= 0");
    if (config.precision_bits < 32) throw PreconditionError("precision must be at least 32 bits");
    if (config.terms_needed() > egf_terms.size()) {
        throw PreconditionError("approximant " + config.label() + " needs " + std::to_string(config.terms_needed()) +
                                " terms, have " + std::to_string(egf_terms.size()));
    }
    const PrecisionScope scope(config.precision_bits);
    const int k = config.k;
    const int d = config.d;
    const int cols = config.unknowns();
    const int rows = cols - 1;
    const int needed = config.terms_needed();

    // derivs[j][e] = [x^e] F^{(j)}
    std::vector<std::vector<Real>> derivs(static_cast<std::size_t>(k + 1));
    for (int e = 0; e < needed; ++e) derivs[0].push_back(from_rational(egf_terms.coefficients[static_cast<std::size_t>(e)]));
    for (int j = 1; j <= k; ++j) {
        const auto& prev = derivs[static_cast<std::size_t>(j - 1)];
        for (std::size_t e = 1; e < prev.size(); ++e) derivs[static_cast<std::size_t>(j)].push_back(prev[e] * static_cast<long>(e));
    }

    std::vector<Real> a(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), Real(0));
    auto at = [&](int i, int j) -> Real& { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; };
    for (int s = 0; s < rows; ++s) {
        for (int j = 0; j <= k; ++j)
            for (int t = 0; t <= d && t <= s; ++t) at(s, j * (d + 1) + t) = derivs[static_cast<std::size_t>(j)][static_cast<std::size_t>(s - t)];
        if (config.inhomogeneous && s <= d) at(s, (k + 1) * (d + 1) + s) = 1;
    }
    // Equilibrate rows.
    for (int i = 0; i < rows; ++i) {
        Real big = 0;
        for (int j = 0; j < cols; ++j) big = std::max(big, Real(abs(at(i, j))));
        if (big > 0)
            for (int j = 0; j < cols; ++j) at(i, j) /= big;
    }

    // Gaussian elimination with complete pivoting. Pivots below `tol` are
    // treated as zero: the system then has an exact multi-dimensional
    // kernel, typically because the input satisfies a smaller ODE.
    std::vector<int> perm(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) perm[static_cast<std::size_t>(j)] = j;
    const Real tol = pow2(-(7 * config.precision_bits) / 8);
    Real factor;
    Real tmp;
    Real smallest_pivot = 1;
    int rank = 0;
    for (int r = 0; r < rows; ++r) {
        int pi = -1;
        int pj = -1;
        mpfr_srcptr best = nullptr;
        for (int i = r; i < rows; ++i)
            for (int j = r; j < cols; ++j) {
                mpfr_srcptr v = at(i, j).backend().data();
                if (mpfr_zero_p(v)) continue;
                if (best == nullptr || mpfr_cmpabs(v, best) > 0) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0 || mpfr_cmpabs(best, tol.backend().data()) < 0) break;
        if (pi != r)
            for (int j = 0; j < cols; ++j) std::swap(at(pi, j), at(r, j));
        if (pj != r) {
            for (int i = 0; i < rows; ++i) std::swap(at(i, pj), at(i, r));
            std::swap(perm[static_cast<std::size_t>(pj)], perm[static_cast<std::size_t>(r)]);
        }
        mpfr_srcptr pivot = at(r, r).backend().data();
        smallest_pivot = std::min(smallest_pivot, Real(abs(at(r, r))));
        for (int i = r + 1; i < rows; ++i) {
            if (mpfr_zero_p(at(i, r).backend().data())) continue;
            mpfr_div(factor.backend().data(), at(i, r).backend().data(), pivot, MPFR_RNDN);
            for (int j = r + 1; j < cols; ++j) {
                mpfr_ptr x = at(i, j).backend().data();
                mpfr_mul(tmp.backend().data(), factor.backend().data(), at(r, j).backend().data(), MPFR_RNDN);
                mpfr_sub(x, x, tmp.backend().data(), MPFR_RNDN);
            }
            mpfr_set_zero(at(i, r).backend().data(), 1);
        }
        ++rank;
    }
    // A fixed generic combination of the kernel basis: every ODE satisfied
    // by the series vanishes at its singularities, so any combination keeps
    // them while a single basis vector may be a lower-order equation.
    std::vector<Real> y(static_cast<std::size_t>(cols), Real(0));
    for (int f = rank; f < cols; ++f) y[static_cast<std::size_t>(f)] = Real(1) / (f - rank + 1) + Real(f - rank) / 7;
    for (int i = rank - 1; i >= 0; --i) {
        Real s = 0;
        for (int j = i + 1; j < cols; ++j) s -= at(i, j) * y[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    std::vector<Real> x(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) x[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = y[static_cast<std::size_t>(j)];

    Approximant out;
    out.config = config;
    out.kernel_dimension = cols - rank;
    out.smallest_pivot = smallest_pivot;
    for (int j = 0; j <= k; ++j)
        out.coefficients.emplace_back(x.begin() + j * (d + 1), x.begin() + (j + 1) * (d + 1));
    if (config.inhomogeneous) out.inhomogeneous.assign(x.begin() + (k + 1) * (d + 1), x.end());

    Real overall = 0;
    for (const auto& v : x) overall = std::max(overall, Real(abs(v)));
    Real lead = 0;
    for (const auto& v : out.coefficients.back()) lead = std::max(lead, Real(abs(v)));
    if (!(lead > overall * pow2(-config.precision_bits / 2))) {
        throw std::runtime_error("approximant " + config.label() + " has a vanishing leading polynomial");
    }
    for (auto& p : out.coefficients)
        for (auto& v : p) v /= lead;
    for (auto& v : out.inhomogeneous) v /= lead;
    return out;
}

std::vector<SingularityEstimate> singularities(const Approximant& ode, int precision_bits) {
    const PrecisionScope scope(precision_bits);
    const int k = static_cast<int>(ode.coefficients.size()) - 1;
    if (k < 1) throw PreconditionError("singularities need an ODE of order at least 1");
    std::vector<Real> lead;
    for (const auto& v : ode.coefficients.back()) lead.emplace_back(v);
    Real big = 0;
    for (const auto& v : lead) big = std::max(big, Real(abs(v)));
    if (big == 0) throw PreconditionError("leading polynomial is zero");
    // Coefficients at the noise floor of the solve are dropped.
    const Real floor = big * pow2(-(precision_bits - 8));
    while (!lead.empty() && abs(lead.back()) <= floor) lead.pop_back();
    std::vector<SingularityEstimate> out;
    if (lead.size() < 2) return out;

    const auto roots = polish_roots(lead, precision_bits);
    std::vector<Real> dlead;
    for (std::size_t i = 1; i < lead.size(); ++i) dlead.push_back(lead[i] * static_cast<long>(i));
    std::vector<Real> sub;
    for (const auto& v : ode.coefficients[static_cast<std::size_t>(k - 1)]) sub.emplace_back(v);
    const Real separation = pow2(-precision_bits / 4);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        SingularityEstimate est;
        est.location = roots[i];
        const Real size = std::max(c_abs(roots[i]), Real(1e-30));
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j != i && c_abs(c_sub(roots[i], roots[j])) < separation * size) est.exponent_defined = false;
        }
        if (est.exponent_defined) {
            const Complex ratio = c_div(eval(sub, roots[i]), eval(dlead, roots[i]));
            est.exponent = Real(k - 1) - ratio.re;
        } else {
            est.exponent = 0;
        }
        out.push_back(std::move(est));
    }
    return out;
}

bool is_real(const Complex& z, double relative) { return abs(z.im) <= relative * c_abs(z); }

int agreed_digits(const Real& a, const Real& b) {
    return agreed_digits(Complex{a, Real(0)}, Complex{b, Real(0)});
}

int agreed_digits(const Complex& a, const Complex& b) {
    const int cap = static_cast<int>(Real::default_precision());
    const Real diff = c_abs(c_sub(a, b));
    const Real size = std::max(c_abs(a), c_abs(b));
    if (size == 0 || diff == 0) return cap;
    const Real rel = diff / size;
    const double digits = -static_cast<double>(log10(rel));
    if (!(digits > 0)) return 0;
    return std::min(cap, static_cast<int>(std::floor(digits)));
}

std::string format(const Real& x, int digits) {
    return x.str(static_cast<std::streamsize>(std::max(digits, 1)), std::ios_base::fmtflags(0));
}

std::vector<ApproximantConfig> default_grid(int terms, int precision_bits, int spare) {
    std::vector<ApproximantConfig> grid;
    for (int k = 2; k <= 4; ++k) {
        for (int inhom = 0; inhom <= 1; ++inhom) {
            const int per = k + 1 + inhom;
            // per (d + 1) - 1 + k <= terms - spare
            const int d_max = (terms - spare - k + 1) / per - 1;
            for (int d = d_max; d >= std::max(1, d_max - 1); --d) {
                grid.push_back(ApproximantConfig{k, d, inhom == 1, precision_bits});
            }
        }
    }
    return grid;
}

AnalysisReport analyze(const SeriesTerms& egf_terms, const std::vector<ApproximantConfig>& grid) {
    if (grid.empty()) throw PreconditionError("approximant grid is empty");
    int bits = 0;
    for (const auto& c : grid) bits = std::max(bits, c.precision_bits);
    const PrecisionScope scope(bits);

    struct Point {
        int source;
        Complex z;
        SingularityEstimate est;
        bool conjugate;
        bool used = false;
    };
    AnalysisReport report;
    report.terms = egf_terms.size();
    std::vector<Point> points;
    std::vector<std::string> labels;
    for (const auto& config : grid) {
        try {
            const auto ode = differential_approximant(egf_terms, config);
            const auto roots = singularities(ode, config.precision_bits);
            const int source = static_cast<int>(labels.size());
            labels.push_back(config.label());
            for (const auto& est : roots) {
                // Conjugate pairs are represented by their upper member.
                if (est.location.im < 0 && !is_real(est.location)) continue;
                Point p{source, est.location, est, !is_real(est.location)};
                if (!p.conjugate) p.z.im = 0;
                p.est.location = p.z;
                points.push_back(std::move(p));
            }
        } catch (const std::exception& e) {
            report.failures.push_back(config.label() + ": " + e.what());
        }
    }
    report.approximants_ok = static_cast<int>(labels.size());
    if (report.approximants_ok == 0) {
        throw std::runtime_error("every approximant in the grid failed; first failure: " + report.failures.front());
    }

    std::stable_sort(points.begin(), points.end(),
                     [](const Point& x, const Point& y) { return c_abs(x.z) < c_abs(y.z); });
    const Real radius = kClusterRadius;
    for (std::size_t seed = 0; seed < points.size(); ++seed) {
        if (points[seed].used) continue;
        std::vector<std::size_t> members{seed};
        points[seed].used = true;
        const Real seed_size = std::max(c_abs(points[seed].z), Real(1e-30));
        for (int source = 0; source < report.approximants_ok; ++source) {
            if (source == points[seed].source) continue;
            std::size_t best = points.size();
            Real best_dist;
            for (std::size_t i = seed + 1; i < points.size(); ++i) {
                if (points[i].used || points[i].source != source) continue;
                const Real dist = c_abs(c_sub(points[i].z, points[seed].z));
                if (best == points.size() || dist < best_dist) {
                    best = i;
                    best_dist = dist;
                }
            }
            if (best != points.size() && best_dist < radius * seed_size) {
                points[best].used = true;
                members.push_back(best);
            }
        }
        SingularityCluster cluster;
        cluster.support = static_cast<int>(members.size());
        cluster.confirmed = 2 * cluster.support > report.approximants_ok;
        Complex sum{0, 0};
        Real exponent_sum = 0;
        int exponent_count = 0;
        int conjugates = 0;
        for (std::size_t idx : members) {
            const Point& p = points[idx];
            sum = c_add(sum, p.z);
            if (p.est.exponent_defined) {
                exponent_sum += p.est.exponent;
                ++exponent_count;
            }
            conjugates += p.conjugate ? 1 : 0;
            cluster.members.push_back(labels[static_cast<std::size_t>(p.source)]);
        }
        const Real count = static_cast<long>(members.size());
        cluster.estimate.location = {sum.re / count, sum.im / count};
        cluster.conjugate_pair = 2 * conjugates > cluster.support;
        if (!cluster.conjugate_pair) cluster.estimate.location.im = 0;
        cluster.estimate.exponent_defined = exponent_count > 0;
        cluster.estimate.exponent = exponent_count > 0 ? Real(exponent_sum / exponent_count) : Real(0);
        int digits = members.size() > 1 ? static_cast<int>(Real::default_precision()) : 0;
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                digits = std::min(digits, agreed_digits(points[members[i]].z, points[members[j]].z));
        cluster.estimate.agreed_digits = digits;
        report.clusters.push_back(std::move(cluster));
    }
    std::stable_sort(report.clusters.begin(), report.clusters.end(), [](const auto& x, const auto& y) {
        return c_abs(x.estimate.location) < c_abs(y.estimate.location);
    });
    return report;
}

const SingularityCluster* dominant(const AnalysisReport& report) {
    for (const auto& c : report.clusters) {
        if (c.confirmed && !c.conjugate_pair && c.estimate.location.re > 0) return &c;
    }
    return nullptr;
}

std::optional<GrowthEstimate> growth_from_report(const AnalysisReport& report, const SeriesTerms& counting_terms) {
    const auto* dom = dominant(report);
    if (dom == nullptr) return std::nullopt;
    const Real& mu = dom->estimate.location.re;
    std::optional<Real> mu2;
    for (const auto& c : report.clusters) {
        if (&c == dom || !c.confirmed) continue;
        Real r = boost::multiprecision::hypot(c.estimate.location.re, c.estimate.location.im);
        if (r > mu) {
            mu2 = std::move(r);
            break;
        }
    }
    return growth_constants(counting_terms, mu, dom->estimate.agreed_digits, mu2);
}

GrowthEstimate growth_constants(const SeriesTerms& counting_terms, const Real& mu, int mu_digits,
                                const std::optional<Real>& mu2) {
    if (!(mu > 0)) throw PreconditionError("mu must be positive");
    const int n_max = counting_terms.order();
    if (n_max < 3) throw PreconditionError("growth constants need at least four terms");
    const unsigned saved = Real::default_precision();
    Real::default_precision(std::max(saved, mu.precision()));
    struct Restore {
        unsigned digits;
        ~Restore() { Real::default_precision(digits); }
    } restore{saved};
    GrowthEstimate out;
    out.mu = mu;
    out.mu_inv = 1 / mu;
    out.mu_digits = mu_digits;
    out.terms = counting_terms.size();

    // C_n = a_n mu^n / n!
    std::vector<Real> c(static_cast<std::size_t>(n_max + 1));
    Real scale = 1;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) scale = scale * mu / n;
        c[static_cast<std::size_t>(n)] = from_rational(counting_terms.coefficients[static_cast<std::size_t>(n)]) * scale;
    }
    std::optional<Real> ratio;
    if (mu2) ratio = mu / *mu2;
    auto estimate = [&](int n) -> Real {
        const Real& cn = c[static_cast<std::size_t>(n)];
        const Real& cm = c[static_cast<std::size_t>(n - 1)];
        if (ratio) return (cn - *ratio * cm) / (1 - *ratio);
        const Real& cl = c[static_cast<std::size_t>(n - 2)];
        const Real second = cn - 2 * cm + cl;
        if (abs(second) <= abs(cn) * pow2(-static_cast<long>(std::numeric_limits<int>::digits))) return cn;
        return cn - (cn - cm) * (cn - cm) / second;
    };
    const int early = std::max(2, n_max - n_max / 10);
    out.C = estimate(n_max);
    out.C_digits = agreed_digits(out.C, estimate(early));
    if (counting_terms.size() < 50) {
        out.partial = true;
        out.note = "fewer than 50 terms; extrapolation is not stable";
    }
    return out;
}

std::string to_text(const AnalysisReport& report, const std::optional<GrowthEstimate>& growth) {
    std::ostringstream out;
    out << "terms " << report.terms << "\napproximants_ok " << report.approximants_ok << '\n';
    for (const auto& f : report.failures) out << "failure " << f << '\n';
    int index = 0;
    for (const auto& c : report.clusters) {
        if (c.support < 2) continue;
        const int digits = std::max(c.estimate.agreed_digits + 3, 6);
        out << "cluster " << ++index << "\nlocation_re " << format(c.estimate.location.re, digits)
            << "\nlocation_im " << format(c.estimate.location.im, digits) << "\nconjugate_pair "
            << (c.conjugate_pair ? "yes" : "no") << "\nexponent "
            << (c.estimate.exponent_defined ? format(c.estimate.exponent, 12) : std::string("undefined"))
            << "\nagreed_digits " << c.estimate.agreed_digits << "\nsupport " << c.support << "\nconfirmed "
            << (c.confirmed ? "yes" : "no") << "\nmembers";
        for (const auto& m : c.members) out << ' ' << m;
        out << '\n';
    }
    if (growth) {
        const int mu_digits = std::max(growth->mu_digits, 1);
        out << "growth\nmu " << format(growth->mu, mu_digits) << "\nmu_inv " << format(growth->mu_inv, mu_digits)
            << "\nmu_digits " << growth->mu_digits << "\nC " << format(growth->C, std::max(growth->C_digits, 1))
            << "\nC_digits " << growth->C_digits << '\n';
        if (growth->partial) out << "note " << growth->note << '\n';
    }
    return out.str();
}

}  // namespace popstack::asym
