// popstack: count pop-stacked permutations and analyse the sequence.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "popstack/asymptotics.hpp"
#include "popstack/dp.hpp"
#include "popstack/errors.hpp"
#include "popstack/fit.hpp"
#include "popstack/io.hpp"
#include "popstack/modular.hpp"
#include "popstack/permutation.hpp"
#include "popstack/series.hpp"

namespace {

using namespace popstack;

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kParse = 2,
    kPrecondition = 3,
    kResource = 4,
    kMismatch = 5,
};

struct CountArgs {
    int max_n = 0;
    int max_k = 0;
    std::string backend = "bigint";
    int workers = 1;
    std::uint64_t prime_ceiling = kDefaultPrimeCeiling;
    std::string checkpoint_dir;
    std::string output;
};

struct BruteArgs {
    int n = 0;
    std::string check_against;
};

struct GuessArgs {
    std::string input;
    std::string matrix;
    int runs_column = 0;
    std::string a0 = "0";
    std::string family = "rational";
    int d_max = 1000;
    int m_max = 1000;
    int k_max = 1000;
    int margin = kDefaultFitMargin;
    int max_unknowns = 0;
    std::uint64_t prime = kDefaultFitPrime;
    bool homogeneous = false;
    std::vector<std::string> transforms;
    int terms = 0;
    std::string output;
};

struct AsymptoteArgs {
    std::string input;
    std::string a0 = "0";
    int precision = 0;
    int spare = asym::kDefaultSpareTerms;
    int terms = 0;
    std::string output;
};

// Sends machine-readable data to a file, or to stdout when no path is given.
void emit(const std::string& path, const std::string& data) {
    if (path.empty()) {
        std::cout << data;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << data;
}

ParallelOptions parallel_options(const CountArgs& args) {
    ParallelOptions opts;
    opts.workers = args.workers;
    opts.prime_ceiling = args.prime_ceiling;
    if (!args.checkpoint_dir.empty()) opts.checkpoint_dir = args.checkpoint_dir;
    return opts;
}

void check_backend_flags(const CLI::App& cmd, const CountArgs& args) {
    if (args.backend == "bigint" &&
        (cmd.get_option("--checkpoint-dir")->count() > 0 || cmd.get_option("--prime-ceiling")->count() > 0)) {
        throw CLI::ValidationError("--checkpoint-dir and --prime-ceiling need --backend modular");
    }
}

void report_timing(const std::string& path, const std::string& what, std::chrono::steady_clock::time_point start) {
    if (path.empty()) return;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << what << " in " << secs << " s\n";
}

int cmd_count(const CountArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<mpz_class> counts;
    if (args.backend == "bigint") {
        counts = count_sequence(args.max_n, BigIntRing{});
    } else {
        ParallelStats stats;
        counts = count_parallel(args.max_n, parallel_options(args), &stats);
        if (!args.output.empty()) {
            std::cout << "primes " << stats.primes << " (" << stats.primes_from_checkpoint
                      << " from checkpoints), table bytes per worker " << stats.table_bytes_per_worker << '\n';
        }
    }
    std::ostringstream data;
    io::write_bfile(data, io::bfile_from_counts(counts));
    emit(args.output, data.str());
    report_timing(args.output, "counted f(1.." + std::to_string(args.max_n) + ")", start);
    return kOk;
}

int cmd_count_by_runs(const CountArgs& args) {
    const int max_k = args.max_k == 0 ? args.max_n : args.max_k;
    if (max_k > args.max_n) throw PreconditionError("--max-k must not exceed --max-n");
    const auto start = std::chrono::steady_clock::now();
    CountMatrix<BigIntRing> m = args.backend == "bigint"
                                    ? count_by_runs(args.max_n, max_k, BigIntRing{})
                                    : count_by_runs_parallel(args.max_n, max_k, parallel_options(args));
    std::ostringstream data;
    io::write_matrix(data, m);
    emit(args.output, data.str());
    report_timing(args.output, "counted f(n, k) for n <= " + std::to_string(args.max_n), start);
    return kOk;
}

int cmd_brute(const BruteArgs& args) {
    const auto report = brute_count(args.n);
    std::cout << "n " << report.n << "\ntotal " << report.total << '\n';
    for (const auto& [k, c] : report.by_runs) std::cout << "runs " << k << ' ' << c << '\n';
    if (args.check_against.empty()) return kOk;
    const auto file = io::read_bfile(args.check_against);
    const long idx = args.n - file.offset;
    if (idx < 0 || idx >= static_cast<long>(file.values.size())) {
        throw PreconditionError(args.check_against + " has no value for n = " + std::to_string(args.n));
    }
    const mpq_class expected = file.values[static_cast<std::size_t>(idx)];
    if (expected != mpq_class(mpz_class(std::to_string(report.total)))) {
        std::cout << "mismatch: file has " << expected.get_str() << '\n';
        return kMismatch;
    }
    std::cout << "match\n";
    return kOk;
}

// Terms a_0, a_1, ... from a b-file; a_0 is supplied when the file starts at 1.
SeriesTerms load_series(const std::string& path, const std::string& a0) {
    const auto file = io::read_bfile(path);
    if (file.offset == 0) {
        SeriesTerms s;
        s.coefficients = file.values;
        return s;
    }
    if (file.offset != 1) throw PreconditionError(path + " must start at n = 0 or n = 1");
    mpq_class a0_value;
    try {
        a0_value = mpq_class(a0);
        a0_value.canonicalize();
    } catch (const std::invalid_argument&) {
        throw ParseError("bad --a0 value '" + a0 + "'");
    }
    SeriesTerms s;
    s.coefficients.push_back(a0_value);
    s.coefficients.insert(s.coefficients.end(), file.values.begin(), file.values.end());
    s.a0_convention = "a0=" + a0_value.get_str() + " (assumed)";
    return s;
}

SeriesTerms truncate(SeriesTerms s, int terms) {
    if (terms > 0 && terms < s.size()) s.coefficients.resize(static_cast<std::size_t>(terms));
    return s;
}

int cmd_guess(const GuessArgs& args) {
    SeriesTerms terms;
    if (!args.matrix.empty()) {
        const auto m = io::read_matrix(args.matrix);
        if (args.runs_column < 1 || args.runs_column > m.max_k) {
            throw PreconditionError("--runs-column must lie in 1.." + std::to_string(m.max_k));
        }
        terms = series_from_counts(m.rows[static_cast<std::size_t>(args.runs_column - 1)], 0);
    } else {
        terms = load_series(args.input, args.a0);
    }
    terms = truncate(std::move(terms), args.terms);
    std::vector<Transform> chain;
    for (const auto& t : args.transforms) chain.push_back(parse_transform(t));
    terms = transform_series(terms, chain);

    FitOptions opts;
    opts.margin = args.margin;
    opts.prime = args.prime;
    opts.max_unknowns = args.max_unknowns;
    opts.inhomogeneous = !args.homogeneous;
    std::string text;
    if (args.family == "rational") {
        auto r = fit_rational(terms, args.d_max, opts);
        text = std::visit([](const auto& x) { return to_text(x); }, r);
    } else if (args.family == "algebraic") {
        auto r = fit_algebraic(terms, args.m_max, args.d_max, opts);
        text = std::visit([](const auto& x) { return to_text(x); }, r);
    } else {
        auto r = fit_dfinite(terms, args.k_max, args.d_max, opts);
        text = std::visit([](const auto& x) { return to_text(x); }, r);
    }
    if (!terms.a0_convention.empty()) text = "# " + terms.a0_convention + '\n' + text;
    emit(args.output, text);
    return kOk;
}

int cmd_asymptote(const AsymptoteArgs& args) {
    const SeriesTerms counts = truncate(load_series(args.input, args.a0), args.terms);
    if (counts.size() < 50) throw PreconditionError("asymptote needs at least 50 terms");
    const int bits = args.precision > 0 ? args.precision : asym::default_precision_bits(static_cast<int>(counts.size()));
    const asym::PrecisionScope scope(bits);
    const SeriesTerms egf = transform_series(counts, Transform::egf);
    const auto report = asym::analyze(egf, asym::default_grid(egf.size(), bits, args.spare));
    const auto growth = asym::growth_from_report(report, counts);
    std::string text = asym::to_text(report, growth);
    if (!counts.a0_convention.empty()) text = "# " + counts.a0_convention + '\n' + text;
    emit(args.output, text);
    return kOk;
}

void add_count_flags(CLI::App* cmd, CountArgs& args) {
    cmd->add_option("--max-n", args.max_n, "largest n")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--backend", args.backend, "bigint or modular")->check(CLI::IsMember({"bigint", "modular"}));
    cmd->add_option("--workers", args.workers, "worker threads (modular backend)")
        ->envname("POPSTACK_WORKERS")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--prime-ceiling", args.prime_ceiling, "primes are drawn from below this")
        ->check(CLI::Range(std::uint64_t{3}, kDefaultPrimeCeiling));
    cmd->add_option("--checkpoint-dir", args.checkpoint_dir, "directory for per-prime residue files");
    cmd->add_option("-o,--output", args.output, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact counting and series analysis of pop-stacked permutations"};
    app.require_subcommand(1);

    CountArgs count_args;
    auto* count = app.add_subcommand("count", "f(1..N) as a b-file");
    add_count_flags(count, count_args);

    CountArgs runs_args;
    auto* runs = app.add_subcommand("count-by-runs", "f(n, k) by number of ascending runs as 'n k f' lines");
    add_count_flags(runs, runs_args);
    runs->add_option("--max-k", runs_args.max_k, "largest run count (default N)")->check(CLI::PositiveNumber);

    BruteArgs brute_args;
    auto* brute = app.add_subcommand("brute", "enumerate S_n directly (n <= 12)");
    brute->add_option("--n", brute_args.n, "permutation length")->required()->check(CLI::NonNegativeNumber);
    brute->add_option("--check-against", brute_args.check_against, "b-file to compare the total with");

    GuessArgs guess_args;
    auto* guess = app.add_subcommand("guess", "fit a rational, algebraic or D-finite generating function");
    auto* input_opt = guess->add_option("-i,--input", guess_args.input, "b-file of terms");
    auto* matrix_opt = guess->add_option("--matrix", guess_args.matrix, "count-by-runs matrix file");
    input_opt->excludes(matrix_opt);
    guess->add_option("--runs-column", guess_args.runs_column, "column k of --matrix")->needs(matrix_opt);
    guess->add_option("--a0", guess_args.a0, "a_0 when the b-file starts at n = 1");
    guess->add_option("--family", guess_args.family, "rational, algebraic or dfinite")
        ->check(CLI::IsMember({"rational", "algebraic", "dfinite"}));
    guess->add_option("--d-max", guess_args.d_max, "largest polynomial degree")->check(CLI::NonNegativeNumber);
    guess->add_option("--m-max", guess_args.m_max, "largest algebraic power")->check(CLI::PositiveNumber);
    guess->add_option("--k-max", guess_args.k_max, "largest ODE order")->check(CLI::NonNegativeNumber);
    guess->add_option("--margin", guess_args.margin, "terms held out beyond the unknowns")->check(CLI::PositiveNumber);
    guess->add_option("--max-unknowns", guess_args.max_unknowns, "cap on unknowns (0 = none)")
        ->check(CLI::NonNegativeNumber);
    guess->add_option("--prime", guess_args.prime, "prime for the modular pre-solve")
        ->check(CLI::Range(std::uint64_t{3}, kDefaultPrimeCeiling - 1));
    guess->add_flag("--homogeneous", guess_args.homogeneous, "D-finite without the q(x) term");
    guess->add_option("--transform", guess_args.transforms, "egf, reciprocal or revert; repeatable, applied in order");
    guess->add_option("--terms", guess_args.terms, "use only the first T coefficients")->check(CLI::PositiveNumber);
    guess->add_option("-o,--output", guess_args.output, "output file (default stdout)");

    AsymptoteArgs asym_args;
    auto* asymptote = app.add_subcommand("asymptote", "differential approximants on the EGF");
    asymptote->add_option("-i,--input", asym_args.input, "b-file of counts")->required();
    asymptote->add_option("--a0", asym_args.a0, "a_0 when the b-file starts at n = 1");
    asymptote->add_option("--precision", asym_args.precision, "working precision in bits (default max(256, 3 * terms))")
        ->envname("POPSTACK_PRECISION")
        ->check(CLI::Range(64, 1 << 20));
    asymptote->add_option("--spare", asym_args.spare, "terms left unused by each approximant")
        ->check(CLI::NonNegativeNumber);
    asymptote->add_option("--terms", asym_args.terms, "use only the first T coefficients")->check(CLI::PositiveNumber);
    asymptote->add_option("-o,--output", asym_args.output, "output file (default stdout)");

    try {
        app.parse(argc, argv);
        if (count->parsed()) check_backend_flags(*count, count_args);
        if (runs->parsed()) check_backend_flags(*runs, runs_args);
        if (guess->parsed() && guess_args.input.empty() && guess_args.matrix.empty()) {
            throw CLI::RequiredError("--input or --matrix");
        }
        if (guess->parsed() && !guess_args.matrix.empty() && guess_args.runs_column == 0) {
            throw CLI::RequiredError("--runs-column");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        if (count->parsed()) return cmd_count(count_args);
        if (runs->parsed()) return cmd_count_by_runs(runs_args);
        if (brute->parsed()) return cmd_brute(brute_args);
        if (guess->parsed()) return cmd_guess(guess_args);
        if (asymptote->parsed()) return cmd_asymptote(asym_args);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kResource;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
