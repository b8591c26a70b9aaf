#include "popstack/modular.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "popstack/errors.hpp"

namespace popstack {

namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t result = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1U) result = result * base % mod;
        base = base * base % mod;
        exp >>= 1U;
    }
    return result;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
    // p is prime and a is nonzero mod p.
    return static_cast<std::uint32_t>(pow_mod(a % p, p - 2, p));
}

// Runs `job(i)` for i in [0, count) on a pool; the first failure is
// rethrown as a WorkerError naming primes[i].
template <class Job>
void run_pool(std::size_t count, int workers, const std::vector<std::uint32_t>& primes, Job job) {
    if (workers < 1) throw PreconditionError("worker count must be at least 1");
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::uint32_t failed_prime = 0;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                    failed_prime = primes[i];
                }
                next.store(count);
                return;
            }
        }
    };
    const auto threads = static_cast<std::size_t>(workers) < count ? static_cast<std::size_t>(workers) : count;
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const ResourceError&) {
            throw;
        } catch (const std::exception& e) {
            throw WorkerError(failed_prime, e.what());
        }
    }
}

std::size_t prefix_table_bytes(int max_n) {
    std::size_t cells = 0;
    for (int n = 1; n <= max_n; ++n) cells += static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    return cells * sizeof(PrimeField::value_type);
}

}  // namespace

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t small : {2U, 3U, 5U, 7U, 11U, 13U}) {
        if (n % small == 0) return n == small;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    // Bases 2, 7, 61 are deterministic below 4,759,123,141.
    for (std::uint64_t a : {2ULL, 7ULL, 61ULL}) {
        if (a % n == 0) continue;
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

mpz_class factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n < 0 ? 0 : n));
    return f;
}

PrimeBasis select_primes_for_bound(const mpz_class& bound, std::uint64_t prime_ceiling) {
    if (prime_ceiling < 3) throw PreconditionError("prime ceiling must be at least 3");
    if (prime_ceiling > PrimeField::kMaxModulus) {
        throw PreconditionError("prime ceiling above 2^31 is not supported by the prime-field ring");
    }
    PrimeBasis basis;
    for (std::uint64_t candidate = prime_ceiling - 1; candidate >= 2 && basis.modulus_product <= bound;
         --candidate) {
        const auto c = static_cast<std::uint32_t>(candidate);
        if (is_prime_u32(c)) {
            basis.primes.push_back(c);
            basis.modulus_product *= c;
        }
    }
    if (basis.modulus_product <= bound) {
        throw PreconditionError("primes below " + std::to_string(prime_ceiling) +
                                " cannot exceed the required bound; raise the prime ceiling");
    }
    return basis;
}

PrimeBasis select_primes(int max_n, std::uint64_t prime_ceiling) {
    return select_primes_for_bound(factorial(max_n), prime_ceiling);
}

PrimeBasis select_primes_by_runs(int max_n, int max_k, std::uint64_t prime_ceiling) {
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(max_k), static_cast<unsigned long>(max_n));
    const mpz_class fact = factorial(max_n);
    return select_primes_for_bound(power < fact ? power : fact, prime_ceiling);
}

CrtReconstructor::CrtReconstructor(const PrimeBasis& basis) : primes_(basis.primes) {
    inverse_.resize(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        inverse_[i].resize(i);
        for (std::size_t j = 0; j < i; ++j) inverse_[i][j] = inverse_mod(primes_[j] % primes_[i], primes_[i]);
    }
}

mpz_class CrtReconstructor::operator()(std::span<const std::uint32_t> residues) const {
    // Mixed-radix digits v_i with x = v_0 + p_0 (v_1 + p_1 (v_2 + ...)).
    const std::size_t k = primes_.size();
    std::vector<std::uint64_t> digits(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t p = primes_[i];
        std::uint64_t x = residues[i] % p;
        for (std::size_t j = 0; j < i; ++j) {
            x = (x + p - digits[j] % p) % p * inverse_[i][j] % p;
        }
        digits[i] = x;
    }
    mpz_class value = 0;
    for (std::size_t i = k; i-- > 0;) {
        value *= primes_[i];
        value += static_cast<unsigned long>(digits[i]);
    }
    return value;
}

std::vector<mpz_class> crt_reconstruct(const ResidueBundle& bundle, const PrimeBasis& basis) {
    if (bundle.moduli != basis.primes) throw PreconditionError("residue moduli do not match the prime basis");
    if (bundle.residues.size() != bundle.moduli.size()) throw PreconditionError("one residue sequence per prime required");
    for (const auto& r : bundle.residues) {
        if (r.size() != static_cast<std::size_t>(bundle.max_n)) {
            throw PreconditionError("residue sequences have inconsistent lengths");
        }
    }
    const CrtReconstructor crt(basis);
    std::vector<mpz_class> out;
    out.reserve(static_cast<std::size_t>(bundle.max_n));
    std::vector<std::uint32_t> column(bundle.moduli.size());
    for (int n = 0; n < bundle.max_n; ++n) {
        for (std::size_t i = 0; i < column.size(); ++i) column[i] = bundle.residues[i][static_cast<std::size_t>(n)];
        out.push_back(crt(column));
    }
    return out;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint32_t prime) {
    return dir / ("residues_" + std::to_string(prime) + ".txt");
}

void write_residue_checkpoint(const std::filesystem::path& file, std::uint32_t prime,
                              std::span<const std::uint32_t> residues) {
    const auto tmp = std::filesystem::path(file.string() + ".tmp");
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
        out << prime << ' ' << residues.size() << '\n';
        for (std::size_t n = 0; n < residues.size(); ++n) out << n + 1 << ' ' << residues[n] << '\n';
        if (!out) throw std::runtime_error("short write on checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

std::vector<std::uint32_t> read_residue_checkpoint(const std::filesystem::path& file, std::uint32_t expected_prime) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open checkpoint " + file.string());
    std::uint64_t prime = 0;
    long count = -1;
    if (!(in >> prime >> count) || count < 0) throw std::runtime_error("bad checkpoint header in " + file.string());
    if (prime != expected_prime) {
        throw std::runtime_error("checkpoint " + file.string() + " is for prime " + std::to_string(prime));
    }
    std::vector<std::uint32_t> residues(static_cast<std::size_t>(count));
    for (long n = 1; n <= count; ++n) {
        long index = 0;
        std::uint64_t r = 0;
        if (!(in >> index >> r) || index != n || r >= prime) {
            throw std::runtime_error("bad checkpoint line " + std::to_string(n) + " in " + file.string());
        }
        residues[static_cast<std::size_t>(n - 1)] = static_cast<std::uint32_t>(r);
    }
    return residues;
}

std::vector<mpz_class> count_parallel(int max_n, const ParallelOptions& options, ParallelStats* stats) {
    if (max_n < 1) throw PreconditionError("count needs N >= 1");
    const PrimeBasis basis = select_primes(max_n, options.prime_ceiling);
    ResidueBundle bundle;
    bundle.max_n = max_n;
    bundle.moduli = basis.primes;
    bundle.residues.resize(basis.primes.size());
    std::atomic<std::size_t> reused{0};

    run_pool(basis.primes.size(), options.workers, basis.primes, [&](std::size_t i) {
        const std::uint32_t p = basis.primes[i];
        if (options.checkpoint_dir) {
            const auto file = checkpoint_path(*options.checkpoint_dir, p);
            if (std::filesystem::exists(file)) {
                auto saved = read_residue_checkpoint(file, p);
                if (saved.size() >= static_cast<std::size_t>(max_n)) {
                    saved.resize(static_cast<std::size_t>(max_n));
                    bundle.residues[i] = std::move(saved);
                    ++reused;
                    return;
                }
            }
        }
        bundle.residues[i] = count_sequence(max_n, PrimeField(p));
        if (options.checkpoint_dir) {
            write_residue_checkpoint(checkpoint_path(*options.checkpoint_dir, p), p, bundle.residues[i]);
        }
    });

    if (stats) {
        stats->primes = basis.primes.size();
        stats->table_bytes_per_worker = prefix_table_bytes(max_n);
        stats->primes_from_checkpoint = reused.load();
    }
    return crt_reconstruct(bundle, basis);
}

CountMatrix<BigIntRing> count_by_runs_parallel(int max_n, int max_k, const ParallelOptions& options,
                                               ParallelStats* stats) {
    if (max_n < 1 || max_k < 1 || max_k > max_n) throw PreconditionError("need 1 <= Kmax <= N");
    const PrimeBasis basis = select_primes_by_runs(max_n, max_k, options.prime_ceiling);
    std::vector<CountMatrix<PrimeField>> per_prime(basis.primes.size());
    run_pool(basis.primes.size(), options.workers, basis.primes,
             [&](std::size_t i) { per_prime[i] = count_by_runs(max_n, max_k, PrimeField(basis.primes[i])); });

    const CrtReconstructor crt(basis);
    CountMatrix<BigIntRing> out;
    out.max_n = max_n;
    out.max_k = max_k;
    out.rows.assign(static_cast<std::size_t>(max_k), std::vector<mpz_class>(static_cast<std::size_t>(max_n)));
    std::vector<std::uint32_t> column(basis.primes.size());
    for (int k = 1; k <= max_k; ++k) {
        for (int n = 1; n <= max_n; ++n) {
            for (std::size_t i = 0; i < column.size(); ++i) column[i] = per_prime[i].at(n, k);
            out.rows[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(n - 1)] = crt(column);
        }
    }
    if (stats) {
        stats->primes = basis.primes.size();
        stats->table_bytes_per_worker = 2 * prefix_table_bytes(max_n);
    }
    return out;
}

}  // namespace popstack
