#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "popstack/dp.hpp"
#include "popstack/ring.hpp"

namespace popstack {

/// Primes are drawn from below this by default. Products of two residues
/// then fit a 64-bit word.
inline constexpr std::uint64_t kDefaultPrimeCeiling = std::uint64_t{1} << 31;

struct PrimeBasis {
    std::vector<std::uint32_t> primes;  // descending, pairwise distinct
    mpz_class modulus_product = 1;
};

/// Per-prime residue sequences f(1..N) mod p; residues[i] belongs to moduli[i].
struct ResidueBundle {
    int max_n = 0;
    std::vector<std::uint32_t> moduli;
    std::vector<std::vector<std::uint32_t>> residues;
};

/// A worker failed; identifies the prime it was working on.
class WorkerError : public std::runtime_error {
public:
    WorkerError(std::uint32_t prime, const std::string& what)
        : std::runtime_error("worker for prime " + std::to_string(prime) + " failed: " + what), prime_(prime) {}
    [[nodiscard]] std::uint32_t prime() const { return prime_; }

private:
    std::uint32_t prime_;
};

bool is_prime_u32(std::uint32_t n);

mpz_class factorial(int n);

/// Largest primes strictly below `prime_ceiling`, descending, until their
/// product exceeds `bound`. Throws PreconditionError when the ceiling is
/// too low to get there.
PrimeBasis select_primes_for_bound(const mpz_class& bound, std::uint64_t prime_ceiling = kDefaultPrimeCeiling);

/// Basis whose product exceeds N!, which bounds every f(n), n <= N.
PrimeBasis select_primes(int max_n, std::uint64_t prime_ceiling = kDefaultPrimeCeiling);

/// Basis for counts by runs up to (N, Kmax). There are at most k^n ballots
/// of [n] with k blocks, so min(N!, Kmax^N) bounds every entry.
PrimeBasis select_primes_by_runs(int max_n, int max_k, std::uint64_t prime_ceiling = kDefaultPrimeCeiling);

/// Garner reconstruction of one residue vector (one residue per prime, in
/// basis order) to the unique integer in [0, product).
class CrtReconstructor {
public:
    explicit CrtReconstructor(const PrimeBasis& basis);
    [[nodiscard]] mpz_class operator()(std::span<const std::uint32_t> residues) const;

private:
    std::vector<std::uint32_t> primes_;
    std::vector<std::vector<std::uint32_t>> inverse_;  // inverse_[i][j] = p_j^{-1} mod p_i, j < i
};

/// Reconstructs f(1..N) position by position. Throws PreconditionError on
/// mismatched moduli or ragged residue lengths.
std::vector<mpz_class> crt_reconstruct(const ResidueBundle& bundle, const PrimeBasis& basis);

struct ParallelOptions {
    int workers = 1;
    std::uint64_t prime_ceiling = kDefaultPrimeCeiling;
    /// When set, each finished prime is written there and reused on rerun.
    std::optional<std::filesystem::path> checkpoint_dir;
};

struct ParallelStats {
    std::size_t primes = 0;
    std::size_t table_bytes_per_worker = 0;  // prefix tensor size of one worker
    std::size_t primes_from_checkpoint = 0;
};

/// Exact f(1..N): one prime-field DP per basis prime on a pool of
/// `workers` threads, then CRT. Output does not depend on worker count.
std::vector<mpz_class> count_parallel(int max_n, const ParallelOptions& options, ParallelStats* stats = nullptr);

/// Exact f(n, k) for n <= N, k <= Kmax, by the same scheme.
CountMatrix<BigIntRing> count_by_runs_parallel(int max_n, int max_k, const ParallelOptions& options,
                                               ParallelStats* stats = nullptr);

/// Residue checkpoint: first line "p N", then N lines "n residue".
void write_residue_checkpoint(const std::filesystem::path& file, std::uint32_t prime,
                              std::span<const std::uint32_t> residues);
/// Returns the residues f(1..N) mod p; throws std::runtime_error on a
/// malformed file or a header that disagrees with the expected prime.
std::vector<std::uint32_t> read_residue_checkpoint(const std::filesystem::path& file, std::uint32_t expected_prime);

/// Checkpoints hold f(1..N') mod p; any N' >= N serves a run up to N.
std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint32_t prime);

}  // namespace popstack
