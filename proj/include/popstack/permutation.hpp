#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace popstack {

/// A permutation of 1..n in one-line notation. Values are one-based.
class Permutation {
public:
    Permutation() = default;

    /// Throws std::invalid_argument unless `values` is a permutation of 1..n.
    explicit Permutation(std::vector<int> values);

    static Permutation identity(int n);
    /// Parses one-line notation such as "617849235" (single digits) or
    /// "6 1 7 8 4 9 2 3 5".
    static Permutation parse(const std::string& text);

    [[nodiscard]] int size() const { return static_cast<int>(values_.size()); }
    [[nodiscard]] bool empty() const { return values_.empty(); }
    [[nodiscard]] std::span<const int> values() const { return values_; }
    [[nodiscard]] int operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] bool is_identity() const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> values_;
};

enum class RunDirection { ascending, descending };

/// Half-open index range [begin, end) into a permutation.
struct Run {
    int begin = 0;
    int end = 0;
    [[nodiscard]] int length() const { return end - begin; }
    friend bool operator==(const Run&, const Run&) = default;
};

struct RunDecomposition {
    RunDirection direction = RunDirection::ascending;
    std::vector<Run> runs;

    /// The values of each run, in order of appearance.
    [[nodiscard]] std::vector<std::vector<int>> contents(const Permutation& p) const;
};

/// An ordered set partition of 1..n. Each block is kept sorted ascending.
class Ballot {
public:
    Ballot() = default;
    /// Sorts each block; throws std::invalid_argument if the blocks are not
    /// nonempty, pairwise disjoint, and covering 1..n.
    explicit Ballot(std::vector<std::vector<int>> blocks);

    [[nodiscard]] int ground_size() const { return n_; }
    [[nodiscard]] int block_count() const { return static_cast<int>(blocks_.size()); }
    [[nodiscard]] const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Ballot&, const Ballot&) = default;

private:
    std::vector<std::vector<int>> blocks_;
    int n_ = 0;
};

struct BruteCountReport {
    int n = 0;
    std::uint64_t total = 0;
    std::map<int, std::uint64_t> by_runs;
};

/// Largest n accepted by brute_count.
inline constexpr int kBruteForceMaxN = 12;

RunDecomposition decompose_runs(const Permutation& p, RunDirection direction);

/// One pass through a pop-stack: reverse every maximal descending run.
Permutation pop_stack(const Permutation& p);

/// True iff k passes through the pop-stack sort p.
bool is_sortable_k(const Permutation& p, int k);

/// Membership in the image of pop_stack, decided from adjacent ascending runs.
bool is_pop_stacked(const Permutation& p);

Ballot perm_to_ballot(const Permutation& p);

/// Inverse of perm_to_ballot. Throws std::invalid_argument when some
/// adjacent pair has max B_i < min B_{i+1}, since such a ballot is not the
/// run decomposition of any permutation.
Permutation ballot_to_perm(const Ballot& b);

bool is_overlapping(const Ballot& b);

/// Exhaustive count of pop-stacked permutations of length n, grouped by the
/// number of ascending runs. Throws std::out_of_range for n outside
/// [0, kBruteForceMaxN].
BruteCountReport brute_count(int n);

}  // namespace popstack
