#include "popstack/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace popstack {

Permutation::Permutation(std::vector<int> values) : values_(std::move(values)) {
    const int n = size();
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (int v : values_) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) {
            throw std::invalid_argument("not a permutation of 1.." + std::to_string(n));
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

Permutation Permutation::identity(int n) {
    if (n < 0) throw std::invalid_argument("negative permutation length");
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
}

Permutation Permutation::parse(const std::string& text) {
    std::vector<int> v;
    const bool compact = std::all_of(text.begin(), text.end(),
                                     [](unsigned char ch) { return std::isdigit(ch) != 0; });
    if (compact) {
        for (char ch : text) v.push_back(ch - '0');
    } else {
        std::string cleaned = text;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream in(cleaned);
        int x = 0;
        while (in >> x) v.push_back(x);
        if (!in.eof()) throw std::invalid_argument("cannot parse permutation: " + text);
    }
    return Permutation(std::move(v));
}

bool Permutation::is_identity() const {
    for (int i = 0; i < size(); ++i) {
        if (values_[static_cast<std::size_t>(i)] != i + 1) return false;
    }
    return true;
}

std::string Permutation::to_string() const {
    const bool compact = size() < 10;
    std::string out;
    for (int i = 0; i < size(); ++i) {
        if (!compact && i > 0) out += ' ';
        out += std::to_string(values_[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<std::vector<int>> RunDecomposition::contents(const Permutation& p) const {
    std::vector<std::vector<int>> out;
    out.reserve(runs.size());
    for (const Run& r : runs) {
        out.emplace_back(p.values().begin() + r.begin, p.values().begin() + r.end);
    }
    return out;
}

Ballot::Ballot(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
    int n = 0;
    for (auto& b : blocks_) {
        if (b.empty()) throw std::invalid_argument("ballot block is empty");
        std::sort(b.begin(), b.end());
        n += static_cast<int>(b.size());
    }
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& b : blocks_) {
        for (int v : b) {
            if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) {
                throw std::invalid_argument("ballot blocks do not partition 1.." + std::to_string(n));
            }
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    n_ = n;
}

std::string Ballot::to_string() const {
    std::string out;
    for (const auto& b : blocks_) {
        out += '{';
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (i > 0) out += ',';
            out += std::to_string(b[i]);
        }
        out += '}';
    }
    return out;
}

RunDecomposition decompose_runs(const Permutation& p, RunDirection direction) {
    RunDecomposition d{direction, {}};
    const int n = p.size();
    int start = 0;
    for (int i = 1; i <= n; ++i) {
        const bool breaks = i == n || (direction == RunDirection::ascending ? p[i] < p[i - 1]
                                                                            : p[i] > p[i - 1]);
        if (breaks) {
            d.runs.push_back({start, i});
            start = i;
        }
    }
    return d;
}

Permutation pop_stack(const Permutation& p) {
    std::vector<int> out(p.values().begin(), p.values().end());
    for (const Run& r : decompose_runs(p, RunDirection::descending).runs) {
        std::reverse(out.begin() + r.begin, out.begin() + r.end);
    }
    return Permutation(std::move(out));
}

bool is_sortable_k(const Permutation& p, int k) {
    if (k < 0) throw std::invalid_argument("negative pass count");
    Permutation cur = p;
    for (int i = 0; i < k && !cur.is_identity(); ++i) cur = pop_stack(cur);
    return cur.is_identity();
}

namespace {

// Shared by is_pop_stacked and brute_count. Returns the number of ascending
// runs, or -1 if some adjacent pair of runs violates min(left) < max(right).
int pop_stacked_run_count(std::span<const int> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0;
    int runs = 1;
    std::size_t run_start = 0;
    std::size_t prev_start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && v[i] > v[i - 1]) continue;
        // [run_start, i) is a maximal ascending run.
        if (run_start > 0 && !(v[prev_start] < v[i - 1])) return -1;
        if (i < n) {
            prev_start = run_start;
            run_start = i;
            ++runs;
        }
    }
    return runs;
}

}  // namespace

bool is_pop_stacked(const Permutation& p) { return pop_stacked_run_count(p.values()) >= 0; }

Ballot perm_to_ballot(const Permutation& p) {
    const auto d = decompose_runs(p, RunDirection::ascending);
    return Ballot(d.contents(p));
}

Permutation ballot_to_perm(const Ballot& b) {
    const auto& blocks = b.blocks();
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(b.ground_size()));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i + 1 < blocks.size() && !(blocks[i].back() > blocks[i + 1].front())) {
            throw std::invalid_argument("ballot " + b.to_string() +
                                        " is not the ascending-run decomposition of a permutation");
        }
        out.insert(out.end(), blocks[i].begin(), blocks[i].end());
    }
    return Permutation(std::move(out));
}

bool is_overlapping(const Ballot& b) {
    const auto& blocks = b.blocks();
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
        const auto& left = blocks[i];
        const auto& right = blocks[i + 1];
        if (!(left.back() > right.front() && left.front() < right.back())) return false;
    }
    return true;
}

BruteCountReport brute_count(int n) {
    if (n < 0 || n > kBruteForceMaxN) {
        throw std::out_of_range("brute_count: n = " + std::to_string(n) + " outside [0, " +
                                std::to_string(kBruteForceMaxN) +
                                "]; use the dynamic-programming counter instead");
    }
    BruteCountReport report;
    report.n = n;
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    do {
        const int runs = pop_stacked_run_count(v);
        if (runs >= 0) {
            ++report.total;
            ++report.by_runs[runs];
        }
    } while (std::next_permutation(v.begin(), v.end()));
    return report;
}

}  // namespace popstack
