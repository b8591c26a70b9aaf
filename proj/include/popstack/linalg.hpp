#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace popstack::linalg {

/// Dense row-major matrix of residues mod a prime below 2^31.
struct ModMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint64_t> data;

    ModMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0) {}
    std::uint64_t& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    std::uint64_t operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

struct ModEchelon {
    int rank = 0;
    std::vector<int> pivot_rows;  // original row indices, one per pivot
    std::vector<int> pivot_cols;
};

/// Gaussian elimination mod p (p prime, p < 2^31). Consumes its input.
ModEchelon modular_echelon(ModMatrix m, std::uint64_t p);

/// Reduces a rational mod p; throws PreconditionError if p divides the
/// denominator.
std::uint64_t reduce_mod(const mpq_class& x, std::uint64_t p);

using IntegerRow = std::vector<mpz_class>;

/// Multiplies a rational row by the lcm of its denominators.
IntegerRow clear_denominators(const std::vector<mpq_class>& row);

struct ExactNullspace {
    int rank = 0;
    std::vector<IntegerRow> basis;  // primitive integer vectors
};

/// Nullspace of an integer matrix by fraction-free (Bareiss) elimination.
/// One basis vector per non-pivot column.
ExactNullspace integer_nullspace(std::vector<IntegerRow> rows, int cols);

/// Divides by the gcd of the entries and makes the last nonzero entry positive.
void make_primitive(IntegerRow& v);

}  // namespace popstack::linalg
