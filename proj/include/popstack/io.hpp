#pragma once

// Sequence files. A b-file holds "n value" per line with consecutive n;
// values are base-10 integers or rationals "p/q". A matrix file holds
// "n k value" triples, zeros omitted, sorted by (n, k). Lines starting
// with '#' and blank lines are ignored on input.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "popstack/dp.hpp"

namespace popstack::io {

struct BFile {
    long offset = 1;  // index of values[0]
    std::vector<mpq_class> values;
};

BFile bfile_from_counts(std::span<const mpz_class> counts, long offset = 1);

void write_bfile(std::ostream& out, const BFile& file);
void write_bfile(const std::filesystem::path& path, const BFile& file);

/// Throws ParseError with the line number on malformed input.
BFile read_bfile(std::istream& in);
BFile read_bfile(const std::filesystem::path& path);

/// All values must be integers; throws ParseError otherwise.
std::vector<mpz_class> integer_values(const BFile& file);

void write_matrix(std::ostream& out, const CountMatrix<BigIntRing>& matrix);
void write_matrix(const std::filesystem::path& path, const CountMatrix<BigIntRing>& matrix);

/// Rebuilds the matrix; missing entries are zero, dimensions are the
/// largest n and k present.
CountMatrix<BigIntRing> read_matrix(std::istream& in);
CountMatrix<BigIntRing> read_matrix(const std::filesystem::path& path);

}  // namespace popstack::io
