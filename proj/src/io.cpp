#include "popstack/io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "popstack/errors.hpp"

namespace popstack::io {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    return out;
}

bool skippable(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

mpq_class parse_value(const std::string& token, long line_no) {
    mpq_class q;
    const auto slash = token.find('/');
    try {
        if (slash == std::string::npos) {
            q = mpz_class(token, 10);
        } else {
            q = mpq_class(mpz_class(token.substr(0, slash), 10), mpz_class(token.substr(slash + 1), 10));
            if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
            q.canonicalize();
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad value '" + token + "'");
    }
    return q;
}

long parse_index(const std::string& token, long line_no) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size()) throw ParseError("line " + std::to_string(line_no) + ": bad index '" + token + "'");
    return v;
}

std::vector<std::string> fields(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

}  // namespace

BFile bfile_from_counts(std::span<const mpz_class> counts, long offset) {
    BFile f;
    f.offset = offset;
    for (const auto& c : counts) f.values.emplace_back(c);
    return f;
}

void write_bfile(std::ostream& out, const BFile& file) {
    for (std::size_t i = 0; i < file.values.size(); ++i) {
        out << file.offset + static_cast<long>(i) << ' ' << file.values[i].get_str() << '\n';
    }
}

void write_bfile(const std::filesystem::path& path, const BFile& file) {
    auto out = open_output(path);
    write_bfile(out, file);
}

BFile read_bfile(std::istream& in) {
    BFile f;
    std::string line;
    long line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto parts = fields(line);
        if (parts.size() != 2) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'n value'");
        }
        const long n = parse_index(parts[0], line_no);
        if (first) {
            f.offset = n;
            first = false;
        } else if (n != f.offset + static_cast<long>(f.values.size())) {
            throw ParseError("line " + std::to_string(line_no) + ": index " + std::to_string(n) +
                             " breaks the consecutive run");
        }
        f.values.push_back(parse_value(parts[1], line_no));
    }
    return f;
}

BFile read_bfile(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_bfile(in);
}

std::vector<mpz_class> integer_values(const BFile& file) {
    std::vector<mpz_class> out;
    out.reserve(file.values.size());
    for (std::size_t i = 0; i < file.values.size(); ++i) {
        if (file.values[i].get_den() != 1) {
            throw ParseError("value at n = " + std::to_string(file.offset + static_cast<long>(i)) +
                             " is not an integer");
        }
        out.push_back(file.values[i].get_num());
    }
    return out;
}

void write_matrix(std::ostream& out, const CountMatrix<BigIntRing>& matrix) {
    for (int n = 1; n <= matrix.max_n; ++n)
        for (int k = 1; k <= matrix.max_k; ++k) {
            const auto& v = matrix.at(n, k);
            if (sgn(v) != 0) out << n << ' ' << k << ' ' << v.get_str() << '\n';
        }
}

void write_matrix(const std::filesystem::path& path, const CountMatrix<BigIntRing>& matrix) {
    auto out = open_output(path);
    write_matrix(out, matrix);
}

CountMatrix<BigIntRing> read_matrix(std::istream& in) {
    std::map<std::pair<long, long>, mpz_class> entries;
    std::string line;
    long line_no = 0;
    long max_n = 0;
    long max_k = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto parts = fields(line);
        if (parts.size() != 3) throw ParseError("line " + std::to_string(line_no) + ": expected 'n k value'");
        const long n = parse_index(parts[0], line_no);
        const long k = parse_index(parts[1], line_no);
        if (n < 1 || k < 1) throw ParseError("line " + std::to_string(line_no) + ": n and k must be positive");
        const mpq_class v = parse_value(parts[2], line_no);
        if (v.get_den() != 1) throw ParseError("line " + std::to_string(line_no) + ": value is not an integer");
        if (!entries.emplace(std::make_pair(n, k), v.get_num()).second) {
            throw ParseError("line " + std::to_string(line_no) + ": duplicate entry");
        }
        max_n = std::max(max_n, n);
        max_k = std::max(max_k, k);
    }
    CountMatrix<BigIntRing> m;
    m.max_n = static_cast<int>(max_n);
    m.max_k = static_cast<int>(max_k);
    m.rows.assign(static_cast<std::size_t>(max_k), std::vector<mpz_class>(static_cast<std::size_t>(max_n), 0));
    for (const auto& [key, v] : entries) {
        m.rows[static_cast<std::size_t>(key.second - 1)][static_cast<std::size_t>(key.first - 1)] = v;
    }
    return m;
}

CountMatrix<BigIntRing> read_matrix(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_matrix(in);
}

}  // namespace popstack::io
