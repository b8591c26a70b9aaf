#include <doctest.h>

#include <sstream>

#include "popstack/dp.hpp"
#include "popstack/errors.hpp"
#include "popstack/io.hpp"

using namespace popstack;

TEST_SUITE("io") {

TEST_CASE("b-file write then read is the identity") {
    io::BFile f;
    f.offset = 0;
    f.values = {mpq_class(0), mpq_class(1), mpq_class(-7, 3), mpq_class(mpz_class("123456789012345678901234567890"))};
    std::stringstream buf;
    io::write_bfile(buf, f);
    CHECK(buf.str() == "0 0\n1 1\n2 -7/3\n3 123456789012345678901234567890\n");
    const auto g = io::read_bfile(buf);
    CHECK(g.offset == 0);
    CHECK(g.values == f.values);
}

TEST_CASE("b-file comments and blank lines are skipped") {
    std::stringstream in("# A307030\n\n1 1\n2 1\n3 3\n");
    const auto f = io::read_bfile(in);
    CHECK(f.offset == 1);
    CHECK(io::integer_values(f) == std::vector<mpz_class>{1, 1, 3});
}

TEST_CASE("malformed b-files are rejected with the line number") {
    std::stringstream gap("1 1\n3 3\n");
    CHECK_THROWS_AS(io::read_bfile(gap), ParseError);
    std::stringstream junk("1 x\n");
    try {
        (void)io::read_bfile(junk);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    std::stringstream extra("1 1 1\n");
    CHECK_THROWS_AS(io::read_bfile(extra), ParseError);
    std::stringstream frac("1 1/2\n");
    CHECK_THROWS_AS(io::integer_values(io::read_bfile(frac)), ParseError);
    CHECK_THROWS_AS(io::read_bfile(std::filesystem::path("/nonexistent/file.b")), ParseError);
}

TEST_CASE("matrix write then read is the identity") {
    const auto m = count_by_runs(8, 8, BigIntRing{});
    std::stringstream buf;
    io::write_matrix(buf, m);
    const std::string text = buf.str();
    CHECK(text.find("3 1 1\n3 2 2\n") != std::string::npos);
    CHECK(text.find(" 0\n") == std::string::npos);
    const auto r = io::read_matrix(buf);
    int top_k = 0;
    for (int k = 1; k <= 8; ++k)
        if (m.at(8, k) != 0) top_k = k;
    CHECK(r.max_n == 8);
    CHECK(r.max_k == top_k);  // trailing all-zero columns are not written
    for (int n = 1; n <= 8; ++n)
        for (int k = 1; k <= top_k; ++k) CHECK(r.at(n, k) == m.at(n, k));
    std::stringstream dup("1 1 1\n1 1 1\n");
    CHECK_THROWS_AS(io::read_matrix(dup), ParseError);
}

}
