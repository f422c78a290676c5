#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crnrd/rational.hpp"

using namespace crnrd;

TEST_CASE("rational_from_decimal parses finite decimals exactly") {
    CHECK(*rational_from_decimal("2") == Rat(2));
    CHECK(*rational_from_decimal("1.5") == Rat(3, 2));
    CHECK(*rational_from_decimal("0.25") == Rat(1, 4));
    CHECK(*rational_from_decimal("10") == Rat(10));
    CHECK(*rational_from_decimal("0") == Rat(0));
    CHECK(*rational_from_decimal("2.125") == Rat(17, 8));
}

TEST_CASE("rational_from_decimal rejects malformed input") {
    CHECK(!rational_from_decimal("").has_value());
    CHECK(!rational_from_decimal("1.2.3").has_value());
    CHECK(!rational_from_decimal("abc").has_value());
    CHECK(!rational_from_decimal(".").has_value());
}

TEST_CASE("rational_from_decimal guards against overflow-scale literals") {
    CHECK(!rational_from_decimal("123456789012345678901234567890").has_value());
}

TEST_CASE("to_double") {
    CHECK(to_double(Rat(1, 4)) == doctest::Approx(0.25));
    CHECK(to_double(Rat(-3, 2)) == doctest::Approx(-1.5));
}

TEST_CASE("rref computes rank and pivots") {
    RatMatrix m = {{Rat(1), Rat(2), Rat(3)},
                   {Rat(2), Rat(4), Rat(6)},
                   {Rat(0), Rat(1), Rat(1)}};
    std::vector<int> pivots;
    int rank = rref(m, &pivots);
    CHECK(rank == 2);
    REQUIRE(pivots.size() == 2);
    CHECK(pivots[0] == 0);
    CHECK(pivots[1] == 1);
    // RREF: leading ones, zeros above and below pivots.
    CHECK(m[0][0] == Rat(1));
    CHECK(m[0][1] == Rat(0));
    CHECK(m[1][1] == Rat(1));
}

TEST_CASE("null_space vectors satisfy m x = 0") {
    RatMatrix m = {{Rat(-1), Rat(-1), Rat(1), Rat(1)}}; // w^T for S1+S3 <-> S2+S4
    RatMatrix basis = null_space(m);
    REQUIRE(basis.size() == 3);
    for (const auto& row : basis) {
        Rat dot(0);
        for (std::size_t j = 0; j < row.size(); ++j) dot += m[0][j] * row[j];
        CHECK(dot == Rat(0));
    }
    // Basis rows are linearly independent.
    CHECK(rational_rank(basis) == 3);
}

TEST_CASE("null_space of a full-rank square matrix is empty") {
    RatMatrix m = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    CHECK(null_space(m).empty());
}

TEST_CASE("rational_rank") {
    RatMatrix m = {{Rat(1), Rat(1)}, {Rat(2), Rat(2)}};
    CHECK(rational_rank(m) == 1);
}

TEST_CASE("canonicalize_basis produces integer primitive rows with positive leading entry") {
    RatMatrix basis = {{Rat(1, 2), Rat(1, 2)}, {Rat(-1), Rat(1)}};
    RatMatrix canon = canonicalize_basis(basis);
    REQUIRE(canon.size() == 2);
    for (const auto& row : canon) {
        for (const auto& q : row) CHECK(q.denominator() == 1);
        for (const auto& q : row)
            if (q != Rat(0)) {
                CHECK(q > Rat(0)); // first nonzero positive
                break;
            }
    }
    CHECK(rational_rank(canon) == 2);
}

TEST_CASE("canonicalize_basis prefers nonnegative representatives") {
    // Kernel of (-1,-1,1,1): a nonnegative basis exists.
    RatMatrix m = {{Rat(-1), Rat(-1), Rat(1), Rat(1)}};
    RatMatrix canon = canonicalize_basis(null_space(m));
    REQUIRE(canon.size() == 3);
    int nonneg_rows = 0;
    for (const auto& row : canon) {
        bool ok = true;
        for (const auto& q : row)
            if (q < Rat(0)) ok = false;
        if (ok) ++nonneg_rows;
    }
    CHECK(nonneg_rows == 3);
}
