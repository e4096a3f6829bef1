#include "doctest.h"

#include "gsw/census.hpp"

using namespace gsw;

TEST_CASE("binomials") {
    CHECK(binomial(27, 9) == BigInt(4686825));
    CHECK(binomial(5, 0) == BigInt(1));
    CHECK(binomial(5, 6) == BigInt(0));
    CHECK(binomial(135, 27) == binomial(135, 108));
}

TEST_CASE("census at m=27 k=9 s=1 reproduces the worked numbers") {
    SpaceCensus c = census_from_m(27, 9, 1);
    REQUIRE(!c.vacuous);
    CHECK(c.head == binomial(27, 9));
    REQUIRE(c.tail.size() == 4);
    CHECK(c.tail[0] == binomial(27, 7));
    CHECK(c.tail[3] == binomial(27, 1));
    CHECK(c.tail_sum ==
          binomial(27, 7) + binomial(27, 5) + binomial(27, 3) + binomial(27, 1));
    // head / tail_sum >= ((27-9)/9)^2 / 2 = 2 exactly as rationals
    CHECK(c.sum_dominated);
    CHECK(c.ratio_bound);
    CHECK(c.chain_bound);
    CHECK(c.head * 2 * 81 >= c.tail_sum * 324);
}

TEST_CASE("census verdicts at the other acceptance points") {
    CHECK(census_from_m(27, 9, 2).all_hold());
    CHECK(census_from_m(135, 27, 3).all_hold());
}

TEST_CASE("s at the top of the range leaves a single term") {
    SpaceCensus c = census_from_m(27, 9, 4);
    REQUIRE(c.tail.size() == 1);
    CHECK(c.tail[0] == BigInt(27));
}

TEST_CASE("k larger than m is vacuous") {
    SpaceCensus c = census_from_m(5, 7, 1);
    CHECK(c.vacuous);
    CHECK(c.all_hold());
}

TEST_CASE("census from grid dimensions") {
    // n1=45, n2=3: delta=3, m = 27
    SpaceCensus c = census(45, 3, 9, 1);
    CHECK(c.m == 27);
    CHECK(c.all_hold());
}

TEST_CASE("report renders") {
    std::string r = census_from_m(27, 9, 1).report();
    CHECK(r.find("holds") != std::string::npos);
    CHECK(r.find("FAILS") == std::string::npos);
}
