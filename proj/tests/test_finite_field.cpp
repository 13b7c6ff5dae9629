#include <doctest.h>

#include "mld/finite_field.hpp"

using namespace mld;

namespace {

int roots_by_enumeration(long a, long b, long q) {
    // x^2 + a x + b over F_q
    int n = 0;
    for (long x = 0; x < q; ++x) n += ((x * x + a * x + b) % q + q) % q == 0;
    return n;
}

}  // namespace

TEST_SUITE("finite_field") {

TEST_CASE("quadratic root counters") {
    CHECK(quad_roots(QuadRoot::b, 7) == 2);
    CHECK(quad_roots(QuadRoot::b, 5) == 0);
    CHECK(quad_roots(QuadRoot::e, 5) == 2);
    for (long q = 5; q < 200; ++q) {
        if (!is_prime(q)) continue;
        CAPTURE(q);
        CHECK(quad_roots(QuadRoot::b, q) == roots_by_enumeration(1, 1, q));
        CHECK(quad_roots(QuadRoot::d, q) == roots_by_enumeration(1, -1, q));
        CHECK(quad_roots(QuadRoot::e, q) == roots_by_enumeration(0, 1, q));
        CHECK((quad_roots(QuadRoot::b, q) == 2) == (q % 3 == 1));
        CHECK((quad_roots(QuadRoot::e, q) == 2) == (q % 4 == 1));
        CHECK((quad_roots(QuadRoot::d, q) == 2) == (q % 5 == 1 || q % 5 == 4));
    }
    CHECK_THROWS_AS(quad_roots(QuadRoot::b, 3), Error);
    CHECK_THROWS_AS(quad_roots(QuadRoot::b, 25), Error);
}

TEST_CASE("count formula values") {
    CHECK(count_formula(6, 7) == 140);
    CHECK(count_formula(7, 7) == 120);
    CHECK(count_formula(6, 11) == 3096);
    CHECK_THROWS_AS(count_formula(5, 7), Error);
    CHECK_THROWS_AS(count_formula(10, 7), Error);
    CHECK_THROWS_AS(count_formula(6, 9), Error);
}

TEST_CASE("formula agrees with enumeration") {
    BruteOptions opt;
    opt.threads = 2;
    for (long q : {5L, 7L, 11L, 13L}) {
        CAPTURE(q);
        CHECK(brute_count(3, 6, q, opt) == count_formula(6, q));
        if (q <= 11) CHECK(brute_count(3, 7, q, opt) == count_formula(7, q));
    }
}

TEST_CASE("points of X(2,5)") {
    for (long q : {5L, 7L, 11L}) CHECK(brute_count(2, 5, q) == (q - 2) * (q - 3));
    // X(2,4) is the projective line minus three points.
    CHECK(brute_count(2, 4, 7) == 5);
}

TEST_CASE("enumeration refuses large inputs") {
    BruteOptions opt;
    opt.max_tuples = 1000;
    CHECK_THROWS_AS(brute_count(3, 6, 7, opt), Error);
    CHECK_THROWS_AS(brute_count(3, 6, 9), Error);
}

TEST_CASE("Euler characteristics at q = 1") {
    CHECK(euler_from_count(6) == 26);
    CHECK(euler_from_count(7) == 1272);
    CHECK(euler_from_count(8) == 188112);
    CHECK(euler_from_count(9) == 74570400);
}

TEST_CASE("factorization") {
    auto f = factorize(Int(74570400));
    Int prod = 1;
    for (const auto& [p, e] : f) {
        CHECK(is_prime(p.get_si()));
        for (int i = 0; i < e; ++i) prod *= p;
    }
    CHECK(prod == 74570400);
    auto g = factorize(Int(13) * 53);
    REQUIRE(g.size() == 2);
    CHECK(g[0].first == 13);
    CHECK(g[1].first == 53);
}

}  // TEST_SUITE
