#include <doctest.h>

#include "mld/discriminantal.hpp"

using namespace mld;

namespace {

Int bounded_B(int k, int m, std::uint64_t seed) {
    Rng rng(seed);
    auto cfg = random_generic_config(k, m, rng);
    return regions(char_poly(build_poset(build_B(cfg)))).bounded;
}

}  // namespace

TEST_SUITE("discriminantal") {

TEST_CASE("four points in the plane") {
    Rng rng(1);
    auto cfg = random_generic_config(3, 4, rng);
    CHECK(cfg.generic());
    auto normals = hyperplane_normals(cfg);
    CHECK(normals.size() == 6);
    for (const auto& e : normals) CHECK_FALSE(e.zero);
    auto s = discriminantal_summary(cfg, rng);
    CHECK(s.chi_A.str() == "t^2 - 6t + 11");
    CHECK(s.chi_B.str() == "t^2 - 5t + 6");
    CHECK(s.chi_Btilde.str() == "t^3 - 6t^2 + 11t - 6");
    CHECK(s.regions_B.total == 12);
    CHECK(s.regions_B.bounded == 2);
    CHECK(s.regions_A.total == 18);
    CHECK(s.regions_A.bounded == 6);
    CHECK(s.decone_matches);
    CHECK(s.restriction_identity);
    CHECK(s.derivative_identity);
    CHECK(s.section_generic);
    // Affine arrangement: four points of multiplicity three and three simple crossings.
    auto p = build_poset(s.A);
    CHECK(p.count(1) == 6);
    CHECK(p.count(2) == 7);
    auto b = brute_force_regions(s.B);
    CHECK(b.total == 12);
    CHECK(b.bounded == 2);
}

TEST_CASE("normals are the columns when k = 2") {
    Rng rng(2);
    auto cfg = random_generic_config(2, 3, rng);
    auto normals = hyperplane_normals(cfg);
    REQUIRE(normals.size() == 3);
    for (int j = 0; j < 3; ++j) {
        auto col = cfg.column(j);
        // det[v | c] = v_0 c_1 - v_1 c_0, so the normal is (c_1, -c_0).
        CHECK(normals[j].normal == RatVec{col[1], -col[0]});
    }
}

TEST_CASE("collinear points merge hyperplanes") {
    // Columns 4 and 5 agree in the first two rows, so points 1, 4 and 5 are collinear.
    RatMat x = {{Rat(1)}, {Rat(5)}};
    auto cfg = ConfigMatrix::from_unknowns(3, 5, x);
    auto bad = cfg.vanishing_minor();
    REQUIRE_FALSE(bad.empty());
    CHECK_THROWS_AS(build_Btilde(cfg), Error);
    auto bt = build_Btilde(cfg, false);
    CHECK(bt.size() < 10);
}

TEST_CASE("k = 2 gives points on a line") {
    for (int m = 3; m <= 8; ++m) {
        Rng rng(m);
        auto cfg = random_generic_config(2, m, rng);
        auto b = build_B(cfg);
        CHECK(b.dim() == 1);
        CHECK(b.size() == std::size_t(m - 1));
        CHECK(regions(char_poly(build_poset(b))).bounded == m - 2);
    }
}

TEST_CASE("bounded region counts are seed independent") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) CHECK(bounded_B(3, 6, seed) == 42);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) CHECK(bounded_B(4, 6, seed) == 192);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) CHECK(bounded_B(3, 5, seed) == 13);
}

TEST_CASE("three concurrent joining lines") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Rng rng(seed);
        auto cfg = degenerate_config(3, 6, "(1,2)(3,4)(5,6)", rng);
        auto b = build_B(cfg, false);
        CHECK(regions(char_poly(build_poset(b))).bounded == 41);
    }
    Rng rng(4);
    CHECK_THROWS_AS(degenerate_config(3, 6, "(1,2)(2,3)(5,6)", rng), Error);
    CHECK_THROWS_AS(degenerate_config(3, 6, "(1,2)(3,4)", rng), Error);
    CHECK_THROWS_AS(degenerate_config(4, 7, "(1,2)(3,4)(5,6)", rng), Error);
}

TEST_CASE("soft polynomials") {
    CHECK(soft_poly_eval(3, 7) == 42);
    CHECK(soft_poly_eval(4, 8) == 1858);
    CHECK(soft_poly_eval(3, 10) == 372);
    CHECK(soft_poly_eval(3, 5) == 2);
    CHECK(soft_poly_eval(4, 7) == 192);
    CHECK_THROWS_AS(soft_poly_eval(5, 9), Error);
    CHECK_THROWS_AS(soft_poly_eval(3, 3), Error);
    // Leading coefficient 1 / (k-1)!^k.
    CHECK(soft_poly_coefficients(3).back() == Rat(1, 8));
    CHECK(soft_poly_coefficients(4).back() == Rat(1, 1296));
    CHECK(soft_poly_coefficients(3).size() == 5);
    CHECK(soft_poly_coefficients(4).size() == 10);
}

TEST_CASE("soft polynomial matches arrangements with the index shift") {
    for (int m = 4; m <= 8; ++m) CHECK(soft_poly_eval(3, m + 1) == bounded_B(3, m, 1));
    CHECK(soft_poly_eval(4, 7) == bounded_B(4, 6, 1));
}

TEST_CASE("bounded counts of B(3,m) have degree four in m") {
    std::vector<Int> v;
    for (int m = 4; m <= 9; ++m) v.push_back(bounded_B(3, m, 3));
    // Fifth finite difference.
    for (int order = 0; order < 5; ++order)
        for (std::size_t i = 0; i + 1 < v.size() - order; ++i) v[i] = v[i + 1] - v[i];
    CHECK(v[0] == 0);
}

TEST_CASE("identities on the discriminantal family") {
    const std::vector<std::pair<int, int>> km = {{3, 4}, {3, 5}, {3, 6}, {3, 7}, {4, 6}};
    for (auto [k, m] : km) {
        Rng rng(17);
        auto cfg = random_generic_config(k, m, rng);
        auto s = discriminantal_summary(cfg, rng);
        CAPTURE(k);
        CAPTURE(m);
        CHECK(s.decone_matches);
        CHECK(s.restriction_identity);
        CHECK(s.derivative_identity);
        // Bounded regions of B equal chi_A'(1) + chi_A(1) up to sign.
        Int lhs = s.chi_B.eval(1);
        Int rhs = s.chi_A.derivative_at(1) + s.chi_A.eval(1);
        CHECK(lhs == rhs);
        CHECK(s.B.size() == std::size_t(binomial(m, k - 1).get_si() - 1));
    }
}

TEST_CASE("normal form round trip and validation") {
    Rng rng(8);
    auto cfg = random_generic_config(3, 6, rng);
    auto again = ConfigMatrix::from_unknowns(3, 6, cfg.unknowns());
    CHECK(again.entries == cfg.entries);
    CHECK_THROWS_AS(random_generic_config(3, 3, rng), Error);
    CHECK_THROWS_AS(random_generic_config(1, 3, rng), Error);
}

}  // TEST_SUITE
