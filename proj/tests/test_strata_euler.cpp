#include <doctest.h>

#include "mld/strata_euler.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

using namespace mld;

namespace {

// |S7| / |stabilizer| with the stabilizer found by scanning all permutations.
long orbit_by_stabilizer(const std::vector<Quadruple>& rep) {
    auto canon = [](std::vector<Quadruple> s) {
        for (auto& q : s) std::sort(q.begin(), q.end());
        std::sort(s.begin(), s.end());
        return s;
    };
    const auto base = canon(rep);
    std::array<int, 9> perm;
    std::iota(perm.begin(), perm.end(), 0);
    long fixed = 0, total = 0;
    std::array<int, 7> p{1, 2, 3, 4, 5, 6, 7};
    do {
        for (int i = 0; i < 7; ++i) perm[i + 1] = p[i];
        std::vector<Quadruple> img;
        for (const auto& q : rep) img.push_back({perm[q[0]], perm[q[1]], perm[q[2]], perm[q[3]]});
        fixed += canon(img) == base;
        ++total;
    } while (std::next_permutation(p.begin(), p.end()));
    return total / fixed;
}

}  // namespace

TEST_SUITE("strata_euler") {

TEST_CASE("single stratum") {
    StratPoset p;
    p.add("Y", 7, 5);
    p.finalize();
    auto c = chi_total(p);
    CHECK(c.direct == 35);
    CHECK(c.deficit == 35);
}

TEST_CASE("one divisor with fiber deficit one") {
    StratPoset p;
    int y = p.add("Y", 10, 6);
    int s = p.add("S", 3, 5);
    p.relate(s, y);
    p.finalize();
    CHECK(p.mobius(s, y) == -1);
    CHECK(chi_total(p).direct == 10 * 6 - 3);
    CHECK(fiber_deficit_sum(p, s) == 1);
}

TEST_CASE("worked fiber deficit example gives zero") {
    // Bottom stratum S below one type III and three type II strata, four divisors above.
    StratPoset p;
    const int fy = 42;
    int y = p.add("Y", 1, fy);
    std::vector<int> c;
    for (int i = 0; i < 4; ++i) c.push_back(p.add("C" + std::to_string(i), 1, fy - 1));
    int a = p.add("III", 1, fy - 3);
    std::vector<int> b;
    for (int i = 0; i < 3; ++i) b.push_back(p.add("II" + std::to_string(i), 1, fy - 2));
    int s = p.add("IV", 1, fy - 4);
    for (int ci : c) p.relate(ci, y);
    p.relate(a, c[0]);
    p.relate(a, c[1]);
    p.relate(a, c[2]);
    for (int i = 0; i < 3; ++i) p.relate(b[i], c[i]);
    for (int i = 0; i < 3; ++i) p.relate(b[i], c[3]);
    p.relate(s, a);
    for (int bi : b) p.relate(s, bi);
    p.finalize();
    CHECK(p.mobius_consistent());
    CHECK(p.mobius(s, y) == -2);
    CHECK(p.mobius(s, c[0]) == 1);
    CHECK(p.mobius(s, c[3]) == 2);
    CHECK(p.mobius(s, a) == -1);
    CHECK(fiber_deficit_sum(p, s) == 0);
    auto t = chi_total(p);
    CHECK(t.direct == t.deficit);
}

TEST_CASE("poset validation") {
    StratPoset p;
    int y = p.add("Y", 1, 1);
    int s = p.add("S", 1, 1);
    p.relate(y, s);
    CHECK_THROWS_AS(p.finalize(), Error);
    StratPoset q;
    int a = q.add("a", 1, 1);
    int b = q.add("b", 1, 1);
    q.relate(a, b);
    q.relate(b, a);
    CHECK_THROWS_AS(q.finalize(), Error);
}

TEST_CASE("sigma and rho") {
    CHECK(sigma({{3, 1}}) == 1);
    CHECK(sigma({{4, 1}}) == 3);
    CHECK(sigma({{3, 2}, {5, 1}}) == 8);
    CHECK(rho({{3, 1}}) == 1);
    CHECK(rho({{4, 1}}) == -1);
    CHECK(rho({{3, 1}, {4, 1}}) == 0);
    CHECK(rho({}) == 0);
}

TEST_CASE("rho over all profiles up to weight twelve") {
    auto all = enumerate_profiles(12);
    CHECK(all.size() > 20);
    std::set<StratumProfile> seen(all.begin(), all.end());
    CHECK(seen.size() == all.size());
    for (const auto& n : all) {
        int r = rho(n);
        CHECK(r >= -1);
        CHECK(r <= 1);
        CHECK(rho_recursive(n) == r);
    }
}

TEST_CASE("binomial identity behind the single-point case") {
    for (int h = 3; h <= 12; ++h) {
        Int alt = 0;
        for (int j = 3; j < h; ++j) alt += ((j % 2) ? 1 : -1) * binomial(h, j);
        int expect = (h % 2) ? 1 : -1;
        CHECK(binomial(h - 1, 2) == expect + alt);
    }
}

TEST_CASE("stratum counts") {
    CHECK(stratum_count(6, 3) == 15);
    CHECK(stratum_count(7, 3) == 105);
    CHECK(stratum_count(8, 3) == 420);
    CHECK(stratum_count(8, 4) == 105);
    CHECK_THROWS_AS(stratum_count(5, 3), Error);
}

TEST_CASE("recursion for X(3,m)") {
    CHECK(chi_X3_recursion(6, 26, 42, {{3, -12}}) == 26 * 42 + 15 * 12);
    CHECK(chi_X3_recursion(6, 26, 42, {{3, -12}}) == 1272);
    CHECK(chi_X3_recursion(7, 1272, 101, {{3, -568}}) == 188112);
    CHECK(chi_X3_recursion(8, 188112, 205, {{3, -81040}, {4, 18768}}) == 74570400);
    CHECK(chi_X3_recursion(4, 1, 2, {}) == 2);
    CHECK(chi_X3_recursion(5, 2, 13, {}) == 26);
    CHECK_THROWS_AS(chi_X3_recursion(5, 2, 13, {{3, 1}}), Error);
}

TEST_CASE("nine points with one collinear triple") {
    // Strata of X(3,8): triples of point pairs with concurrent lines, and quadruples.
    std::vector<std::array<int, 2>> pairs;
    for (int i = 1; i <= 8; ++i)
        for (int j = i + 1; j <= 8; ++j) pairs.push_back({i, j});
    auto disjoint = [](const std::vector<std::array<int, 2>>& ps) {
        std::set<int> pts;
        for (const auto& p : ps) pts.insert({p[0], p[1]});
        return pts.size() == 2 * ps.size();
    };
    std::vector<std::vector<int>> triples, quads;
    const int np = static_cast<int>(pairs.size());
    for (int a = 0; a < np; ++a)
        for (int b = a + 1; b < np; ++b)
            for (int c = b + 1; c < np; ++c) {
                if (!disjoint({pairs[a], pairs[b], pairs[c]})) continue;
                triples.push_back({a, b, c});
                for (int d = c + 1; d < np; ++d)
                    if (disjoint({pairs[a], pairs[b], pairs[c], pairs[d]})) quads.push_back({a, b, c, d});
            }
    REQUIRE(triples.size() == 420);
    REQUIRE(quads.size() == 105);
    const int p78 = np - 1;
    auto has78 = [&](const std::vector<int>& s) { return std::find(s.begin(), s.end(), p78) != s.end(); };
    StratPoset p;
    int y = p.add("X(3,8)", 188112, 15);
    std::vector<int> tid;
    for (const auto& t : triples) tid.push_back(p.add("T", -81040, has78(t) ? 14 : 15));
    for (std::size_t i = 0; i < tid.size(); ++i) p.relate(tid[i], y);
    for (const auto& q : quads) {
        int id = p.add("Q", 18768, has78(q) ? 13 : 15);
        for (std::size_t i = 0; i < triples.size(); ++i)
            if (std::includes(q.begin(), q.end(), triples[i].begin(), triples[i].end())) p.relate(id, tid[i]);
    }
    p.finalize();
    auto t = chi_total(p);
    CHECK(t.deficit == 188112 * 15 + 45 * 81040 + 15 * 18768);
    CHECK(t.deficit == 6750000);
}

TEST_CASE("orbit sizes") {
    const std::vector<std::pair<std::vector<Quadruple>, long>> reps = {
        {{{1, 4, 7, 8}, {2, 5, 7, 8}, {3, 6, 7, 8}}, 105},
        {{{1, 2, 3, 8}}, 35},
        {{{1, 2, 3, 8}, {1, 4, 5, 8}}, 0},
        {{{1, 2, 3, 8}, {4, 5, 6, 8}}, 0},
    };
    for (const auto& [rep, expect] : reps) {
        long oracle = orbit_by_stabilizer(rep);
        CHECK(orbit_size(rep) == oracle);
        if (expect) CHECK(oracle == expect);
    }
    CHECK_THROWS_AS(orbit_size({{1, 2, 3, 7}}), Error);
    CHECK_THROWS_AS(orbit_size({{1, 1, 3, 8}}), Error);
    CHECK_THROWS_AS(orbit_size({{0, 2, 3, 8}}), Error);
}

TEST_CASE("decomposition of X(4,8)") {
    SoftDecomposition48 d;
    d.regular = Int(1272) * 1858;
    CHECK(d.regular == 2363376);
    CHECK(decomp_48(d) == 2363376);
    d.types.push_back({"I", {{1, 4, 7, 8}, {2, 5, 7, 8}, {3, 6, 7, 8}}, 105, 0});
    CHECK(decomp_48(d) == 2363376);
    d.types[0].B = 5680;
    CHECK(decomp_48(d) == 2363376 + 105 * 5680);
}

}  // TEST_SUITE
