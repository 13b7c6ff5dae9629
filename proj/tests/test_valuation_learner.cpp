#include <doctest.h>

#include "mld/valuation_learner.hpp"

#include <cmath>
#include <functional>
#include <set>

using namespace mld;

namespace {

PathSample synthetic(const std::vector<double>& t, const std::vector<std::function<double(double)>>& f) {
    PathSample s;
    s.t = t;
    for (double x : t) {
        std::vector<double> row;
        for (const auto& g : f) row.push_back(std::log(std::abs(g(x))));
        s.log_abs.push_back(row);
        s.residuals.push_back(0);
    }
    return s;
}

RatVec rats(const std::vector<long>& v) {
    RatVec out;
    for (long x : v) out.emplace_back(x);
    return out;
}

struct Setup {
    LikelihoodSystem sys;
    ParametricWeights w;
    std::vector<CVec> starts;
};

Setup chy_setup(int m, const RatVec& expo, std::uint64_t seed) {
    Setup s;
    s.sys = from_model(chy_model(m).model);
    Rng rng(seed);
    s.w = parametric_weights(expo, rng);
    SolveOptions opt;
    opt.budget = 600;
    auto r = solve_multistart(s.sys, s.w.coef, opt);
    s.starts = r.points;
    return s;
}

std::set<RatVec> cluster_set(const LearnResult& r) {
    std::set<RatVec> out;
    for (const auto& c : r.clusters) out.insert(c.q);
    return out;
}

}  // namespace

TEST_SUITE("valuation_learner") {

TEST_CASE("continued fraction rounding") {
    auto a = rationalize(1.9987, 32);
    CHECK(a.value == 2);
    CHECK(a.mismatch == doctest::Approx(0.0013).epsilon(1e-6));
    CHECK(rationalize(0.5, 32).value == Rat(1, 2));
    CHECK(rationalize(1.0 / 3.0, 32).value == Rat(1, 3));
    CHECK(rationalize(-1.25, 32).value == Rat(-5, 4));
    CHECK(rationalize(3.14159265358979, 32).value == Rat(22, 7));
    CHECK(rationalize(3.14159265358979, 200).value == Rat(355, 113));
    CHECK(rationalize(0.0, 1).value == 0);
    CHECK(rationalize(2.4, 1).value == 2);
    CHECK_THROWS_AS(rationalize(1.0, 0), Error);
    CHECK_THROWS_AS(rationalize(std::nan(""), 8), Error);
}

TEST_CASE("schedules") {
    auto d = default_schedule();
    REQUIRE(d.size() == 25);
    CHECK(d[0] == doctest::Approx(0.1));
    CHECK(d[1] == doctest::Approx(0.08));
    CHECK(d.back() == doctest::Approx(0.1 * std::pow(0.8, 24)));
    auto s = schedule_to(1e-6);
    CHECK(s.back() >= 1e-6);
    CHECK(s.back() * 0.8 < 1e-6);
    CHECK(geometric_schedule(3, 0.5, 0.5) == std::vector<double>{0.5, 0.25, 0.125});
    CHECK_THROWS_AS(schedule_to(2.0), Error);
}

TEST_CASE("fits of exact monomials") {
    auto t = default_schedule();
    auto s = synthetic(t, {[](double x) { return 3 * x * x; }, [](double x) { return 2 * std::sqrt(x); },
                           [](double) { return 0.25; }, [](double x) { return 5 / x; }});
    auto r = fit_valuations(s, 32);
    CHECK(r.q == RatVec{2, Rat(1, 2), 0, -1});
    CHECK(r.intercepts[0] == doctest::Approx(std::log(3.0)));
    CHECK(r.intercepts[1] == doctest::Approx(std::log(2.0)));
    for (double x : r.rho) CHECK(x < 1e-20);
    CHECK(r.max_mismatch < 1e-9);
    CHECK(r.trusted);
    // Slope 1/2 needs a denominator cap of at least two.
    CHECK(fit_valuations(s, 2).q[1] == Rat(1, 2));
    CHECK(fit_valuations(s, 1).q[1] != Rat(1, 2));
}

TEST_CASE("higher order terms bend the fitted line") {
    auto t = default_schedule();
    auto s = synthetic(t, {[](double x) { return std::sqrt(x) * (1 + x); }});
    auto r = fit_valuations(s, 32);
    CHECK(r.q[0] == Rat(1, 2));
    CHECK(r.rho[0] > 0);
    CHECK(r.slopes[0] > 0.5);
    CHECK(r.trusted == (r.max_mismatch <= default_mismatch_tol));
}

TEST_CASE("rational slopes are recovered for every cap above the denominator") {
    auto t = default_schedule();
    for (long den = 1; den <= 12; ++den)
        for (long num = -2 * den; num <= 3 * den; num += 5) {
            const double e = double(num) / den;
            auto s = synthetic(t, {[e](double x) { return 1.7 * std::pow(x, e); }});
            for (long cap : {den, den + 3, 32L}) {
                auto r = fit_valuations(s, cap);
                CHECK(r.q[0] == Rat(num) / den);
            }
        }
}

TEST_CASE("near-integer slopes are flagged") {
    auto t = default_schedule();
    auto s = synthetic(t, {[](double x) { return std::pow(x, 1.9987); }});
    auto r = fit_valuations(s, 32);
    CHECK(r.q[0] == 2);
    CHECK_FALSE(r.trusted);
    CHECK(r.max_mismatch > 1e-3);
}

TEST_CASE("noisy samples are flagged by the regression error") {
    auto t = default_schedule();
    int i = 0;
    auto s = synthetic(t, {[&i](double x) { return x * std::exp((i++ % 2) ? 1.5 : -1.5); }});
    auto r = fit_valuations(s, 32, 1.0);
    CHECK(r.max_rho > 1.0);
    CHECK_FALSE(r.trusted);
}

TEST_CASE("too few samples") {
    auto s = synthetic(geometric_schedule(7), {[](double x) { return x; }});
    CHECK_THROWS_AS(fit_valuations(s, 32), Error);
}

TEST_CASE("weights and starts files") {
    Rng rng(1);
    auto w = parse_weights("# exponents\n1\n0 1.5 0.5\n1/2\n", 3, rng);
    CHECK(w.expo == RatVec{1, 0, Rat(1, 2)});
    CHECK(w.coef[1] == Cplx(1.5, 0.5));
    CHECK(std::abs(w.coef[0]) > 0);
    CHECK_THROWS_AS(parse_weights("1\n2\n", 3, rng), Error);
    CHECK_THROWS_AS(parse_weights("1 2\n2\n3\n", 3, rng), Error);
    CHECK_THROWS_AS(parse_weights("1\n0 0 0\n3\n", 3, rng), Error);
    auto st = parse_starts("1,0;0.5,-2\n\n3,1;4,1\n", 2);
    REQUIRE(st.size() == 2);
    CHECK(st[0][1] == Cplx(0.5, -2));
    CHECK_THROWS_AS(parse_starts("1,0\n", 2), Error);
    CHECK_THROWS_AS(parse_starts("1;2\n", 2), Error);
}

TEST_CASE("constant weights do not move the critical points") {
    auto s = chy_setup(5, rats({0, 0, 0, 0, 0}), 3);
    REQUIRE(s.starts.size() == 2);
    auto path = track(s.sys, s.w, s.starts[0], default_schedule());
    CHECK(path.t.size() == 25);
    CHECK_FALSE(path.early_exit);
    auto fit = fit_valuations(path);
    CHECK(fit.q == RatVec(5, Rat(0)));
    auto r = learn(s.sys, s.w, s.starts);
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.clusters[0].q == RatVec(5, Rat(0)));
    CHECK(r.clusters[0].multiplicity == 2);
    CHECK(r.failed == 0);
}

TEST_CASE("learned valuations match the tropical critical points") {
    const RatVec w = rats({3, 1, 4, 7, 5});
    auto s = chy_setup(5, w, 4);
    REQUIRE(s.starts.size() == 2);
    LearnOptions opt;
    opt.schedule = schedule_to(1e-6);
    auto r = learn(s.sys, s.w, s.starts, opt);
    auto trop = trop_critical_points(chy_model(5).model, w);
    CHECK(cluster_set(r) == std::set<RatVec>(trop.begin(), trop.end()));
    int total = r.failed;
    for (const auto& c : r.clusters) {
        CHECK(c.multiplicity == 1);
        CHECK(c.max_rho < 0.2);
        total += c.multiplicity;
    }
    CHECK(total == int(s.starts.size()));
    // Halving the last sample point changes no slope.
    opt.schedule = schedule_to(5e-7);
    CHECK(cluster_set(learn(s.sys, s.w, s.starts, opt)) == cluster_set(r));
}

TEST_CASE("multiplicities and failures add up") {
    auto arr = parse_arrangement("2 5 affine\n1 0 0\n0 1 0\n1 1 1\n1 -1 2\n2 1 5\n");
    auto sys = from_linear_model(arr);
    Rng rng(2);
    auto w = parametric_weights(rats({0, 0, 0, 0, 1}), rng);
    SolveOptions so;
    so.budget = 600;
    auto starts = solve_multistart(sys, w.coef, so).points;
    REQUIRE_FALSE(starts.empty());
    auto r = learn(sys, w, starts);
    int total = r.failed;
    for (const auto& c : r.clusters) total += c.multiplicity;
    CHECK(total == int(starts.size()));
    CHECK(r.paths.size() == starts.size());
}

TEST_CASE("tracking input validation") {
    auto s = chy_setup(5, rats({1, 2, 3, 4, 5}), 6);
    REQUIRE_FALSE(s.starts.empty());
    CVec bad(s.starts[0].size(), Cplx(0.3, 0.1));
    CHECK_THROWS_AS(track(s.sys, s.w, bad, default_schedule()), std::exception);
    CHECK_THROWS_AS(track(s.sys, s.w, s.starts[0], {0.1, 0.2}), Error);
    CHECK_THROWS_AS(track(s.sys, s.w, s.starts[0], {0.1, -0.2}), Error);
    CHECK_THROWS_AS(track(s.sys, s.w, CVec(1), default_schedule()), Error);
}

}  // TEST_SUITE
