#include "mld/arrangement.hpp"
#include "mld/critical_points.hpp"
#include "mld/discriminantal.hpp"
#include "mld/finite_field.hpp"
#include "mld/strata_euler.hpp"
#include "mld/tropical_mle.hpp"
#include "mld/valuation_learner.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

using namespace mld;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void need(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %2d %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
}

std::string str(const Int& v) { return v.get_str(); }

CharPoly poly_of(const Arrangement& a) { return char_poly(build_poset(a)); }

Arrangement random_arrangement(int d, int n, Rng& rng, bool central, long bound) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    Arrangement a(d);
    while (static_cast<int>(a.size()) < n) {
        RatVec v(d);
        bool zero = true;
        for (auto& x : v) {
            x = dist(rng);
            zero = zero && x == 0;
        }
        if (zero) continue;
        a.add(make_hyperplane(v, central ? Rat(0) : Rat(dist(rng))));
    }
    return a;
}

RatMat random_matrix(int rows, int cols, Rng& rng, long bound) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    RatMat m(rows, RatVec(cols));
    for (auto& r : m)
        for (auto& x : r) x = dist(rng);
    return m;
}

bool uniform(const LinearModel& model) {
    for (Mask c : model.matroid().circuits())
        if (__builtin_popcountll(c) != model.d() + 2) return false;
    return true;
}

LinearModel random_model(int d, int n, Rng& rng, long bound, bool general) {
    for (;;) {
        try {
            LinearModel m = LinearModel::from_span(random_matrix(d + 1, n + 1, rng, bound));
            if (!general || uniform(m)) return m;
        } catch (const Error&) {
        }
    }
}

TropVec ints(const std::vector<long>& v) {
    TropVec out;
    for (long x : v) out.emplace_back(x);
    return out;
}

struct TableEntry {
    int k, m;
    long bounded;
};

const std::vector<TableEntry> table = {{3, 4, 2},   {3, 5, 13},  {3, 6, 42},    {3, 7, 101},
                                       {3, 8, 205}, {4, 6, 192}, {4, 7, 1858}, {5, 7, 5388}};

std::map<std::pair<int, int>, DiscSummary> builds;

const DiscSummary& build(int k, int m) {
    auto key = std::make_pair(k, m);
    auto it = builds.find(key);
    if (it != builds.end()) return it->second;
    Rng rng(default_seed + 100 * k + m);
    auto cfg = random_generic_config(k, m, rng);
    return builds.emplace(key, discriminantal_summary(cfg, rng, true)).first->second;
}

Int chi_X48_fiber_check() {
    // Strata of X(3,8) met by one extra collinear triple: 420 triples of
    // concurrent line pairs and 105 quadruples.
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
    const int p78 = np - 1;
    auto has78 = [&](const std::vector<int>& s) { return std::find(s.begin(), s.end(), p78) != s.end(); };
    StratPoset p;
    int y = p.add("X(3,8)", 188112, 15);
    std::vector<int> tid;
    for (const auto& t : triples) tid.push_back(p.add("T", -81040, has78(t) ? 14 : 15));
    for (int t : tid) p.relate(t, y);
    for (const auto& q : quads) {
        int id = p.add("Q", 18768, has78(q) ? 13 : 15);
        for (std::size_t i = 0; i < triples.size(); ++i)
            if (std::includes(q.begin(), q.end(), triples[i].begin(), triples[i].end())) p.relate(id, tid[i]);
    }
    p.finalize();
    return chi_total(p).deficit;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::invalid_argument, "cannot open " + path);
    return nlohmann::json::parse(in);
}

}  // namespace

int main() {
    set_log_level(6);

    criterion(1, "characteristic polynomials of A, B, B~ for (3,4)", [] {
        Outcome o;
        const auto& s = build(3, 4);
        o.need(s.chi_A.str() == "t^2 - 6t + 11", "chi_A = " + s.chi_A.str());
        o.need(s.chi_B.str() == "t^2 - 5t + 6", "chi_B = " + s.chi_B.str());
        o.need(s.chi_Btilde.str() == "t^3 - 6t^2 + 11t - 6", "chi_B~ = " + s.chi_Btilde.str());
        o.need(s.regions_A.total == 18 && s.regions_A.bounded == 6, "regions of A");
        o.need(s.regions_B.total == 12 && s.regions_B.bounded == 2, "regions of B");
        return o;
    });

    criterion(2, "bounded region counts of B(k,m)", [] {
        Outcome o;
        std::ostringstream os;
        for (const auto& e : table) {
            const auto& s = build(e.k, e.m);
            os << "(" << e.k << "," << e.m << ")=" << str(s.regions_B.bounded) << " ";
            o.need(s.regions_B.bounded == e.bounded, "B(" + std::to_string(e.k) + "," + std::to_string(e.m) + ") = " +
                                                         str(s.regions_B.bounded));
        }
        if (o.pass) o.detail = os.str();
        return o;
    });

    criterion(3, "soft polynomials reproduce the bounded counts", [] {
        Outcome o;
        for (int k : {3, 4}) o.need(soft_poly_coefficients(k).size() == std::size_t((k - 1) * (k - 1) + 1), "degree");
        for (const auto& e : table) {
            if (e.k > 4) continue;
            Rat v = soft_poly_eval(e.k, e.m + 1);
            o.need(v == Rat(e.bounded), "P" + std::to_string(e.k) + "(" + std::to_string(e.m + 1) + ") = " + v.get_str());
        }
        o.need(soft_poly_eval(4, 8) == 1858, "P4(8)");
        return o;
    });

    criterion(4, "deconing and Betti identities", [] {
        Outcome o;
        for (const auto& e : table) {
            const auto& s = build(e.k, e.m);
            std::string tag = "(" + std::to_string(e.k) + "," + std::to_string(e.m) + ")";
            o.need(s.decone_matches, "decone " + tag);
            o.need(s.restriction_identity, "chi_A identity " + tag);
            o.need(s.derivative_identity, "chi_B(1) identity " + tag);
        }
        Rng rng(50);
        for (int trial = 0; trial < 50; ++trial) {
            int d = 2 + trial % 2;
            int n = 3 + trial % 8;
            auto a = random_arrangement(d, n, rng, true, 3);
            RatVec e1(d, Rat(0));
            e1[0] = 1;
            a.add(make_hyperplane(e1, 0));
            auto dc = decone(poly_of(a));
            Arrangement aff(d - 1);
            for (const auto& h : a.hyperplanes()) {
                RatVec v(h.normal.begin() + 1, h.normal.end());
                if (std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; })) continue;
                aff.add(make_hyperplane(v, -h.normal[0]));
            }
            o.need(decone_identity(dc.affine, dc.restriction) && poly_of(aff) == dc.affine,
                   "random central " + std::to_string(trial));
        }
        return o;
    });

    criterion(5, "region counts agree with cell enumeration", [] {
        Outcome o;
        Rng rng(default_seed);
        for (int trial = 0; trial < 25; ++trial) {
            int d = 1 + trial % 3;
            int n = d == 3 ? 4 + trial % 5 : 3 + trial % 10;
            auto a = random_arrangement(d, n, rng, false, 3);
            auto r = regions(poly_of(a));
            auto b = brute_force_regions(a, {3, 20});
            o.need(r.total == b.total && r.bounded == b.bounded, "trial " + std::to_string(trial));
        }
        return o;
    });

    criterion(6, "Euler characteristic recursion for X(3,m)", [] {
        Outcome o;
        Int x5 = chi_X3_recursion(5, 2, 13, {});
        Int x6 = chi_X3_recursion(6, 26, 42, {{3, -12}});
        Int x7 = chi_X3_recursion(7, 1272, 101, {{3, -568}});
        Int x8 = chi_X3_recursion(8, 188112, 205, {{3, -81040}, {4, 18768}});
        o.need(x5 == 26 && x6 == 1272 && x7 == 188112 && x8 == 74570400,
               "recursion " + str(x5) + " " + str(x6) + " " + str(x7) + " " + str(x8));
        Int deficit = chi_X48_fiber_check();
        o.need(deficit == 6750000, "fiber deficit total " + str(deficit));
        return o;
    });

    criterion(7, "rho and sigma over all profiles up to weight 12", [] {
        Outcome o;
        auto all = enumerate_profiles(12);
        for (const auto& n : all) {
            int r = rho(n);
            o.need(r >= -1 && r <= 1 && rho_recursive(n) == r, "profile of size " + std::to_string(n.size()));
        }
        o.need(sigma({{4, 1}}) == 3 && rho({{4, 1}}) == -1, "single quadruple point");
        o.detail = o.pass ? std::to_string(all.size()) + " profiles" : o.detail;
        return o;
    });

    criterion(8, "point counts over finite fields", [] {
        Outcome o;
        BruteOptions opt;
        for (long q : {5L, 7L, 11L, 13L})
            for (int m : {6, 7}) {
                Int f = count_formula(m, q), b = brute_count(3, m, q, opt);
                o.need(f == b, "m=" + std::to_string(m) + " q=" + std::to_string(q) + ": " + str(f) + " vs " + str(b));
            }
        const std::vector<std::pair<int, long>> euler = {{6, 26}, {7, 1272}, {8, 188112}, {9, 74570400}};
        for (auto [m, e] : euler) o.need(euler_from_count(m) == e, "euler m=" + std::to_string(m));
        return o;
    });

    criterion(9, "tropical critical points", [] {
        Outcome o;
        auto chy = chy_model(6);
        auto w = ints({12, 6, 9, 12, 5, 1, 10, 11, 3});
        auto pts = trop_critical_points(chy.model, w);
        const std::set<TropVec> expect = {ints({0, 0, 8, 4, 2, 0, 2, 0, 0}), ints({0, 5, 2, 2, 0, 0, 0, 0, 2}),
                                          ints({1, 0, 8, 0, 2, 0, 0, 1, 0}), ints({2, 5, 2, 0, 0, 0, 2, 3, 2}),
                                          ints({7, 5, 2, 0, 0, 0, 5, 2, 2}), ints({9, 0, 8, 0, 2, 0, 0, 8, 0})};
        o.need(pts.size() == 6 && std::set<TropVec>(pts.begin(), pts.end()) == expect, "X(2,6) points");
        Rng rng(2024);
        for (int trial = 0; trial < 20; ++trial) {
            int n = 3 + trial % 5;
            int d = 1 + trial % (n - 1);
            auto model = random_model(d, n, rng, 9, true);
            std::uniform_int_distribution<long> dist(1, 40);
            TropVec v(n + 1);
            for (int i = 1; i <= n; ++i) v[i] = dist(rng);
            v = perturb(v, rng);
            v[0] = 0;
            auto a = trop_critical_points(model, v);
            auto b = corollary_points(n, d, v);
            o.need(std::set<TropVec>(a.begin(), a.end()) == std::set<TropVec>(b.begin(), b.end()) &&
                       Int(b.size()) == binomial(n, d),
                   "general model " + std::to_string(trial));
        }
        std::set<int> seen;
        for (int trial = 0; trial < 8; ++trial) {
            int n = 3 + trial % 3;
            int d = 1 + trial % (n - 1);
            LinearModel model = trial == 0 ? chy_model(5).model : random_model(d, n, rng, 2, false);
            const Mask low = (Mask(1) << (model.n() + 1)) - 1;
            for (const auto& f : model.matroid().flags(model.d())) {
                if (!f.empty() && (f.back() & ~low)) continue;
                for (const auto& g : model.perp_matroid().flags(model.n() - model.d())) {
                    int det = flag_determinant(model.matroid(), model.perp_matroid(), f, g);
                    o.need(det >= -1 && det <= 1, "flag determinant " + std::to_string(det));
                    seen.insert(det);
                }
            }
        }
        o.need(seen.size() == 3, "determinant values seen");
        int done = 0;
        Rng arng(77);
        for (int trial = 0; done < 10 && trial < 100; ++trial) {
            int d = 1 + trial % 2;
            auto arr = random_arrangement(d, 3 + trial % 4, arng, false, 4);
            LinearModel* model = nullptr;
            std::optional<LinearModel> holder;
            try {
                holder.emplace(LinearModel::from_arrangement(arr));
                model = &*holder;
            } catch (const Error&) {
                continue;
            }
            std::uniform_int_distribution<long> wd(0, 30);
            TropVec v(model->n() + 1);
            for (auto& x : v) x = wd(arng);
            v = perturb(v, arng);
            auto bounded = regions(poly_of(model->arrangement())).bounded;
            o.need(Int(trop_critical_points(*model, v).size()) == bounded, "count law " + std::to_string(done));
            ++done;
        }
        o.need(done == 10, "count law cases");
        return o;
    });

    criterion(10, "numerical critical point counts", [] {
        Outcome o;
        auto count = [&](const LikelihoodSystem& sys, const CVec& u, int budget, std::size_t expect,
                         const std::string& tag) {
            SolveOptions opt;
            opt.budget = budget;
            auto r = solve_multistart(sys, u, opt);
            o.need(r.count == expect && r.saturated,
                   tag + " = " + std::to_string(r.count) + (r.saturated ? "" : " unsaturated"));
            return r;
        };
        Rng rng(default_seed);
        count(from_config(2, 5), random_weights(5, rng), 600, 2, "X(2,5)");
        auto s26 = from_config(2, 6);
        count(s26, random_weights(s26.coords.size(), rng), 600, 6, "X(2,6)");
        auto s36 = from_config(3, 6);
        count(s36, random_weights(s36.coords.size(), rng), 8000, 26, "X(3,6)");
        count(pappus_system(), random_weights(7, rng), 1000, 8, "Pappus");
        for (int m : {4, 5}) {
            Rng r2(m);
            auto arr = build_B(random_generic_config(3, m, r2));
            auto bounded = regions(poly_of(arr)).bounded;
            auto res = count(from_linear_model(arr), positive_weights(arr.size(), r2), 1000, bounded.get_ui(),
                             "B(3," + std::to_string(m) + ")");
            for (const auto& x : res.points)
                for (const auto& z : x) o.need(std::abs(z.imag()) < 1e-9, "non-real point");
        }
        return o;
    });

    criterion(11, "learned valuations on X(2,6)", [] {
        Outcome o;
        auto chy = chy_model(6);
        auto sys = from_model(chy.model);
        const auto w = ints({12, 6, 9, 12, 5, 1, 10, 11, 3});
        Rng rng(default_seed);
        auto pw = parametric_weights(w, rng);
        SolveOptions so;
        so.budget = 400;
        auto starts = solve_multistart(sys, pw.coef, so);
        o.need(starts.count == 6, "start count " + std::to_string(starts.count));
        LearnOptions lo;
        lo.schedule = schedule_to(1e-6);
        auto r = learn(sys, pw, starts.points, lo);
        auto trop = trop_critical_points(chy.model, w);
        std::set<TropVec> learned;
        double max_rho = 0;
        for (const auto& c : r.clusters) {
            learned.insert(c.q);
            o.need(c.multiplicity == 1, "multiplicity " + std::to_string(c.multiplicity));
            max_rho = std::max(max_rho, c.max_rho);
        }
        o.need(learned == std::set<TropVec>(trop.begin(), trop.end()), "learned set differs");
        o.need(max_rho < 0.2, "max rho " + std::to_string(max_rho));
        o.need(r.failed == 0, "failed paths " + std::to_string(r.failed));
        return o;
    });

    const auto table48 = [] {
        auto j = read_json(std::string(MLD_DATA_DIR) + "/decomp48.json");
        SoftDecomposition48 d;
        d.regular = Int(j["regular"]["chi_X47"].get<std::string>()) * Int(j["regular"]["bounded_B48"].get<std::string>());
        for (const auto& t : j["types"]) {
            SoftType s;
            s.label = t["label"];
            for (const auto& q : t["representative"]) s.representative.push_back(q.get<Quadruple>());
            s.A = Int(t["A"].get<std::string>());
            s.B = Int(t["B"].get<std::string>());
            d.types.push_back(s);
        }
        return std::make_pair(d, Int(j["target"].get<std::string>()));
    };

    criterion(12, "orbit sizes of the soft types", [&] {
        Outcome o;
        auto [d, target] = table48();
        Int sum = 0;
        for (const auto& t : d.types) {
            Int orbit = orbit_size(t.representative);
            o.need(orbit == t.A, "type " + t.label + " orbit " + str(orbit));
            sum += orbit;
        }
        o.need(sum == 3150, "orbit sum " + str(sum));
        return o;
    });

    criterion(13, "regular part of the X(4,8) decomposition", [&] {
        Outcome o;
        auto [d, target] = table48();
        o.need(d.regular == 2363376, "regular part " + str(d.regular));
        Int total = decomp_48(d);
        o.detail += (o.detail.empty() ? "" : "; ") + std::string("total ") + str(total) + ", target " + str(target) + ", residual " + str(Int(total - target));
        return o;
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
