#include "mld/mld.h"

#include "mld/arrangement.hpp"
#include "mld/critical_points.hpp"
#include "mld/discriminantal.hpp"
#include "mld/finite_field.hpp"
#include "mld/strata_euler.hpp"
#include "mld/tropical_mle.hpp"
#include "mld/valuation_learner.hpp"

#include <json.hpp>

#include <cstring>
#include <new>
#include <sstream>

using nlohmann::json;

struct mld_arrangement {
    mld::Arrangement arr;
};

struct mld_model {
    mld::LinearModel model;
    std::vector<std::string> labels;
};

struct mld_system {
    mld::LikelihoodSystem sys;
};

namespace {

thread_local std::string last_error;

mld_status to_status(mld::ErrorCode c) {
    switch (c) {
    case mld::ErrorCode::invalid_argument: return MLD_INVALID_ARGUMENT;
    case mld::ErrorCode::parse: return MLD_PARSE;
    case mld::ErrorCode::unsupported: return MLD_UNSUPPORTED;
    case mld::ErrorCode::budget: return MLD_BUDGET;
    case mld::ErrorCode::degenerate: return MLD_DEGENERATE;
    case mld::ErrorCode::numeric: return MLD_NUMERIC;
    case mld::ErrorCode::inconsistent: return MLD_INCONSISTENT;
    case mld::ErrorCode::internal: return MLD_INTERNAL;
    }
    return MLD_INTERNAL;
}

template <typename F>
mld_status guard(F&& f) {
    last_error.clear();
    try {
        f();
        return MLD_OK;
    } catch (const mld::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const json::exception& e) {
        last_error = std::string("json: ") + e.what();
        return MLD_PARSE;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return MLD_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return MLD_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit(char** out, const json& j) { *out = dup_string(j.dump()); }

json int_vec(const std::vector<mld::Int>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
}

json rat_vec(const mld::RatVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(mld::rat_str(x));
    return a;
}

json cvec(const mld::CVec& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back({z.real(), z.imag()});
    return a;
}

json summary_of(const mld::Arrangement& arr) {
    auto cp = mld::char_poly(mld::build_poset(arr));
    auto rc = mld::regions(cp);
    return {{"dim", arr.dim()},
            {"size", arr.size()},
            {"central", arr.central()},
            {"char_poly", int_vec(cp.coeffs)},
            {"char_poly_str", cp.str()},
            {"regions", {{"total", rc.total.get_str()}, {"bounded", rc.bounded.get_str()}}}};
}

mld::RatVec parse_vector(const char* text) {
    std::string s(text);
    for (auto& c : s)
        if (c == ',') c = ' ';
    std::istringstream in(s);
    mld::RatVec v;
    for (std::string tok; in >> tok;) v.push_back(mld::parse_rational(tok));
    if (v.empty()) throw mld::Error(mld::ErrorCode::parse, "empty vector");
    return v;
}

json options_of(const char* text) {
    if (!text || !*text) return json::object();
    json j = json::parse(text);
    if (!j.is_object()) throw mld::Error(mld::ErrorCode::parse, "options must be a JSON object");
    return j;
}

std::uint64_t seed_of(const json& o, const char* key = "seed") {
    return o.contains(key) ? o.at(key).get<std::uint64_t>() : mld::default_seed;
}

mld::CVec weights_of(const mld::LikelihoodSystem& sys, const json& o) {
    mld::Rng rng(seed_of(o, o.contains("weight_seed") ? "weight_seed" : "seed"));
    const auto n = sys.coords.size();
    if (!o.contains("weights") || o.at("weights") == "random") return mld::random_weights(n, rng);
    const auto& w = o.at("weights");
    if (w == "positive") return mld::positive_weights(n, rng);
    if (!w.is_array()) throw mld::Error(mld::ErrorCode::parse, "weights must be 'random', 'positive' or a list");
    mld::CVec u;
    for (const auto& z : w) {
        if (z.is_number()) u.emplace_back(z.get<double>(), 0.0);
        else u.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    }
    return u;
}

json solution_json(const mld::CriticalSolutionSet& r) {
    json pts = json::array(), res = json::array();
    for (const auto& p : r.points) pts.push_back(cvec(p));
    for (double x : r.residuals) res.push_back(x);
    return {{"points", pts},
            {"residuals", res},
            {"count", r.count},
            {"saturated", r.saturated},
            {"separation", r.separation},
            {"stats",
             {{"starts", r.starts},
              {"converged", r.converged},
              {"last_new_start", r.last_new_start},
              {"singular", r.singular},
              {"diverged", r.diverged},
              {"unconverged", r.unconverged},
              {"rejected", r.rejected}}}};
}

mld::Int int_of(const json& j) {
    if (j.is_number_integer()) return mld::Int(std::to_string(j.get<long long>()));
    return mld::Int(j.get<std::string>());
}

}  // namespace

extern "C" {

const char* mld_version(void) { return "1.0.0"; }

const char* mld_last_error(void) { return last_error.c_str(); }

const char* mld_status_name(mld_status s) {
    switch (s) {
    case MLD_OK: return "ok";
    case MLD_INVALID_ARGUMENT: return "invalid_argument";
    case MLD_PARSE: return "parse";
    case MLD_UNSUPPORTED: return "unsupported";
    case MLD_BUDGET: return "budget";
    case MLD_DEGENERATE: return "degenerate";
    case MLD_NUMERIC: return "numeric";
    case MLD_INCONSISTENT: return "inconsistent";
    case MLD_INTERNAL: return "internal";
    case MLD_NULL_POINTER: return "null_pointer";
    }
    return "unknown";
}

void mld_string_free(char* s) { std::free(s); }

void mld_set_log_level(int level) { mld::set_log_level(level); }

mld_status mld_arrangement_parse(const char* text, mld_arrangement** out) {
    if (!text || !out) return MLD_NULL_POINTER;
    return guard([&] { *out = new mld_arrangement{mld::parse_arrangement(text)}; });
}

void mld_arrangement_free(mld_arrangement* a) { delete a; }

mld_status mld_arrangement_format(const mld_arrangement* a, char** text) {
    if (!a || !text) return MLD_NULL_POINTER;
    return guard([&] { *text = dup_string(mld::format_arrangement(a->arr)); });
}

mld_status mld_arrangement_summary(const mld_arrangement* a, char** out) {
    if (!a || !out) return MLD_NULL_POINTER;
    return guard([&] { emit(out, summary_of(a->arr)); });
}

mld_status mld_arrangement_brute_regions(const mld_arrangement* a, int max_dim, size_t max_hyperplanes, char** out) {
    if (!a || !out) return MLD_NULL_POINTER;
    return guard([&] {
        mld::OracleLimits lim{max_dim, max_hyperplanes};
        auto rc = mld::brute_force_regions(a->arr, lim);
        emit(out, {{"total", rc.total.get_str()}, {"bounded", rc.bounded.get_str()}});
    });
}

mld_status mld_disc_build(int k, int m, uint64_t seed, const char* degenerate, const char* which,
                          mld_arrangement** out, char** out_json) {
    if (!out_json) return MLD_NULL_POINTER;
    return guard([&] {
        std::string w = which ? which : "B";
        if (w != "A" && w != "B" && w != "Btilde" && w != "all")
            throw mld::Error(mld::ErrorCode::invalid_argument, "which must be A, B, Btilde or all");
        mld::Rng rng(seed);
        bool degen = degenerate && *degenerate;
        mld::ConfigMatrix cfg =
            degen ? mld::degenerate_config(k, m, degenerate, rng) : mld::random_generic_config(k, m, rng);
        auto s = mld::discriminantal_summary(cfg, rng, w != "B", !degen);
        json j;
        j["k"] = k;
        j["m"] = m;
        j["seed"] = seed;
        json mat = json::array();
        for (const auto& row : cfg.entries) mat.push_back(rat_vec(row));
        j["config"] = mat;
        auto part = [](const mld::Arrangement& arr, const mld::CharPoly& cp, const mld::RegionCount& rc) {
            return json{{"size", arr.size()},
                        {"char_poly", int_vec(cp.coeffs)},
                        {"char_poly_str", cp.str()},
                        {"regions", {{"total", rc.total.get_str()}, {"bounded", rc.bounded.get_str()}}}};
        };
        j["B"] = part(s.B, s.chi_B, s.regions_B);
        if (w != "B") {
            j["A"] = part(s.A, s.chi_A, s.regions_A);
            j["Btilde"] = part(s.Btilde, s.chi_Btilde, mld::regions(s.chi_Btilde));
            j["section"] = rat_vec(s.section);
            j["identities"] = {{"decone", s.decone_matches},
                               {"restriction_identity", s.restriction_identity},
                               {"derivative_identity", s.derivative_identity}};
        }
        if (out) {
            const mld::Arrangement& pick = w == "A" ? s.A : w == "Btilde" ? s.Btilde : s.B;
            *out = new mld_arrangement{pick};
        }
        emit(out_json, j);
    });
}

mld_status mld_soft_poly(int k, long m, char** value) {
    if (!value) return MLD_NULL_POINTER;
    return guard([&] { *value = dup_string(mld::rat_str(mld::soft_poly_eval(k, m))); });
}

mld_status mld_euler_recursion(const char* constants_json, int m, char** out) {
    if (!constants_json || !out) return MLD_NULL_POINTER;
    return guard([&] {
        json c = json::parse(constants_json);
        if (c.value("k", 3) != 3) throw mld::Error(mld::ErrorCode::unsupported, "only k = 3 is supported");
        long m0 = c.at("base").at("m").get<long>();
        mld::Int chi = int_of(c.at("base").at("chi"));
        if (m < m0) throw mld::Error(mld::ErrorCode::invalid_argument, "m is below the base of the recursion");
        std::map<long, std::map<long, mld::Int>> strata;
        for (const auto& e : c.at("strata")) strata[e.at("m").get<long>()][e.at("h").get<long>()] = int_of(e.at("chi"));
        json steps = json::array();
        json table = json::object();
        table[std::to_string(m0)] = chi.get_str();
        for (long mm = m0; mm < m; ++mm) {
            // Generic fiber: bounded chambers of B(3,mm).
            mld::Rat fr = mld::soft_poly_eval(3, mm + 1);
            if (fr.get_den() != 1) throw mld::Error(mld::ErrorCode::inconsistent, "fiber count is not an integer");
            mld::Int fiber = fr.get_num();
            std::map<long, mld::Int> sc = strata.count(mm) ? strata[mm] : std::map<long, mld::Int>{};
            for (long h = 3; 2 * h <= mm; ++h)
                if (!sc.count(h))
                    throw mld::Error(mld::ErrorCode::invalid_argument,
                                     "missing constant chi(3," + std::to_string(mm) + ";" + std::to_string(h) + ")");
            json terms = json::array();
            for (const auto& [h, v] : sc)
                terms.push_back({{"h", h}, {"count", mld::stratum_count(mm, h).get_str()}, {"chi", v.get_str()}});
            mld::Int next = mld::chi_X3_recursion(mm, chi, fiber, sc);
            steps.push_back({{"m", mm}, {"chi", chi.get_str()}, {"fiber", fiber.get_str()}, {"strata", terms},
                             {"next", next.get_str()}});
            chi = next;
            table[std::to_string(mm + 1)] = chi.get_str();
        }
        json j{{"m", m}, {"chi", chi.get_str()}, {"table", table}, {"steps", steps}};
        if (c.contains("expected")) {
            bool agree = true;
            for (auto& [key, val] : table.items())
                if (c["expected"].contains(key) && c["expected"][key].get<std::string>() != val.get<std::string>())
                    agree = false;
            j["agrees_with_expected"] = agree;
        }
        emit(out, j);
    });
}

mld_status mld_euler_decomp48(const char* table_json, char** out) {
    if (!table_json || !out) return MLD_NULL_POINTER;
    return guard([&] {
        json t = json::parse(table_json);
        mld::SoftDecomposition48 d;
        mld::Int a = int_of(t.at("regular").at("chi_X47")), b = int_of(t.at("regular").at("bounded_B48"));
        d.regular = a * b;
        json types = json::array();
        bool orbits_agree = true;
        mld::Int orbit_sum = 0;
        for (const auto& e : t.at("types")) {
            mld::SoftType st;
            st.label = e.at("label").get<std::string>();
            for (const auto& q : e.at("representative")) {
                if (!q.is_array() || q.size() != 4) throw mld::Error(mld::ErrorCode::parse, "quadruples need four entries");
                st.representative.push_back({q[0].get<int>(), q[1].get<int>(), q[2].get<int>(), q[3].get<int>()});
            }
            st.A = int_of(e.at("A"));
            st.B = int_of(e.at("B"));
            mld::Int orbit = mld::orbit_size(st.representative);
            orbit_sum += orbit;
            if (orbit != st.A) orbits_agree = false;
            types.push_back({{"label", st.label}, {"A", st.A.get_str()}, {"orbit", orbit.get_str()},
                             {"B", st.B.get_str()}, {"AB", mld::Int(st.A * st.B).get_str()}});
            d.types.push_back(std::move(st));
        }
        mld::Int total = mld::decomp_48(d);
        json j{{"regular", d.regular.get_str()},
               {"types", types},
               {"orbit_sum", orbit_sum.get_str()},
               {"orbits_agree", orbits_agree},
               {"total", total.get_str()}};
        if (t.contains("target")) {
            mld::Int target = int_of(t.at("target"));
            j["target"] = target.get_str();
            j["residual"] = mld::Int(total - target).get_str();
        }
        emit(out, j);
    });
}

mld_status mld_euler_rho(const char* profile_json, char** out) {
    if (!profile_json || !out) return MLD_NULL_POINTER;
    return guard([&] {
        json p = json::parse(profile_json);
        mld::StratumProfile prof;
        for (auto& [key, val] : p.items()) {
            int h = std::stoi(key);
            int n = val.get<int>();
            if (h < 3 || n < 0) throw mld::Error(mld::ErrorCode::invalid_argument, "profile needs h >= 3 and n_h >= 0");
            if (n) prof[h] = n;
        }
        emit(out, {{"sigma", mld::sigma(prof).get_str()},
                   {"rho", mld::rho(prof)},
                   {"rho_recursive", mld::rho_recursive(prof).get_str()}});
    });
}

mld_status mld_euler_stratum_count(long m, long h, char** value) {
    if (!value) return MLD_NULL_POINTER;
    return guard([&] { *value = dup_string(mld::stratum_count(m, h).get_str()); });
}

mld_status mld_ff_formula(int m, int64_t q, char** value) {
    if (!value) return MLD_NULL_POINTER;
    return guard([&] { *value = dup_string(mld::count_formula(m, q).get_str()); });
}

mld_status mld_ff_brute(int k, int m, int64_t q, double max_tuples, unsigned threads, char** value) {
    if (!value) return MLD_NULL_POINTER;
    return guard([&] {
        mld::BruteOptions opt{max_tuples, threads};
        *value = dup_string(mld::brute_count(k, m, q, opt).get_str());
    });
}

mld_status mld_ff_euler(int m, char** value) {
    if (!value) return MLD_NULL_POINTER;
    return guard([&] { *value = dup_string(mld::euler_from_count(m).get_str()); });
}

mld_status mld_model_from_arrangement(const mld_arrangement* a, mld_model** out) {
    if (!a || !out) return MLD_NULL_POINTER;
    return guard([&] {
        auto model = mld::LinearModel::from_arrangement(a->arr);
        std::vector<std::string> labels;
        for (int i = 0; i <= model.n(); ++i) labels.push_back("p" + std::to_string(i));
        *out = new mld_model{std::move(model), std::move(labels)};
    });
}

mld_status mld_model_chy(int m, mld_model** out) {
    if (!out) return MLD_NULL_POINTER;
    return guard([&] {
        auto chy = mld::chy_model(m);
        std::vector<std::string> labels;
        for (auto [i, j] : chy.coords) labels.push_back("p" + std::to_string(i) + std::to_string(j));
        *out = new mld_model{std::move(chy.model), std::move(labels)};
    });
}

void mld_model_free(mld_model* m) { delete m; }

mld_status mld_model_info(const mld_model* m, char** out) {
    if (!m || !out) return MLD_NULL_POINTER;
    return guard([&] { emit(out, {{"d", m->model.d()}, {"n", m->model.n()}, {"labels", m->labels}}); });
}

mld_status mld_trop_critical_points(const mld_model* m, const char* w, unsigned threads, char** out) {
    if (!m || !w || !out) return MLD_NULL_POINTER;
    return guard([&] {
        mld::TropOptions opt{threads};
        auto pts = mld::trop_critical_points(m->model, parse_vector(w), opt);
        json a = json::array();
        for (const auto& p : pts) a.push_back(rat_vec(p));
        emit(out, {{"points", a}, {"count", pts.size()}, {"labels", m->labels}});
    });
}

mld_status mld_system_config(int k, int m, mld_system** out) {
    if (!out) return MLD_NULL_POINTER;
    return guard([&] { *out = new mld_system{mld::from_config(k, m)}; });
}

mld_status mld_system_linear(const mld_arrangement* a, mld_system** out) {
    if (!a || !out) return MLD_NULL_POINTER;
    return guard([&] { *out = new mld_system{mld::from_linear_model(a->arr)}; });
}

mld_status mld_system_model(const mld_model* m, mld_system** out) {
    if (!m || !out) return MLD_NULL_POINTER;
    return guard([&] {
        auto sys = mld::from_model(m->model);
        sys.coord_labels = m->labels;
        *out = new mld_system{std::move(sys)};
    });
}

mld_status mld_system_pappus(mld_system** out) {
    if (!out) return MLD_NULL_POINTER;
    return guard([&] { *out = new mld_system{mld::pappus_system()}; });
}

void mld_system_free(mld_system* s) { delete s; }

mld_status mld_system_info(const mld_system* s, char** out) {
    if (!s || !out) return MLD_NULL_POINTER;
    return guard([&] {
        json coords = json::array();
        for (const auto& p : s->sys.coords) coords.push_back(p.str(s->sys.var_names));
        emit(out, {{"vars", s->sys.vars},
                   {"var_names", s->sys.var_names},
                   {"coords", coords},
                   {"labels", s->sys.coord_labels}});
    });
}

mld_status mld_solve(const mld_system* s, const char* options_json, char** out) {
    if (!s || !out) return MLD_NULL_POINTER;
    return guard([&] {
        json o = options_of(options_json);
        mld::SolveOptions opt;
        opt.seed = seed_of(o);
        opt.budget = o.value("budget", opt.budget);
        opt.threads = o.value("threads", opt.threads);
        mld::CVec u = weights_of(s->sys, o);
        auto r = mld::solve_multistart(s->sys, u, opt);
        json j = solution_json(r);
        j["weights"] = cvec(u);
        emit(out, j);
    });
}

mld_status mld_learn(const mld_system* s, const char* weights_text, const char* starts_text,
                     const char* options_json, char** out) {
    if (!s || !weights_text || !out) return MLD_NULL_POINTER;
    return guard([&] {
        json o = options_of(options_json);
        mld::Rng rng(seed_of(o));
        auto w = mld::parse_weights(weights_text, s->sys.coords.size(), rng);
        std::vector<mld::CVec> starts;
        json start_info;
        if (starts_text) {
            starts = mld::parse_starts(starts_text, s->sys.vars);
            start_info = {{"source", "file"}, {"count", starts.size()}};
        } else {
            mld::SolveOptions so;
            so.seed = seed_of(o);
            so.budget = o.value("budget", so.budget);
            so.threads = o.value("threads", so.threads);
            auto r = mld::solve_multistart(s->sys, w.coef, so);
            starts = r.points;
            start_info = {{"source", "multistart"}, {"count", r.count}, {"saturated", r.saturated}};
        }
        mld::LearnOptions lo;
        if (o.contains("tmin")) lo.schedule = mld::schedule_to(o.at("tmin").get<double>());
        lo.denom_cap = o.value("denom_cap", lo.denom_cap);
        lo.rho_reject = o.value("rho_reject", lo.rho_reject);
        lo.threads = o.value("threads", lo.threads);
        auto res = mld::learn(s->sys, w, starts, lo);
        json clusters = json::array();
        for (const auto& c : res.clusters)
            clusters.push_back({{"q", rat_vec(c.q)}, {"multiplicity", c.multiplicity}, {"max_rho", c.max_rho},
                                {"trusted", c.trusted}});
        json paths = json::array();
        for (const auto& p : res.paths) {
            json pj{{"failed", p.failed}, {"early_exit", p.early_exit}, {"samples", p.samples}};
            if (!p.failed)
                pj.update({{"q", rat_vec(p.fit.q)}, {"slopes", p.fit.slopes}, {"intercepts", p.fit.intercepts},
                           {"max_rho", p.fit.max_rho}, {"max_mismatch", p.fit.max_mismatch}, {"trusted", p.fit.trusted}});
            paths.push_back(pj);
        }
        json coefs = json::array();
        for (const auto& z : w.coef) coefs.push_back({z.real(), z.imag()});
        emit(out, {{"clusters", clusters},
                   {"failed", res.failed},
                   {"paths", paths},
                   {"starts", start_info},
                   {"exponents", rat_vec(w.expo)},
                   {"coefficients", coefs},
                   {"schedule", {{"count", lo.schedule.size()}, {"tmin", lo.schedule.back()}}}});
    });
}

}  // extern "C"
