#include "mld/mld.h"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr const char* schema = "mld.cli/1";
constexpr std::uint64_t default_seed = 20240601;

// Exit codes: 0 agreement, 1 usage or input error, 2 numeric disagreement.
struct Failure {
    int code;
    std::string message;
};

std::string take(char* s) {
    std::string out = s ? s : "";
    mld_string_free(s);
    return out;
}

void check(mld_status st) {
    if (st != MLD_OK) throw Failure{1, std::string(mld_status_name(st)) + ": " + mld_last_error()};
}

json call_json(mld_status st, char*& out) {
    check(st);
    return json::parse(take(out));
}

std::string call_str(mld_status st, char*& out) {
    check(st);
    return take(out);
}

template <typename T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
};

using Arr = Handle<mld_arrangement, mld_arrangement_free>;
using Model = Handle<mld_model, mld_model_free>;
using System = Handle<mld_system, mld_system_free>;

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Failure{1, "sha256 failed"};
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

struct Context {
    bool json_out = false;
    bool quiet = false;
    std::uint64_t seed = default_seed;
    unsigned threads = 1;
    int budget = 0;  // 0: command default
    std::string command_line;
    json inputs = json::array();

    std::string read_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Failure{1, "cannot read " + path};
        std::stringstream ss;
        ss << in.rdbuf();
        std::string data = ss.str();
        inputs.push_back({{"path", path}, {"sha256", sha256_hex(data)}});
        return data;
    }

    int budget_or(int fallback) const { return budget > 0 ? budget : fallback; }

    void text(const std::string& line) const {
        if (!json_out && !quiet) std::cout << line << "\n";
    }
};

std::string join(const json& arr, const char* sep = ", ") {
    std::string s;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i) s += sep;
        s += arr[i].is_string() ? arr[i].get<std::string>() : arr[i].dump();
    }
    return s;
}

std::string vec_str(const json& arr) { return "(" + join(arr) + ")"; }

// --- disc -------------------------------------------------------------------

struct DiscArgs {
    int k = 3, m = 5;
    std::string degenerate, which = "all", out;
};

json run_disc(Context& ctx, const DiscArgs& a) {
    Arr arr;
    char* out = nullptr;
    json s = call_json(mld_disc_build(a.k, a.m, ctx.seed, a.degenerate.c_str(), a.which.c_str(), &arr.p, &out), out);
    char* text = nullptr;
    std::string file = call_str(mld_arrangement_format(arr.p, &text), text);
    if (!a.out.empty()) {
        std::ofstream f(a.out);
        if (!f) throw Failure{1, "cannot write " + a.out};
        f << file;
    } else {
        ctx.text(file);
    }
    for (const char* part : {"A", "B", "Btilde"}) {
        if (!s.contains(part)) continue;
        const auto& p = s[part];
        ctx.text(std::string(part) + "(" + std::to_string(a.k) + "," + std::to_string(a.m) + "): " +
                 p["char_poly_str"].get<std::string>() + "  regions " + p["regions"]["total"].get<std::string>() +
                 " bounded " + p["regions"]["bounded"].get<std::string>());
    }
    if (s.contains("identities")) ctx.text("identities: " + s["identities"].dump());
    s["arrangement"] = file;
    return s;
}

// --- euler ------------------------------------------------------------------

json run_euler_recursion(Context& ctx, int k, int m, const std::string& constants, int& exit_code) {
    if (k != 3) throw Failure{1, "euler recursion supports k = 3 only"};
    std::string data = ctx.read_file(constants);
    char* out = nullptr;
    json r = call_json(mld_euler_recursion(data.c_str(), m, &out), out);
    for (const auto& [key, val] : r["table"].items()) ctx.text("chi(X(3," + key + ")) = " + val.get<std::string>());
    if (r.contains("agrees_with_expected") && !r["agrees_with_expected"].get<bool>()) {
        exit_code = 2;
        ctx.text("disagreement with the expected table");
    }
    return r;
}

json run_euler_decomp48(Context& ctx, const std::string& table, int& exit_code) {
    std::string data = ctx.read_file(table);
    char* out = nullptr;
    json r = call_json(mld_euler_decomp48(data.c_str(), &out), out);
    for (const auto& t : r["types"])
        ctx.text(t["label"].get<std::string>() + ": A " + t["A"].get<std::string>() + " (orbit " +
                 t["orbit"].get<std::string>() + ") B " + t["B"].get<std::string>());
    ctx.text("regular " + r["regular"].get<std::string>() + ", total " + r["total"].get<std::string>());
    if (r.contains("residual"))
        ctx.text("target " + r["target"].get<std::string>() + ", residual " + r["residual"].get<std::string>());
    if (!r["orbits_agree"].get<bool>()) exit_code = 2;
    return r;
}

// --- ffcount ----------------------------------------------------------------

json run_ffcount(Context& ctx, int k, int m, long q, bool brute, bool euler, int& exit_code) {
    json r{{"k", k}, {"m", m}};
    char* out = nullptr;
    if (euler) {
        r["euler"] = call_str(mld_ff_euler(m, &out), out);
        ctx.text("chi(X(3," + std::to_string(m) + ")) from the point count: " + r["euler"].get<std::string>());
        return r;
    }
    r["q"] = q;
    if (k == 3) {
        r["formula"] = call_str(mld_ff_formula(m, q, &out), out);
        ctx.text("formula: " + r["formula"].get<std::string>());
    }
    if (brute) {
        double cap = ctx.budget > 0 ? static_cast<double>(ctx.budget) : 1e8;
        r["oracle"] = call_str(mld_ff_brute(k, m, q, cap, ctx.threads, &out), out);
        ctx.text("brute force: " + r["oracle"].get<std::string>());
        if (r.contains("formula")) {
            bool agree = r["formula"] == r["oracle"];
            r["agree"] = agree;
            ctx.text(agree ? "agree" : "DISAGREE");
            if (!agree) exit_code = 2;
        }
    }
    return r;
}

// --- tropmle ----------------------------------------------------------------

json run_tropmle(Context& ctx, const std::string& model_file, int chy, const std::string& w) {
    Model model;
    if (!model_file.empty()) {
        Arr arr;
        std::string data = ctx.read_file(model_file);
        check(mld_arrangement_parse(data.c_str(), &arr.p));
        check(mld_model_from_arrangement(arr.p, &model.p));
    } else if (chy > 0) {
        check(mld_model_chy(chy, &model.p));
    } else {
        throw Failure{1, "tropmle needs --model or --chy"};
    }
    char* out = nullptr;
    json r = call_json(mld_trop_critical_points(model.p, w.c_str(), ctx.threads, &out), out);
    ctx.text(std::to_string(r["count"].get<int>()) + " tropical critical points");
    for (const auto& p : r["points"]) ctx.text("  " + vec_str(p));
    return r;
}

// --- systems ----------------------------------------------------------------

void make_system(Context& ctx, const std::vector<std::string>& spec, System& sys) {
    if (spec.empty()) throw Failure{1, "--system is required"};
    const std::string& kind = spec[0];
    auto num = [&](std::size_t i) {
        if (i >= spec.size()) throw Failure{1, "--system " + kind + " needs more arguments"};
        try {
            return std::stoi(spec[i]);
        } catch (const std::exception&) {
            throw Failure{1, "not an integer: " + spec[i]};
        }
    };
    if (kind == "config") {
        check(mld_system_config(num(1), num(2), &sys.p));
    } else if (kind == "pappus") {
        check(mld_system_pappus(&sys.p));
    } else if (kind == "linear") {
        if (spec.size() < 2) throw Failure{1, "--system linear needs a file"};
        Arr arr;
        std::string data = ctx.read_file(spec[1]);
        check(mld_arrangement_parse(data.c_str(), &arr.p));
        check(mld_system_linear(arr.p, &sys.p));
    } else if (kind == "chy") {
        Model model;
        check(mld_model_chy(num(1), &model.p));
        check(mld_system_model(model.p, &sys.p));
    } else {
        throw Failure{1, "unknown system kind '" + kind + "' (config K M | linear FILE | pappus | chy M)"};
    }
}

json solve(Context& ctx, const mld_system* sys, const std::string& weights, int budget) {
    json o{{"seed", ctx.seed}, {"budget", budget}, {"threads", ctx.threads}, {"weights", weights}};
    char* out = nullptr;
    return call_json(mld_solve(sys, o.dump().c_str(), &out), out);
}

json run_critpts(Context& ctx, const std::vector<std::string>& spec, const std::string& weights) {
    System sys;
    make_system(ctx, spec, sys);
    json r = solve(ctx, sys.p, weights, ctx.budget_or(2000));
    ctx.text("count " + std::to_string(r["count"].get<int>()) + (r["saturated"].get<bool>() ? " (saturated)" : " (not saturated)"));
    for (const auto& p : r["points"]) {
        std::string line = " ";
        for (const auto& z : p) {
            std::ostringstream os;
            os.precision(10);
            os << " " << z[0].get<double>() << (z[1].get<double>() < 0 ? "-" : "+") << std::abs(z[1].get<double>()) << "i";
            line += os.str();
        }
        ctx.text(line);
    }
    return r;
}

json learn(Context& ctx, const mld_system* sys, const std::string& weights, const std::string* starts, double tmin,
           long denom_cap, int budget) {
    json o{{"seed", ctx.seed}, {"budget", budget}, {"threads", ctx.threads}, {"tmin", tmin}, {"denom_cap", denom_cap}};
    char* out = nullptr;
    return call_json(mld_learn(sys, weights.c_str(), starts ? starts->c_str() : nullptr, o.dump().c_str(), &out), out);
}

json run_valuations(Context& ctx, const std::vector<std::string>& spec, const std::string& weights_file,
                    const std::string& starts_file, double tmin, long denom_cap) {
    System sys;
    make_system(ctx, spec, sys);
    std::string weights = ctx.read_file(weights_file);
    std::string starts;
    if (!starts_file.empty()) starts = ctx.read_file(starts_file);
    json r = learn(ctx, sys.p, weights, starts_file.empty() ? nullptr : &starts, tmin, denom_cap, ctx.budget_or(2000));
    for (const auto& c : r["clusters"]) {
        std::ostringstream os;
        os << vec_str(c["q"]) << "  multiplicity " << c["multiplicity"].get<int>() << "  max rho " << c["max_rho"].get<double>()
           << (c["trusted"].get<bool>() ? "" : "  (untrusted)");
        ctx.text(os.str());
    }
    ctx.text("failed paths: " + std::to_string(r["failed"].get<int>()));
    return r;
}

// --- crosscheck -------------------------------------------------------------

struct Check {
    json items = json::array();
    bool ok = true;

    void add(const std::string& name, bool pass, json detail) {
        items.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
        ok = ok && pass;
    }
};

std::string data_path(const char* name) { return std::string(MLD_DATA_DIR) + "/" + name; }

void check_x36(Context& ctx, Check& c) {
    char* out = nullptr;
    std::string ff = call_str(mld_ff_euler(6, &out), out);
    std::string consts = ctx.read_file(data_path("strata_constants.json"));
    json rec = call_json(mld_euler_recursion(consts.c_str(), 6, &out), out);
    System sys;
    check(mld_system_config(3, 6, &sys.p));
    json cp = solve(ctx, sys.p, "random", ctx.budget_or(8000));
    int count = cp["count"].get<int>();
    bool sat = cp["saturated"].get<bool>();
    c.add("finite_field", ff == "26", {{"value", ff}});
    c.add("strata_recursion", rec["chi"] == "26", {{"value", rec["chi"]}});
    c.add("critical_points", count == 26 && sat, {{"count", count}, {"saturated", sat}, {"stats", cp["stats"]}});
}

const std::vector<std::tuple<int, int, const char*>> table1 = {
    {3, 4, "2"}, {3, 5, "13"}, {3, 6, "42"}, {3, 7, "101"}, {3, 8, "205"}, {4, 6, "192"}, {4, 7, "1858"}, {5, 7, "5388"}};

void check_table1(Context& ctx, Check& c) {
    for (auto [k, m, expect] : table1) {
        char* out = nullptr;
        json s = call_json(mld_disc_build(k, m, ctx.seed, nullptr, "B", nullptr, &out), out);
        std::string bounded = s["B"]["regions"]["bounded"];
        json detail{{"bounded", bounded}, {"reference", expect}};
        bool pass = bounded == expect;
        if (k == 3 || k == 4) {
            std::string soft = call_str(mld_soft_poly(k, m + 1, &out), out);
            detail["soft_poly"] = soft;
            pass = pass && soft == expect;
        }
        c.add("B(" + std::to_string(k) + "," + std::to_string(m) + ")", pass, detail);
    }
}

void check_theorem51(Context& ctx, Check& c) {
    std::string consts = ctx.read_file(data_path("strata_constants.json"));
    char* out = nullptr;
    json rec = call_json(mld_euler_recursion(consts.c_str(), 9, &out), out);
    c.add("recursion_table", rec.value("agrees_with_expected", false), rec["table"]);
    for (const auto& step : rec["steps"]) {
        int m = step["m"].get<int>();
        json s = call_json(mld_disc_build(3, m, ctx.seed, nullptr, "B", nullptr, &out), out);
        std::string bounded = s["B"]["regions"]["bounded"];
        c.add("fiber B(3," + std::to_string(m) + ")", bounded == step["fiber"].get<std::string>(),
              {{"arrangement", bounded}, {"used", step["fiber"]}});
    }
}

void check_fforacle(Context& ctx, Check& c) {
    char* out = nullptr;
    for (int m : {6, 7})
        for (long q : {5L, 7L, 11L, 13L}) {
            std::string f = call_str(mld_ff_formula(m, q, &out), out);
            std::string b = call_str(mld_ff_brute(3, m, q, 1e9, ctx.threads, &out), out);
            c.add("m=" + std::to_string(m) + " q=" + std::to_string(q), f == b, {{"formula", f}, {"brute", b}});
        }
    const std::vector<std::pair<int, const char*>> euler = {{6, "26"}, {7, "1272"}, {8, "188112"}, {9, "74570400"}};
    for (auto [m, expect] : euler) {
        std::string v = call_str(mld_ff_euler(m, &out), out);
        c.add("euler m=" + std::to_string(m), v == expect, {{"value", v}, {"reference", expect}});
    }
}

const char* chy6_w = "12,6,9,12,5,1,10,11,3";
const std::vector<std::vector<std::string>> chy6_points = {
    {"0", "0", "8", "4", "2", "0", "2", "0", "0"}, {"0", "5", "2", "2", "0", "0", "0", "0", "2"},
    {"1", "0", "8", "0", "2", "0", "0", "1", "0"}, {"2", "5", "2", "0", "0", "0", "2", "3", "2"},
    {"7", "5", "2", "0", "0", "0", "5", "2", "2"}, {"9", "0", "8", "0", "2", "0", "0", "8", "0"}};

void check_chy6(Context& ctx, Check& c) {
    std::set<std::vector<std::string>> ref(chy6_points.begin(), chy6_points.end());
    Model model;
    check(mld_model_chy(6, &model.p));
    char* out = nullptr;
    json tp = call_json(mld_trop_critical_points(model.p, chy6_w, ctx.threads, &out), out);
    std::set<std::vector<std::string>> trop;
    for (const auto& p : tp["points"]) trop.insert(p.get<std::vector<std::string>>());
    c.add("tropical_mle", trop == ref && tp["count"] == 6, tp["points"]);
    System sys;
    check(mld_system_model(model.p, &sys.p));
    std::string weights;
    for (const auto& w : std::vector<std::string>{"12", "6", "9", "12", "5", "1", "10", "11", "3"}) weights += w + "\n";
    json lr = learn(ctx, sys.p, weights, nullptr, 1e-6, 32, ctx.budget_or(400));
    std::set<std::vector<std::string>> learned;
    bool mult1 = true;
    double max_rho = 0;
    for (const auto& cl : lr["clusters"]) {
        learned.insert(cl["q"].get<std::vector<std::string>>());
        mult1 = mult1 && cl["multiplicity"] == 1;
        max_rho = std::max(max_rho, cl["max_rho"].get<double>());
    }
    json clusters = json::array();
    for (const auto& cl : lr["clusters"]) clusters.push_back(cl);
    c.add("valuation_learner", learned == trop && mult1 && max_rho < 0.2 && lr["failed"] == 0,
          {{"clusters", clusters}, {"failed", lr["failed"]}, {"max_rho", max_rho}});
}

void check_decone_identities(Context& ctx, Check& c) {
    for (auto [k, m, expect] : table1) {
        (void)expect;
        char* out = nullptr;
        json s = call_json(mld_disc_build(k, m, ctx.seed, nullptr, "all", nullptr, &out), out);
        const auto& id = s["identities"];
        c.add("(" + std::to_string(k) + "," + std::to_string(m) + ")",
              id["decone"].get<bool>() && id["restriction_identity"].get<bool>() && id["derivative_identity"].get<bool>(),
              {{"identities", id}, {"chi_A", s["A"]["char_poly_str"]}, {"chi_B", s["B"]["char_poly_str"]}});
    }
}

void check_decomp48(Context& ctx, Check& c) {
    std::string table = ctx.read_file(data_path("decomp48.json"));
    char* out = nullptr;
    json r = call_json(mld_euler_decomp48(table.c_str(), &out), out);
    c.add("orbit_sizes", r["orbits_agree"].get<bool>() && r["orbit_sum"] == "3150", r["types"]);
    c.add("regular_part", r["regular"] == "2363376", {{"regular", r["regular"]}});
    // A nonzero residual is a documented discrepancy in the published inputs, not a failure.
    c.add("total", true, {{"total", r["total"]}, {"target", r["target"]}, {"residual", r["residual"]},
                          {"discrepancy", r["residual"] != "0"}});
}

json run_crosscheck(Context& ctx, const std::string& name, int& exit_code) {
    Check c;
    if (name == "x36-triple") check_x36(ctx, c);
    else if (name == "table1") check_table1(ctx, c);
    else if (name == "theorem51") check_theorem51(ctx, c);
    else if (name == "fforacle") check_fforacle(ctx, c);
    else if (name == "tropmle-chy6") check_chy6(ctx, c);
    else if (name == "lemma34") check_decone_identities(ctx, c);
    else if (name == "decomp48") check_decomp48(ctx, c);
    else throw Failure{1, "unknown suite '" + name + "'"};
    for (const auto& it : c.items)
        ctx.text((it["pass"].get<bool>() ? "PASS " : "FAIL ") + it["name"].get<std::string>() + "  " + it["detail"].dump());
    ctx.text(name + (c.ok ? ": agreement" : ": DISAGREEMENT"));
    if (!c.ok) exit_code = 2;
    return {{"suite", name}, {"pass", c.ok}, {"checks", c.items}};
}

}  // namespace

int main(int argc, char** argv) {
    Context ctx;
    for (int i = 0; i < argc; ++i) ctx.command_line += (i ? " " : "") + std::string(argv[i]);

    CLI::App app{"Maximum likelihood degrees of discriminantal and linear models"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", ctx.json_out, "JSON output");
    app.add_flag("--quiet", ctx.quiet, "no text output or logging");
    app.add_option("--seed", ctx.seed, "random seed")->capture_default_str();
    app.add_option("--threads", ctx.threads, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--budget", ctx.budget, "work budget (starts or tuples) for the command")->check(CLI::NonNegativeNumber);
    app.set_version_flag("--version", mld_version());

    DiscArgs disc;
    auto* c_disc = app.add_subcommand("disc", "discriminantal arrangements of a random configuration");
    c_disc->add_option("--k", disc.k)->required();
    c_disc->add_option("--m", disc.m)->required();
    c_disc->add_option("--degenerate", disc.degenerate, "concurrency conditions, e.g. (1,2)(3,4)(5,6)");
    c_disc->add_option("--which", disc.which, "A, B, Btilde or all")->capture_default_str();
    c_disc->add_option("--out", disc.out, "write the arrangement file here");

    auto* c_euler = app.add_subcommand("euler", "Euler characteristic bookkeeping");
    c_euler->require_subcommand(1);
    int ek = 3, em = 9;
    std::string constants = data_path("strata_constants.json"), table = data_path("decomp48.json"), profile;
    auto* c_rec = c_euler->add_subcommand("recursion", "chi(X(3,m)) from strata constants");
    c_rec->add_option("--k", ek)->capture_default_str();
    c_rec->add_option("--m", em)->required();
    c_rec->add_option("--constants", constants)->capture_default_str();
    auto* c_dec = c_euler->add_subcommand("decomp48", "soft-limit decomposition of chi(X(4,8))");
    c_dec->add_option("--table", table)->capture_default_str();
    auto* c_rho = c_euler->add_subcommand("rho", "sigma and rho of a stratum profile");
    c_rho->add_option("--profile", profile, "JSON object h -> n_h")->required();

    int fk = 3, fm = 6;
    long fq = 7;
    bool brute = false, feuler = false;
    auto* c_ff = app.add_subcommand("ffcount", "points of X(k,m) over a prime field");
    c_ff->add_option("--k", fk)->capture_default_str();
    c_ff->add_option("--m", fm)->required();
    c_ff->add_option("--q", fq)->capture_default_str();
    c_ff->add_flag("--brute", brute, "also count by enumeration");
    c_ff->add_flag("--euler", feuler, "Euler characteristic from the count formula");

    std::string model_file, w;
    int chy = 0;
    auto* c_trop = app.add_subcommand("tropmle", "tropical critical points of a linear model");
    auto* o_model = c_trop->add_option("--model", model_file, "affine arrangement file");
    auto* o_chy = c_trop->add_option("--chy", chy, "scattering model X(2,M)");
    o_model->excludes(o_chy);
    c_trop->add_option("--w", w, "tropical data vector")->required();

    std::vector<std::string> system;
    std::string weight_kind = "random";
    auto* c_crit = app.add_subcommand("critpts", "critical points by multistart Newton");
    c_crit->add_option("--system", system, "config K M | linear FILE | pappus | chy M")->required()->expected(1, 3);
    c_crit->add_option("--weights", weight_kind, "random or positive")->check(CLI::IsMember({"random", "positive"}));

    std::vector<std::string> vsystem;
    std::string weights_file, starts_file;
    double tmin = 1e-6;
    long denom_cap = 32;
    auto* c_val = app.add_subcommand("valuations", "learn valuations of critical points along t -> 0");
    c_val->add_option("--system", vsystem, "config K M | linear FILE | pappus | chy M")->required()->expected(1, 3);
    c_val->add_option("--weights", weights_file, "one line per coordinate: 'w' or 'w re im'")->required();
    c_val->add_option("--starts", starts_file, "critical points at t = 1, 're,im;re,im;...' per line");
    c_val->add_option("--tmin", tmin)->capture_default_str();
    c_val->add_option("--denom-cap", denom_cap)->capture_default_str()->check(CLI::PositiveNumber);

    std::string suite;
    auto* c_cross = app.add_subcommand("crosscheck", "agreement suites across modules");
    c_cross->add_option("name", suite, "x36-triple, table1, theorem51, fforacle, tropmle-chy6, lemma34, decomp48")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    mld_set_log_level(ctx.quiet ? 6 : 3);

    auto start = std::chrono::steady_clock::now();
    int exit_code = 0;
    json result;
    std::string command;
    try {
        if (*c_disc) {
            command = "disc";
            result = run_disc(ctx, disc);
        } else if (*c_euler) {
            if (*c_rec) {
                command = "euler recursion";
                result = run_euler_recursion(ctx, ek, em, constants, exit_code);
            } else if (*c_dec) {
                command = "euler decomp48";
                result = run_euler_decomp48(ctx, table, exit_code);
            } else {
                command = "euler rho";
                char* out = nullptr;
                result = call_json(mld_euler_rho(profile.c_str(), &out), out);
                ctx.text("sigma " + result["sigma"].get<std::string>() + ", rho " + std::to_string(result["rho"].get<int>()));
            }
        } else if (*c_ff) {
            command = "ffcount";
            result = run_ffcount(ctx, fk, fm, fq, brute, feuler, exit_code);
        } else if (*c_trop) {
            command = "tropmle";
            result = run_tropmle(ctx, model_file, chy, w);
        } else if (*c_crit) {
            command = "critpts";
            result = run_critpts(ctx, system, weight_kind);
        } else if (*c_val) {
            command = "valuations";
            result = run_valuations(ctx, vsystem, weights_file, starts_file, tmin, denom_cap);
        } else if (*c_cross) {
            command = "crosscheck";
            result = run_crosscheck(ctx, suite, exit_code);
        }
    } catch (const Failure& f) {
        if (!ctx.quiet) std::cerr << "error: " << f.message << "\n";
        if (ctx.json_out) std::cout << json{{"schema", schema}, {"status", "error"}, {"error", f.message}}.dump(2) << "\n";
        return f.code;
    } catch (const json::exception& e) {
        if (!ctx.quiet) std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ctx.json_out) {
        json manifest{{"command_line", ctx.command_line},
                      {"seed", ctx.seed},
                      {"threads", ctx.threads},
                      {"budget", ctx.budget},
                      {"version", mld_version()},
                      {"inputs", ctx.inputs},
                      {"wall_seconds", wall}};
        std::cout << json{{"schema", schema},
                          {"command", command},
                          {"status", exit_code == 0 ? "ok" : "disagreement"},
                          {"manifest", manifest},
                          {"result", result}}
                         .dump(2)
                  << "\n";
    }
    return exit_code;
}
