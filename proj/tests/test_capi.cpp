#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mld/mld.h"

#include <json.hpp>

#include <string>

using nlohmann::json;

namespace {

std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out = s;
    mld_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(mld_version()).size() > 0);
    CHECK(std::string(mld_status_name(MLD_OK)) == "ok");
    CHECK(std::string(mld_status_name(MLD_PARSE)) == "parse");
    CHECK(std::string(mld_last_error()).empty());
    mld_set_log_level(6);
}

TEST_CASE("arrangement handles") {
    mld_arrangement* a = nullptr;
    REQUIRE(mld_arrangement_parse("2 3 affine\n1 0 0\n0 1 0\n1 1 1\n", &a) == MLD_OK);
    char* out = nullptr;
    REQUIRE(mld_arrangement_summary(a, &out) == MLD_OK);
    json s = json::parse(take(out));
    CHECK(s["size"] == 3);
    CHECK(s["regions"]["total"] == "7");
    CHECK(s["regions"]["bounded"] == "1");
    REQUIRE(mld_arrangement_brute_regions(a, 3, 20, &out) == MLD_OK);
    json b = json::parse(take(out));
    CHECK(b["total"] == "7");
    CHECK(b["bounded"] == "1");
    REQUIRE(mld_arrangement_format(a, &out) == MLD_OK);
    CHECK(take(out).rfind("2 3 affine", 0) == 0);
    mld_arrangement_free(a);
    mld_arrangement_free(nullptr);
}

TEST_CASE("errors are reported through status codes") {
    mld_arrangement* a = nullptr;
    CHECK(mld_arrangement_parse("2 3 affine\n1 0\n", &a) == MLD_PARSE);
    CHECK(a == nullptr);
    CHECK(std::string(mld_last_error()).size() > 0);
    CHECK(mld_arrangement_parse(nullptr, &a) == MLD_NULL_POINTER);
    char* out = nullptr;
    CHECK(mld_soft_poly(5, 9, &out) == MLD_UNSUPPORTED);
    CHECK(out == nullptr);
    CHECK(mld_ff_formula(6, 9, &out) != MLD_OK);
    CHECK(mld_ff_brute(3, 6, 7, 10, 1, &out) == MLD_BUDGET);
    CHECK(mld_soft_poly(3, 7, nullptr) == MLD_NULL_POINTER);
    mld_model* m = nullptr;
    REQUIRE(mld_model_chy(6, &m) == MLD_OK);
    CHECK(mld_trop_critical_points(m, "0,0,0,0,0,0,0,0,0", 1, &out) == MLD_DEGENERATE);
    mld_model_free(m);
    // A successful call clears the message.
    REQUIRE(mld_soft_poly(3, 7, &out) == MLD_OK);
    CHECK(take(out) == "42");
    CHECK(std::string(mld_last_error()).empty());
}

TEST_CASE("discriminantal summary") {
    mld_arrangement* b = nullptr;
    char* out = nullptr;
    REQUIRE(mld_disc_build(3, 4, 1, nullptr, "all", &b, &out) == MLD_OK);
    json s = json::parse(take(out));
    CHECK(s["A"]["char_poly_str"] == "t^2 - 6t + 11");
    CHECK(s["B"]["char_poly_str"] == "t^2 - 5t + 6");
    CHECK(s["Btilde"]["char_poly_str"] == "t^3 - 6t^2 + 11t - 6");
    CHECK(s["identities"]["restriction_identity"] == true);
    REQUIRE(b != nullptr);
    mld_arrangement_free(b);
    REQUIRE(mld_disc_build(3, 6, 2, "(1,2)(3,4)(5,6)", "B", nullptr, &out) == MLD_OK);
    CHECK(json::parse(take(out))["B"]["regions"]["bounded"] == "41");
    CHECK(mld_disc_build(3, 6, 2, nullptr, "C", nullptr, &out) == MLD_INVALID_ARGUMENT);
}

TEST_CASE("Euler bookkeeping") {
    const char* constants = R"({"k":3,"base":{"m":4,"chi":"1"},
        "strata":[{"m":6,"h":3,"chi":"-12"},{"m":7,"h":3,"chi":"-568"}]})";
    char* out = nullptr;
    REQUIRE(mld_euler_recursion(constants, 8, &out) == MLD_OK);
    json r = json::parse(take(out));
    CHECK(r["chi"] == "188112");
    CHECK(mld_euler_recursion(constants, 9, &out) == MLD_INVALID_ARGUMENT);
    REQUIRE(mld_euler_rho(R"({"4":1})", &out) == MLD_OK);
    json rho = json::parse(take(out));
    CHECK(rho["rho"] == -1);
    CHECK(rho["sigma"] == "3");
    REQUIRE(mld_euler_stratum_count(8, 4, &out) == MLD_OK);
    CHECK(take(out) == "105");
    REQUIRE(mld_ff_euler(7, &out) == MLD_OK);
    CHECK(take(out) == "1272");
}

TEST_CASE("solving and learning") {
    mld_system* s = nullptr;
    REQUIRE(mld_system_config(2, 5, &s) == MLD_OK);
    char* out = nullptr;
    REQUIRE(mld_system_info(s, &out) == MLD_OK);
    CHECK(json::parse(take(out))["vars"] == 2);
    REQUIRE(mld_solve(s, R"({"seed":3,"budget":300})", &out) == MLD_OK);
    json r = json::parse(take(out));
    CHECK(r["count"] == 2);
    CHECK(r["saturated"] == true);
    CHECK(mld_solve(s, "[1]", &out) == MLD_PARSE);
    CHECK(mld_solve(s, R"({"weights":[[1,0]]})", &out) == MLD_INVALID_ARGUMENT);
    mld_system_free(s);

    mld_model* m = nullptr;
    REQUIRE(mld_model_chy(5, &m) == MLD_OK);
    REQUIRE(mld_system_model(m, &s) == MLD_OK);
    REQUIRE(mld_learn(s, "0\n0\n0\n0\n0\n", nullptr, R"({"budget":300})", &out) == MLD_OK);
    json l = json::parse(take(out));
    REQUIRE(l["clusters"].size() == 1);
    CHECK(l["clusters"][0]["multiplicity"] == 2);
    CHECK(mld_learn(s, "0\n0\n", nullptr, nullptr, &out) == MLD_PARSE);
    mld_system_free(s);
    mld_model_free(m);
}
