#include "mld/common.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cctype>

namespace mld {

void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

Rat parse_rational(std::string_view s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) fail(ErrorCode::parse, "empty rational");
    auto valid_int = [](std::string_view x) {
        std::size_t i = 0;
        if (!x.empty() && (x[0] == '-' || x[0] == '+')) i = 1;
        if (i == x.size()) return false;
        for (; i < x.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(x[i]))) return false;
        return true;
    };
    auto slash = t.find('/');
    std::string num = t.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
        fail(ErrorCode::parse, "malformed rational '" + t + "'");
    if (num[0] == '+') num.erase(0, 1);
    Int n(num), d(den);
    if (d == 0) fail(ErrorCode::parse, "zero denominator in '" + t + "'");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& r) { return r.get_str(); }
std::string int_str(const Int& z) { return z.get_str(); }

Int binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Int factorial(long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

spdlog::logger& log() {
    static std::shared_ptr<spdlog::logger> lg = [] {
        auto l = spdlog::stderr_color_mt("mld");
        l->set_level(spdlog::level::warn);
        l->set_pattern("[%l] %v");
        return l;
    }();
    return *lg;
}

void set_log_level(int level) {
    log().set_level(static_cast<spdlog::level::level_enum>(level));
}

}  // namespace mld
