#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spdlog { class logger; }

namespace mld {

using Int = mpz_class;
using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

enum class ErrorCode {
    invalid_argument = 1,
    parse = 2,
    unsupported = 3,
    budget = 4,
    degenerate = 5,
    numeric = 6,
    inconsistent = 7,
    internal = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& msg);

// All randomness goes through an explicitly passed generator.
using Rng = std::mt19937_64;
constexpr std::uint64_t default_seed = 20240601;

Rat parse_rational(std::string_view s);
std::string rat_str(const Rat& r);
std::string int_str(const Int& z);

Int binomial(long n, long k);
Int factorial(long n);

// Library-wide logger (stderr, warnings by default).
spdlog::logger& log();
void set_log_level(int level);  // 0 = trace ... 6 = off

}  // namespace mld
