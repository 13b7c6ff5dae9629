#pragma once

#include "mld/common.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mld {

// Root counters over F_q:
//   b: x^2 + x + 1,  d: x^2 + x - 1,  e: x^2 + 1
enum class QuadRoot { b, d, e };

bool is_prime(std::int64_t n);
int quad_roots(QuadRoot which, std::int64_t q);

// #X(3,m)(F_q) = poly(q) + B(q) b(q) + D(q) d(q) + E(q) e(q)
struct CountFormula {
    int m = 0;
    std::vector<Int> poly, b_cofactor, d_cofactor, e_cofactor;  // ascending powers of q

    Int eval(const Int& q, const Int& b, const Int& d, const Int& e) const;
};

CountFormula count_formula_for(int m);
Int count_formula(int m, std::int64_t q);
Int euler_from_count(int m);

struct BruteOptions {
    double max_tuples = 1e8;
    unsigned threads = 1;
};

// Number of (x_ij) in F_q^((k-1)(m-k-1)) with every maximal minor of the
// normal-form matrix nonzero.
Int brute_count(int k, int m, std::int64_t q, const BruteOptions& opt = {});

// Prime factorization by trial division, (prime, exponent) pairs.
std::vector<std::pair<Int, int>> factorize(Int n);

}  // namespace mld
