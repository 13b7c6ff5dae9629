#pragma once

#include "mld/arrangement.hpp"

#include <string>
#include <vector>

namespace mld {

// k x m matrix in the normal form
//   row 1:        0 ... 0 (-1)^k | 1 | 1       ...  1
//   row r (>=2):  (-1)^(k+1-r) on the antidiagonal | 1 | x_{r-1,1} ... x_{r-1,m-k-1}
struct ConfigMatrix {
    int k = 0, m = 0;
    RatMat entries;

    static ConfigMatrix from_unknowns(int k, int m, const RatMat& x);
    RatMat unknowns() const;  // (k-1) x (m-k-1)
    const RatVec column(int j) const;
    // First k-subset (0-based columns) with vanishing maximal minor, empty if generic.
    std::vector<int> vanishing_minor() const;
    bool generic() const { return vanishing_minor().empty(); }
};

Rat determinant(RatMat a);

struct NormalEntry {
    std::vector<int> columns;  // 0-based (k-1)-subset
    RatVec normal;             // n . v = det[v | columns]
    bool zero = false;
};

std::vector<NormalEntry> hyperplane_normals(const ConfigMatrix& cfg);

// Central arrangement of all nonzero normals in R^k.
Arrangement build_Btilde(const ConfigMatrix& cfg, bool require_generic = true);
// Restriction of B~ to x_1 = 1.
Arrangement build_B(const ConfigMatrix& cfg, bool require_generic = true);
// Restriction of B~ to x_1 + c_2 x_2 + ... + c_k x_k = 1 (section = c_2..c_k).
Arrangement build_A(const ConfigMatrix& cfg, const RatVec& section, bool require_generic = true);
RatVec random_section(int k, Rng& rng);

ConfigMatrix random_generic_config(int k, int m, Rng& rng, long bound = 40, int budget = 1000);

// Degenerate planar configuration (k = 3). Conditions are separated by ';',
// each a list of at least three disjoint point pairs "(a,b)" whose lines are
// required to be concurrent, e.g. "(1,2)(3,4)(5,6)".
ConfigMatrix degenerate_config(int k, int m, const std::string& spec, Rng& rng, long bound = 40);

// The degree (k-1)^2 polynomials for k = 3, 4. Value at m equals the number of
// bounded regions of B(k, m-1).
Rat soft_poly_eval(int k, long m);
std::vector<Rat> soft_poly_coefficients(int k);  // ascending powers of m, denominator included

struct DiscSummary {
    int k = 0, m = 0;
    Arrangement A, B, Btilde;
    CharPoly chi_A, chi_B, chi_Btilde;
    RegionCount regions_A, regions_B;
    RatVec section;
    bool decone_matches = false;    // decone(chi_Btilde) == (chi_B, chi_A)
    bool restriction_identity = false;           // chi_A(t) t - chi_A(1) == chi_B(t)(t-1)
    bool derivative_identity = false;       // chi_B(1) == chi_A'(1) + chi_A(1)
    bool section_generic = false;   // flat counts of A match B~ below the top
};

// Builds the three arrangements for a configuration and evaluates all identities.
// With with_A = false only B is built.
DiscSummary discriminantal_summary(const ConfigMatrix& cfg, Rng& rng, bool with_A = true, bool require_generic = true);

}  // namespace mld
