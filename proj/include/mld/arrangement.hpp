#pragma once

#include "mld/common.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mld {

// normal . x = offset, scaled so the first nonzero entry of the normal is 1.
struct Hyperplane {
    RatVec normal;
    Rat offset;

    bool operator==(const Hyperplane& o) const { return normal == o.normal && offset == o.offset; }
};

Hyperplane make_hyperplane(RatVec normal, Rat offset);

class Arrangement {
public:
    explicit Arrangement(int dim = 0);
    Arrangement(int dim, const std::vector<Hyperplane>& hs);

    // Canonicalizes h; returns false (and logs) when h is already present.
    bool add(const Hyperplane& h);

    int dim() const { return dim_; }
    std::size_t size() const { return hs_.size(); }
    const std::vector<Hyperplane>& hyperplanes() const { return hs_; }
    const Hyperplane& operator[](std::size_t i) const { return hs_[i]; }
    bool central() const;

private:
    int dim_;
    std::vector<Hyperplane> hs_;
};

// "d n central|affine" followed by n lines "a_1 ... a_d b".
Arrangement parse_arrangement(std::string_view text);
std::string format_arrangement(const Arrangement& arr);

struct Flat {
    std::vector<int> support;   // sorted, closed
    RatMat rref;                // rows (a_1..a_d | b), reduced row echelon
    std::vector<int> pivots;
    int codim = 0;
};

struct IntersectionPoset {
    int dim = 0;
    std::vector<Flat> flats;                 // sorted by codim, flats[0] is the ambient space
    std::vector<std::vector<int>> below;     // below[f]: flats covered by f (one codim less)
    std::vector<Int> mobius;                 // mu(ambient, f)
    std::vector<std::size_t> level_start;    // level_start[c] = first flat of codim c; size dim+2

    std::size_t count(int codim) const { return level_start[codim + 1] - level_start[codim]; }
    int rank() const;  // largest codim present
};

IntersectionPoset build_poset(const Arrangement& arr);

// Checks sum_{G <= F} mu(G) = 0 for every F above the ambient space.
bool mobius_consistent(const IntersectionPoset& p);

struct CharPoly {
    std::vector<Int> coeffs;  // coeffs[i] multiplies t^(d-i); coeffs[0] = 1

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Int eval(const Int& t) const;
    Int derivative_at(const Int& t) const;
    std::vector<Int> betti() const;
    std::string str() const;
    bool operator==(const CharPoly& o) const { return coeffs == o.coeffs; }
};

CharPoly char_poly(const IntersectionPoset& p);

struct RegionCount {
    Int total;
    Int bounded;
};

// total = |chi(-1)|; bounded = |chi(1)|, except 0 when t divides chi (a
// non-essential arrangement has no bounded regions).
RegionCount regions(const CharPoly& cp);

struct Decone {
    CharPoly affine;       // central / (t - 1)
    CharPoly restriction;  // (central - constant term) / t
};

Decone decone(const CharPoly& central_cp);

// Checks restriction*t - restriction(1) == affine*(t-1).
bool decone_identity(const CharPoly& affine, const CharPoly& restriction);

struct DeleteRestrict {
    Arrangement deleted;
    Arrangement restricted;
};

DeleteRestrict delete_restrict(const Arrangement& arr, std::size_t i);

struct OracleLimits {
    int max_dim = 3;
    std::size_t max_hyperplanes = 20;
};

// Independent region count: walks the region adjacency graph by sign flips,
// testing each candidate cell with an exact LP; boundedness by an exact LP on
// the recession cone.
RegionCount brute_force_regions(const Arrangement& arr, const OracleLimits& lim = {});

// Sign vector of x (+1, -1, 0 per hyperplane).
std::vector<int> sign_vector(const Arrangement& arr, const RatVec& x);

// Exact LP: maximize c.z subject to G z <= h, z >= 0, with h >= 0.
// Returns false when unbounded.
bool lp_maximize(const RatVec& c, const RatMat& G, const RatVec& h, Rat& value, RatVec* z = nullptr);

}  // namespace mld
