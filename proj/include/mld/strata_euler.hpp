#pragma once

#include "mld/common.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace mld {

struct StratNode {
    std::string label;
    Int chi;        // Euler characteristic of the open stratum
    Int fiber_chi;  // Euler characteristic of the fiber over it
};

// Strata of a base space ordered by closure containment. Node 0 is the base
// itself and must lie above every other node.
class StratPoset {
public:
    int add(const std::string& label, const Int& chi, const Int& fiber_chi);
    // lower is contained in the closure of upper.
    void relate(int lower, int upper);
    // Computes the order closure and all Moebius values; validates the top.
    void finalize();

    std::size_t size() const { return nodes_.size(); }
    const StratNode& node(int i) const { return nodes_[i]; }
    bool leq(int a, int b) const { return leq_[a][b]; }
    const Int& mobius(int a, int b) const { return mu_[a][b]; }
    // sum over S'' in [a,b] of mu(a,S'') == 0 for every a < b.
    bool mobius_consistent() const;

private:
    std::vector<StratNode> nodes_;
    std::vector<std::pair<int, int>> covers_;
    std::vector<std::vector<char>> leq_;
    std::vector<std::vector<Int>> mu_;
    bool final_ = false;
};

struct ChiTotal {
    Int direct;    // sum_S chi(S) sum_{S' >= S} mu(S,S') chi(F_S')
    Int deficit;   // chi(Y) chi(F_Y) + sum_S chi(S) sum_{S' >= S} mu(S,S') (chi(F_S') - chi(F_Y))
};

// Both forms of the stratified-fibration formula; throws if they differ.
ChiTotal chi_total(const StratPoset& p);

// sum_{S' >= S} mu(S,S') (chi(F_Y) - chi(F_S')).
Int fiber_deficit_sum(const StratPoset& p, int s);

// h -> number of extra points where exactly h lines meet (h >= 3).
using StratumProfile = std::map<int, int>;

Int sigma(const StratumProfile& n);
int rho(const StratumProfile& n);
// rho obtained from sigma(S) = sum over sub-profiles S' of S (including S) of rho(S'),
// each sub-profile weighted by the number of ways to select it.
Int rho_recursive(const StratumProfile& n);
// All profiles with sum h n_h <= budget.
std::vector<StratumProfile> enumerate_profiles(int budget);

// (1/h!) prod_{i<h} C(m-2i, 2)
Int stratum_count(long m, long h);

// chi(X(3,m+1)) from chi(X(3,m)), the generic fiber and the stratum constants chi(3,m;h).
Int chi_X3_recursion(long m, const Int& chi_prev, const Int& fiber_chi, const std::map<long, Int>& strata_chis);

using Quadruple = std::array<int, 4>;

// Size of the orbit of a set of quadruples (each ending in 8) under S7 acting on 1..7.
Int orbit_size(const std::vector<Quadruple>& rep);

struct SoftType {
    std::string label;
    std::vector<Quadruple> representative;
    Int A;  // orbit count
    Int B;  // multiplicity per ray
};

struct SoftDecomposition48 {
    Int regular;
    std::vector<SoftType> types;
};

Int decomp_48(const SoftDecomposition48& d);

}  // namespace mld
