#pragma once

#include "mld/arrangement.hpp"
#include "mld/common.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mld {

using Mask = std::uint64_t;
using TropVec = RatVec;

std::vector<int> mask_elements(Mask m);
Mask mask_of(const std::vector<int>& elems);

// Simple matroid given by its circuits; optionally remembers a realization.
class Matroid {
public:
    Matroid() = default;
    // Column matroid of a rational matrix.
    static Matroid from_matrix(const RatMat& cols_as_rows_matrix);
    // Validates the circuit axioms (exchange checked exhaustively for ground sets up to 12).
    static Matroid from_circuits(int ground, std::vector<Mask> circuits);
    // Cycle matroid of a graph on vertices 0..v-1.
    static Matroid graphic(int vertices, const std::vector<std::pair<int, int>>& edges);

    int ground() const { return n_; }
    int rank() const { return rank_; }
    const std::vector<Mask>& circuits() const { return circuits_; }
    Mask all() const { return n_ == 64 ? ~Mask(0) : ((Mask(1) << n_) - 1); }

    Mask closure(Mask s) const;
    int rank_of(Mask s) const;
    bool is_flat(Mask s) const { return closure(s) == s; }
    // flats_by_rank()[r] lists the flats of rank r.
    std::vector<std::vector<Mask>> flats_by_rank() const;
    // Chains F_1 < ... < F_len of flats with rank(F_i) = i.
    std::vector<std::vector<Mask>> flags(int len) const;
    // Every element pair of s lies on a common circuit inside s.
    bool connected(Mask s) const;

private:
    int n_ = 0;
    int rank_ = 0;
    std::vector<Mask> circuits_;
};

// Minimum over every circuit attained at least twice.
bool bergman_member(const Matroid& m, const TropVec& v);

// v lies in the relative interior of a maximal cone of the fan's coarsest
// structure: along its chain of level flats every minor F_i / F_(i-1)
// splits into rank-one components.
bool bergman_smooth_point(const Matroid& m, const TropVec& v);

// Rays of the coarse Bergman fan (connected proper flats) and the
// pairs among them spanning two-dimensional cones.
struct BergmanComplex {
    std::vector<Mask> rays;
    std::vector<std::pair<int, int>> edges;
};
BergmanComplex bergman_complex(const Matroid& m);

// Linear model: the forms p_0..p_n and the form h at infinity on R^(d+1);
// the model lives in the chart h = 1.
class LinearModel {
public:
    // forms: (d+1) x (n+1), column i is p_i; h: length d+1.
    LinearModel(RatMat forms, RatVec h);
    // Rows of span generate the linear cone over X in R^(n+1); h = sum of coordinates.
    static LinearModel from_span(const RatMat& span);
    // Affine hyperplanes a.x = b in R^d, infinity is the homogenizing coordinate.
    static LinearModel from_arrangement(const Arrangement& arr);

    int d() const { return d_; }
    int n() const { return n_; }  // coordinates are 0..n
    const RatMat& forms() const { return forms_; }
    const RatVec& infinity() const { return h_; }
    // Matroid of (p_0..p_n, h) on n+2 elements; h is element n+1.
    const Matroid& matroid() const { return mx_; }
    // Dual of the contraction by h, on n+1 elements.
    const Matroid& perp_matroid() const { return mperp_; }
    const RatMat& perp_basis() const { return perp_; }
    // Affine arrangement {p_i = 0} in the chart h = 1.
    Arrangement arrangement() const;

    bool in_trop_X(const TropVec& q) const;
    bool in_trop_perp(const TropVec& r) const;

private:
    int d_ = 0, n_ = 0;
    RatMat forms_;
    RatVec h_;
    RatMat perp_;
    Matroid mx_, mperp_;
};

struct TropOptions {
    unsigned threads = 1;
};

// All q in trop(X) with w - q in trop(X^perp). Throws ErrorCode::degenerate
// when w is not generic.
std::vector<TropVec> trop_critical_points(const LinearModel& model, const TropVec& w, const TropOptions& opt = {});

// sum_{i in I} (w_i - w_0) e_i over all d-subsets I of {1..n}; w_0 must be the strict minimum.
std::vector<TropVec> corollary_points(int n, int d, const TropVec& w);

// Determinant of the indicator matrix of two flags plus the all-ones column.
int flag_determinant(const Matroid& mx, const Matroid& mperp, const std::vector<Mask>& flag,
                     const std::vector<Mask>& flag_perp);

// Adds distinct rationals c_i / denom with 1 <= c_i < denom / (n+2).
TropVec perturb(const TropVec& w, Rng& rng, long denom = 1000003);

// X(2,m) with coordinates p_ij (2 <= i < j <= m, ij != 23) in lexicographic order
// and infinity p_23; edges of K_{m-1} on the vertices 2..m.
struct ChyModel {
    int m = 0;
    LinearModel model;
    std::vector<std::pair<int, int>> coords;  // labels of coordinates 0..n
};
ChyModel chy_model(int m);

std::string trop_str(const TropVec& v);

}  // namespace mld
