#pragma once

#include "mld/arrangement.hpp"
#include "mld/likelihood_eval.hpp"
#include "mld/polynomial.hpp"
#include "mld/tropical_mle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mld {

struct LikelihoodSystem {
    int vars = 0;
    std::vector<Poly> coords;
    std::vector<std::string> var_names;
    std::vector<std::string> coord_labels;
    // Torus acting on the coordinates: rows are weight vectors over the coordinates.
    // Valuations are normalized to vanish on torus_reference.
    RatMat torus;
    std::vector<int> torus_reference;
};

// Nonconstant maximal minors of the normal-form k x m matrix in the unknowns x_{r,c}.
LikelihoodSystem from_config(int k, int m);
// Affine forms a.x - b of the hyperplanes.
LikelihoodSystem from_linear_model(const Arrangement& arr);
// All coordinates of a linear model, in order, on the chart where the infinity form is 1.
LikelihoodSystem from_model(const LinearModel& model);
// x, y, 1-x, 1-y, 1-x-y, 1-xy, xy-x-y
LikelihoodSystem pappus_system();

// Generic complex weights with real part in [0.5, 2] and imaginary part in [-1, 1].
CVec random_weights(std::size_t n, Rng& rng);
CVec positive_weights(std::size_t n, Rng& rng);

struct SolveOptions {
    int budget = 400;
    std::uint64_t seed = default_seed;
    unsigned threads = 1;
    double dedup_radius = 1e-6;
    double vanish_guard = 1e-8;
    double residual_tol = 1e-10;
    double start_rmin = 0.1, start_rmax = 10;
    int max_iter = 200;
    // Newton runs on prod_a p_a^{c_a} * gradient. The base power c cycles through
    // clear_powers over the starts (empty selects {1.75, 2} / number of coordinates);
    // each start draws c_a uniformly from c * [1 - clear_spread, 1 + clear_spread].
    std::vector<double> clear_powers;
    double clear_spread = 0.9;
};

struct CriticalSolutionSet {
    std::vector<CVec> points;
    std::vector<double> residuals;  // max-norm of the gradient after polishing
    std::size_t count = 0;
    double separation = 0;          // min pairwise max-norm distance (0 when < 2 points)
    bool saturated = false;         // no new point in the last quarter of the starts
    int starts = 0;
    int converged = 0;
    int last_new_start = -1;
    int singular = 0;               // starts abandoned at a singular Jacobian
    int diverged = 0;
    int unconverged = 0;            // iteration limit reached
    int rejected = 0;               // residual or vanishing-coordinate guard failed
};

CriticalSolutionSet solve_multistart(const LikelihoodSystem& sys, const CVec& weights, const SolveOptions& opt = {});

}  // namespace mld
