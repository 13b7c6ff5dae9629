#pragma once

#include "mld/critical_points.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mld {

// u_a(t) = coef_a * t^expo_a
struct ParametricWeights {
    CVec coef;
    RatVec expo;

    std::size_t size() const { return coef.size(); }
};

// Exponents with seeded generic coefficients.
ParametricWeights parametric_weights(const RatVec& expo, Rng& rng);
// One coordinate per line: "w" or "w re im".
ParametricWeights parse_weights(std::string_view text, std::size_t coords, Rng& rng);
// One complex vector per line: "re,im;re,im;...".
std::vector<CVec> parse_starts(std::string_view text, int vars);

// 0.1 * ratio^j for j = 0..count-1.
std::vector<double> geometric_schedule(int count, double first = 0.1, double ratio = 0.8);
// 0.1 * 0.8^j for j = 0..24.
std::vector<double> default_schedule();
// 0.1 * 0.8^j down to tmin.
std::vector<double> schedule_to(double tmin);

struct TrackOptions {
    double step = 0.25;          // largest substep in log t
    int newton_iter = 12;
    double converge = 1e-30;     // relative change of every coordinate
    double residual_tol = 1e-20; // relative gradient residual
    double collapse_digits = 14; // significant digits a coordinate must keep
};

struct PathSample {
    std::vector<double> t;
    std::vector<std::vector<double>> log_abs;  // per retained sample, log|p_a|
    std::vector<double> residuals;             // relative gradient residual per retained sample
    std::vector<CVec> points;
    int dropped = 0;
    bool early_exit = false;
};

PathSample track(const LikelihoodSystem& sys, const ParametricWeights& w, const CVec& start,
                 const std::vector<double>& schedule, const TrackOptions& opt = {});

struct RationalFit {
    Rat value;
    double mismatch = 0;  // |value - float|
};

// Last continued-fraction convergent with denominator <= cap.
RationalFit rationalize(double x, long cap);

struct TropicalResult {
    RatVec q;
    std::vector<double> slopes;
    std::vector<double> intercepts;  // log|c_a| refit against the rational slope
    std::vector<double> rho;         // per coordinate
    double max_rho = 0;
    double max_mismatch = 0;
    bool trusted = true;
};

constexpr long default_denom_cap = 32;
constexpr double default_mismatch_tol = 1e-3;
constexpr double default_rho_reject = 1.0;

TropicalResult fit_valuations(const PathSample& sample, long denom_cap = default_denom_cap,
                              double rho_reject = default_rho_reject);

struct ValuationCluster {
    RatVec q;
    int multiplicity = 0;
    double max_rho = 0;
    bool trusted = true;
};

struct LearnOptions {
    std::vector<double> schedule = default_schedule();
    long denom_cap = default_denom_cap;
    double rho_reject = default_rho_reject;
    unsigned threads = 1;
    TrackOptions track;
};

struct PathReport {
    bool failed = false;
    bool early_exit = false;
    int samples = 0;
    TropicalResult fit;
};

struct LearnResult {
    std::vector<ValuationCluster> clusters;  // sorted by q
    std::vector<PathReport> paths;
    int failed = 0;
};

// Shifts q by the model's torus action so that the reference coordinates are zero.
RatVec normalize_torus(const LikelihoodSystem& sys, const RatVec& q);

LearnResult learn(const LikelihoodSystem& sys, const ParametricWeights& w, const std::vector<CVec>& starts,
                  const LearnOptions& opt = {});

}  // namespace mld
