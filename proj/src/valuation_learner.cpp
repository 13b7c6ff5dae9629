#include "mld/valuation_learner.hpp"

#include "mld/linalg.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace mld {

namespace {

std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(b, e - b + 1));
    }
    return out;
}

double parse_double(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        fail(ErrorCode::parse, "malformed number '" + std::string(s) + "'");
    return v;
}

}  // namespace

ParametricWeights parametric_weights(const RatVec& expo, Rng& rng) {
    ParametricWeights w;
    w.coef = random_weights(expo.size(), rng);
    w.expo = expo;
    return w;
}

ParametricWeights parse_weights(std::string_view text, std::size_t coords, Rng& rng) {
    ParametricWeights w;
    auto lines = lines_of(text);
    if (lines.size() != coords)
        fail(ErrorCode::parse, "expected " + std::to_string(coords) + " weight lines, got " + std::to_string(lines.size()));
    for (const auto& line : lines) {
        std::istringstream in(line);
        std::vector<std::string> tok;
        for (std::string x; in >> x;) tok.push_back(x);
        if (tok.size() != 1 && tok.size() != 3) fail(ErrorCode::parse, "weight line needs 'w' or 'w re im': " + line);
        w.expo.push_back(parse_rational(tok[0]));
        if (tok.size() == 3) {
            Cplx c(parse_double(tok[1]), parse_double(tok[2]));
            if (c == Cplx(0)) fail(ErrorCode::parse, "zero weight coefficient: " + line);
            w.coef.push_back(c);
        } else {
            w.coef.push_back(random_weights(1, rng)[0]);
        }
    }
    return w;
}

std::vector<CVec> parse_starts(std::string_view text, int vars) {
    std::vector<CVec> out;
    for (const auto& line : lines_of(text)) {
        CVec v;
        std::string_view rest = line;
        while (!rest.empty()) {
            auto semi = rest.find(';');
            std::string_view entry = rest.substr(0, semi);
            rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
            auto comma = entry.find(',');
            if (comma == std::string_view::npos) fail(ErrorCode::parse, "start entry needs 're,im': " + line);
            v.emplace_back(parse_double(entry.substr(0, comma)), parse_double(entry.substr(comma + 1)));
        }
        if (static_cast<int>(v.size()) != vars)
            fail(ErrorCode::parse, "start has " + std::to_string(v.size()) + " entries, expected " + std::to_string(vars));
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<double> geometric_schedule(int count, double first, double ratio) {
    if (count < 1 || !(first > 0 && first <= 1) || !(ratio > 0 && ratio < 1))
        fail(ErrorCode::invalid_argument, "schedule needs count >= 1, 0 < first <= 1 and 0 < ratio < 1");
    std::vector<double> t(count);
    for (int j = 0; j < count; ++j) t[j] = first * std::pow(ratio, j);
    return t;
}

std::vector<double> default_schedule() { return geometric_schedule(25); }

std::vector<double> schedule_to(double tmin) {
    if (!(tmin > 0 && tmin <= 0.1)) fail(ErrorCode::invalid_argument, "tmin must lie in (0, 0.1]");
    int count = static_cast<int>(std::floor(std::log(tmin / 0.1) / std::log(0.8) + 1e-9)) + 1;
    return geometric_schedule(count);
}

namespace {

using MP = Cplx50;
using MPR = Real50;
using MVec = std::vector<MP>;

class Tracker {
public:
    Tracker(const LikelihoodSystem& sys, const ParametricWeights& w, const TrackOptions& opt)
        : g_(sys.vars, sys.coords), opt_(opt), n_(sys.vars) {
        for (std::size_t a = 0; a < w.size(); ++a) {
            coef_.push_back(make_complex<MP, MPR>(w.coef[a].real(), w.coef[a].imag()));
            expo_.push_back(rat_to<MPR>(w.expo[a]));
        }
    }

    MVec weights(const MPR& s) const {
        using boost::multiprecision::exp;
        MVec u(coef_.size());
        for (std::size_t a = 0; a < u.size(); ++a) u[a] = coef_[a] * MP(exp(expo_[a] * s));
        return u;
    }

    // Newton at fixed s. Returns false when the first step moves some coordinate by more
    // than max_first relative to itself, or when the iteration does not settle.
    bool correct(MVec& x, const MPR& s, double max_first) const {
        MVec u = weights(s), F, dx;
        std::vector<MVec> J;
        MVec p = g_.coords(x);
        for (int it = 0; it < opt_.newton_iter; ++it) {
            g_.eval(x, u, F, &J);
            for (auto& f : F) f = -f;
            if (!linear_solve(J, F, dx)) return false;
            for (int j = 0; j < n_; ++j) x[j] += dx[j];
            MVec q = g_.coords(x);
            MPR rel = 0;
            for (std::size_t a = 0; a < p.size(); ++a) {
                MPR r = cabs(q[a] - p[a]) / cabs(p[a]);
                if (!(r == r)) return false;
                rel = std::max(rel, r);
            }
            p.swap(q);
            if (it == 0 && rel > MPR(max_first)) return false;
            if (rel < MPR(opt_.converge)) return relative_residual(x, s) < opt_.residual_tol;
        }
        return false;
    }

    double relative_residual(const MVec& x, const MPR& s) const {
        MVec u = weights(s), F;
        g_.eval(x, u, F, nullptr);
        MPR scale = g_.gradient_scale(x, u);
        if (!(scale > 0)) return std::numeric_limits<double>::infinity();
        return static_cast<double>(max_norm(F) / scale);
    }

    // Tangent dx/ds of the path; d/ds of u_a is w_a u_a.
    bool tangent(const MVec& x, const MPR& s, MVec& dx) const {
        MVec u = weights(s), uw(u.size()), F;
        for (std::size_t a = 0; a < u.size(); ++a) uw[a] = u[a] * MP(expo_[a]);
        std::vector<MVec> J;
        g_.eval(x, u, F, &J);
        g_.eval(x, uw, F, nullptr);
        for (auto& f : F) f = -f;
        return linear_solve(J, F, dx);
    }

    // Euler predictor plus Newton corrector from s0 to s1 in n substeps.
    bool advance(MVec& x, double s0, double s1, int n) const {
        MVec y = x, dx;
        for (int k = 1; k <= n; ++k) {
            MPR sa = MPR(s0) + MPR(s1 - s0) * (k - 1) / n, sb = MPR(s0) + MPR(s1 - s0) * k / n;
            if (!tangent(y, sa, dx)) return false;
            for (int j = 0; j < n_; ++j) y[j] += dx[j] * MP(sb - sa);
            if (!correct(y, sb, 0.25)) return false;
        }
        x.swap(y);
        return true;
    }

    // True when some coordinate keeps fewer than collapse_digits significant digits.
    bool collapsed(const MVec& x) const {
        MVec p = g_.coords(x);
        auto sc = g_.term_scales(x);
        const double lost = std::numeric_limits<MPR>::digits10 - opt_.collapse_digits;
        for (std::size_t a = 0; a < p.size(); ++a) {
            if (!(sc[a] > 0)) continue;
            using boost::multiprecision::log10;
            if (static_cast<double>(log10(cabs(p[a]) / sc[a])) < -lost) return true;
        }
        return false;
    }

    std::vector<double> log_abs(const MVec& x) const {
        using boost::multiprecision::log;
        std::vector<double> out;
        for (const auto& p : g_.coords(x)) out.push_back(static_cast<double>(log(cabs(p))));
        return out;
    }

private:
    GradientSystem<MP, MPR> g_;
    TrackOptions opt_;
    int n_;
    MVec coef_;
    std::vector<MPR> expo_;
};

void check_schedule(const std::vector<double>& schedule, const TrackOptions& opt) {
    for (std::size_t i = 0; i < schedule.size(); ++i)
        if (!(schedule[i] > 0 && schedule[i] <= 1) || (i && !(schedule[i] < schedule[i - 1])))
            fail(ErrorCode::invalid_argument, "schedule must be strictly decreasing in (0, 1]");
    if (!(opt.step > 0)) fail(ErrorCode::invalid_argument, "track step must be positive");
}

}  // namespace

PathSample track(const LikelihoodSystem& sys, const ParametricWeights& w, const CVec& start,
                 const std::vector<double>& schedule, const TrackOptions& opt) {
    if (w.size() != sys.coords.size() || w.expo.size() != w.coef.size())
        fail(ErrorCode::invalid_argument, "expected " + std::to_string(sys.coords.size()) + " parametric weights");
    if (static_cast<int>(start.size()) != sys.vars) fail(ErrorCode::invalid_argument, "start has the wrong length");
    check_schedule(schedule, opt);
    Tracker tr(sys, w, opt);
    MVec x;
    for (const auto& z : start) x.push_back(make_complex<MP, MPR>(z.real(), z.imag()));
    if (!tr.correct(x, MPR(0), 1e-3))
        fail(ErrorCode::invalid_argument, "start is not a critical point of the t = 1 system");
    PathSample out;
    double s = 0;
    for (double t : schedule) {
        double target = std::log(t);
        if (target == s) continue;
        int n = std::max(1, static_cast<int>(std::ceil((s - target) / opt.step)));
        bool ok = false;
        for (int halving = 0; halving <= 2 && !ok; ++halving) ok = tr.advance(x, s, target, n << halving);
        if (!ok) {
            ++out.dropped;
            log().debug("sample t = {} dropped", t);
            continue;
        }
        s = target;
        if (tr.collapsed(x)) {
            out.early_exit = true;
            log().debug("coordinate collapse at t = {}", t);
            break;
        }
        out.t.push_back(t);
        out.log_abs.push_back(tr.log_abs(x));
        out.residuals.push_back(tr.relative_residual(x, MPR(s)));
        CVec pt;
        for (const auto& z : x) pt.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        out.points.push_back(std::move(pt));
    }
    return out;
}

RationalFit rationalize(double x, long cap) {
    if (cap < 1) fail(ErrorCode::invalid_argument, "denominator cap must be at least 1");
    if (!std::isfinite(x) || std::abs(x) > 1e15) fail(ErrorCode::numeric, "slope is not a finite moderate number");
    // Convergents h/k of the continued fraction of x.
    long long h0 = 1, k0 = 0, h1 = static_cast<long long>(std::floor(x)), k1 = 1;
    double r = x - std::floor(x);
    while (r > 1e-12) {
        double inv = 1 / r;
        if (inv > 1e15) break;
        long long a = static_cast<long long>(std::floor(inv));
        long long k2 = a * k1 + k0;
        if (k2 > cap) break;
        long long h2 = a * h1 + h0;
        h0 = h1, k0 = k1, h1 = h2, k1 = k2;
        r = inv - static_cast<double>(a);
    }
    RationalFit f;
    f.value = Rat(Int(static_cast<long>(h1)), Int(static_cast<long>(k1)));
    f.value.canonicalize();
    f.mismatch = std::abs(f.value.get_d() - x);
    return f;
}

TropicalResult fit_valuations(const PathSample& sample, long denom_cap, double rho_reject) {
    const std::size_t m = sample.t.size();
    if (m < 8) fail(ErrorCode::invalid_argument, "fit needs at least 8 samples, got " + std::to_string(m));
    if (sample.log_abs.size() != m) fail(ErrorCode::invalid_argument, "sample arrays differ in length");
    const std::size_t n = sample.log_abs[0].size();
    std::vector<double> lx(m);
    double mx = 0;
    for (std::size_t i = 0; i < m; ++i) mx += lx[i] = std::log(sample.t[i]);
    mx /= static_cast<double>(m);
    double sxx = 0;
    for (double v : lx) sxx += (v - mx) * (v - mx);
    if (!(sxx > 0)) fail(ErrorCode::invalid_argument, "samples need distinct t values");
    TropicalResult res;
    for (std::size_t a = 0; a < n; ++a) {
        double my = 0, sxy = 0;
        for (std::size_t i = 0; i < m; ++i) my += sample.log_abs[i][a];
        my /= static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) sxy += (lx[i] - mx) * (sample.log_abs[i][a] - my);
        double slope = sxy / sxx;
        RationalFit q = rationalize(slope, denom_cap);
        double qd = q.value.get_d();
        double b = my - qd * mx, rho = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double e = sample.log_abs[i][a] - (b + qd * lx[i]);
            rho += e * e;
        }
        res.q.push_back(q.value);
        res.slopes.push_back(slope);
        res.intercepts.push_back(b);
        res.rho.push_back(rho);
        res.max_rho = std::max(res.max_rho, rho);
        res.max_mismatch = std::max(res.max_mismatch, q.mismatch);
    }
    res.trusted = res.max_mismatch <= default_mismatch_tol && res.max_rho <= rho_reject;
    return res;
}

RatVec normalize_torus(const LikelihoodSystem& sys, const RatVec& q) {
    if (sys.torus.empty()) return q;
    const std::size_t r = sys.torus.size();
    // Solve sum_k lambda_k torus[k][i] = q[i] for i in the reference set.
    RatMat a;
    for (int i : sys.torus_reference) {
        if (i < 0 || static_cast<std::size_t>(i) >= q.size()) fail(ErrorCode::invalid_argument, "torus reference out of range");
        RatVec row(r + 1);
        for (std::size_t k = 0; k < r; ++k) row[k] = sys.torus[k][i];
        row[r] = q[i];
        a.push_back(std::move(row));
    }
    auto piv = rref(a);
    RatVec lambda(r, Rat(0));
    for (std::size_t i = 0; i < piv.size(); ++i) {
        if (piv[i] == static_cast<int>(r)) fail(ErrorCode::inconsistent, "torus action cannot zero the reference coordinates");
        lambda[piv[i]] = a[i][r];
    }
    RatVec out = q;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t k = 0; k < r; ++k) out[i] -= lambda[k] * sys.torus[k][i];
    return out;
}

LearnResult learn(const LikelihoodSystem& sys, const ParametricWeights& w, const std::vector<CVec>& starts,
                  const LearnOptions& opt) {
    if (opt.denom_cap < 1) fail(ErrorCode::invalid_argument, "denominator cap must be at least 1");
    if (w.size() != sys.coords.size()) fail(ErrorCode::invalid_argument, "weight count does not match the coordinates");
    check_schedule(opt.schedule, opt.track);
    for (const auto& st : starts)
        if (static_cast<int>(st.size()) != sys.vars) fail(ErrorCode::invalid_argument, "start has the wrong length");
    LearnResult out;
    out.paths.resize(starts.size());
    unsigned threads = std::max(1u, opt.threads);
    auto work = [&](unsigned t) {
        for (std::size_t i = t; i < starts.size(); i += threads) {
            PathReport& rep = out.paths[i];
            try {
                PathSample s = track(sys, w, starts[i], opt.schedule, opt.track);
                rep.early_exit = s.early_exit;
                rep.samples = static_cast<int>(s.t.size());
                if (rep.samples < 8) {
                    rep.failed = true;
                    continue;
                }
                rep.fit = fit_valuations(s, opt.denom_cap, opt.rho_reject);
                rep.fit.q = normalize_torus(sys, rep.fit.q);
            } catch (const Error& e) {
                rep.failed = true;
                log().info("path {} failed: {}", i, e.what());
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    std::map<RatVec, ValuationCluster> clusters;
    for (const auto& rep : out.paths) {
        if (rep.failed) {
            ++out.failed;
            continue;
        }
        auto& c = clusters[rep.fit.q];
        c.q = rep.fit.q;
        ++c.multiplicity;
        c.max_rho = std::max(c.max_rho, rep.fit.max_rho);
        c.trusted = c.trusted && rep.fit.trusted;
    }
    for (auto& [q, c] : clusters) out.clusters.push_back(std::move(c));
    return out;
}

}  // namespace mld
