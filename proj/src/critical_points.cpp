#include "mld/critical_points.hpp"

#include "mld/linalg.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace mld {

LikelihoodSystem from_config(int k, int m) {
    if (k < 2 || m <= k + 1) fail(ErrorCode::invalid_argument, "configuration needs 2 <= k and m >= k + 2");
    const int cols = m - k - 1;
    const int vars = (k - 1) * cols;
    LikelihoodSystem sys;
    sys.vars = vars;
    for (int r = 1; r < k; ++r)
        for (int j = 0; j < cols; ++j) sys.var_names.push_back("x" + std::to_string(r) + "_" + std::to_string(k + 2 + j));
    std::vector<std::vector<Poly>> mat(k, std::vector<Poly>(m, Poly(vars)));
    for (int col = 0; col < k; ++col) {
        int r = k - 1 - col;
        mat[r][col] = Poly::constant(vars, Rat((k - r) % 2 == 0 ? 1 : -1));
    }
    for (int r = 0; r < k; ++r) mat[r][k] = Poly::constant(vars, Rat(1));
    for (int j = 0; j < cols; ++j) {
        mat[0][k + 1 + j] = Poly::constant(vars, Rat(1));
        for (int r = 1; r < k; ++r) mat[r][k + 1 + j] = Poly::variable(vars, (r - 1) * cols + j);
    }
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        std::vector<std::vector<Poly>> sub(k, std::vector<Poly>(k));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) sub[r][c] = mat[r][idx[c]];
        Poly det = poly_determinant(sub);
        if (det.is_zero()) fail(ErrorCode::internal, "a maximal minor vanishes identically");
        if (!det.is_constant()) {
            sys.coords.push_back(det);
            std::string label = "p";
            for (int c : idx) label += std::to_string(c + 1);
            sys.coord_labels.push_back(label);
        }
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return sys;
}

LikelihoodSystem from_linear_model(const Arrangement& arr) {
    const int d = arr.dim();
    if (d < 1) fail(ErrorCode::invalid_argument, "arrangement dimension must be positive");
    LikelihoodSystem sys;
    sys.vars = d;
    for (int j = 0; j < d; ++j) sys.var_names.push_back("x" + std::to_string(j + 1));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Poly p = Poly::constant(d, -arr[i].offset);
        bool zero = true;
        for (int j = 0; j < d; ++j) {
            if (arr[i].normal[j] != 0) zero = false;
            p = p + Poly::variable(d, j) * arr[i].normal[j];
        }
        if (zero) fail(ErrorCode::invalid_argument, "hyperplane " + std::to_string(i) + " has a zero normal");
        sys.coords.push_back(p);
        sys.coord_labels.push_back("h" + std::to_string(i));
    }
    return sys;
}

LikelihoodSystem from_model(const LinearModel& model) {
    const int d = model.d();
    const RatVec& h = model.infinity();
    RatMat z = nullspace(RatMat{h}, d + 1);
    RatVec x0(d + 1, Rat(0));
    for (int r = 0; r <= d; ++r)
        if (h[r] != 0) {
            x0[r] = 1 / h[r];
            break;
        }
    LikelihoodSystem sys;
    sys.vars = d;
    for (int j = 0; j < d; ++j) sys.var_names.push_back("y" + std::to_string(j + 1));
    for (int i = 0; i <= model.n(); ++i) {
        Rat c = 0;
        for (int r = 0; r <= d; ++r) c += model.forms()[r][i] * x0[r];
        Poly p = Poly::constant(d, c);
        for (int j = 0; j < d; ++j) {
            Rat a = 0;
            for (int r = 0; r <= d; ++r) a += z[j][r] * model.forms()[r][i];
            p = p + Poly::variable(d, j) * a;
        }
        if (p.is_zero()) fail(ErrorCode::invalid_argument, "coordinate " + std::to_string(i) + " vanishes on the chart");
        sys.coords.push_back(p);
        sys.coord_labels.push_back("p" + std::to_string(i));
    }
    return sys;
}

LikelihoodSystem pappus_system() {
    LikelihoodSystem sys;
    sys.vars = 2;
    sys.var_names = {"x", "y"};
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1), one = Poly::constant(2, Rat(1));
    sys.coords = {x, y, one - x, one - y, one - x - y, one - x * y, x * y - x - y};
    sys.coord_labels = {"x", "y", "1-x", "1-y", "1-x-y", "1-xy", "xy-x-y"};
    return sys;
}

CVec random_weights(std::size_t n, Rng& rng) {
    std::uniform_real_distribution<double> re(0.5, 2.0), im(-1.0, 1.0);
    CVec u(n);
    for (auto& z : u) {
        double a = re(rng);
        z = Cplx(a, im(rng));
    }
    return u;
}

CVec positive_weights(std::size_t n, Rng& rng) {
    std::uniform_real_distribution<double> re(0.5, 2.0);
    CVec u(n);
    for (auto& z : u) z = Cplx(re(rng), 0.0);
    return u;
}

namespace {

struct StartResult {
    bool ok = false;
    bool singular = false;
    int reason = 0;  // 1 diverged, 2 no convergence, 3 rejected after polish
    CVec x;
    double residual = 0;
};

StartResult run_start(const GradientSystem<Cplx, double>& gd, const GradientSystem<QuadCplx, QuadReal>& gq,
                      const CVec& u, const std::vector<QuadCplx>& uq, const SolveOptions& opt,
                      const std::vector<double>& powers, std::uint64_t index) {
    StartResult res;
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    Rng rng(seq);
    // Log-uniform radius in the annulus.
    std::uniform_real_distribution<double> lrad(std::log(opt.start_rmin), std::log(opt.start_rmax)),
        ang(0, 2 * std::numbers::pi);
    const int n = gd.vars();
    CVec x(n), F, dx;
    for (auto& z : x) z = std::polar(std::exp(lrad(rng)), ang(rng));
    std::vector<CVec> J, Jn;
    CVec Fn, xn(n);
    const double c = powers[index % powers.size()];
    std::uniform_real_distribution<double> jitter(1 - opt.clear_spread, 1 + opt.clear_spread);
    std::vector<double> clear(gd.size());
    for (auto& v : clear) v = c * jitter(rng);
    auto merit = [&](double fnorm, double logp) { return std::log(fnorm) + logp; };
    double logp = 0;
    gd.eval(x, u, F, &J, &clear, &logp);
    bool conv = false;
    for (int it = 0; it < opt.max_iter; ++it) {
        double r = max_norm(F);
        if (!std::isfinite(r)) {
            res.reason = 1;
            return res;
        }
        if (r < 1e-12) {
            conv = true;
            break;
        }
        CVec rhs = F;
        for (auto& f : rhs) f = -f;
        if (!linear_solve(J, rhs, dx)) {
            res.singular = true;
            return res;
        }
        double step = max_norm(dx), size = 1 + max_norm(x);
        if (!std::isfinite(step)) {
            res.reason = 1;
            return res;
        }
        if (step > size)
            for (auto& z : dx) z *= size / step;
        // Backtrack on |prod p|^c |F|.
        const double m0 = merit(r, logp);
        double t = 1, logpn = 0, minp = 0;
        for (int h = 0; h < 10; ++h, t *= 0.5) {
            for (int j = 0; j < n; ++j) xn[j] = x[j] + t * dx[j];
            minp = gd.eval(xn, u, Fn, &Jn, &clear, &logpn);
            double rn = max_norm(Fn);
            if (std::isfinite(rn) && std::isfinite(logpn) && merit(rn, logpn) < m0) break;
        }
        x.swap(xn);
        F.swap(Fn);
        J.swap(Jn);
        logp = logpn;
        // Trajectories heading to infinity or onto a coordinate hyperplane are dropped early.
        if (max_norm(x) > 1e6 || minp < 1e-12) {
            res.reason = 1;
            return res;
        }
        if (t * step < 1e-14 * size) {
            conv = max_norm(F) < 1e-8;
            break;
        }
    }
    if (!conv) {
        res.reason = 2;
        return res;
    }
    // Polish at quadruple precision.
    std::vector<QuadCplx> xq(n), Fq, dq;
    std::vector<std::vector<QuadCplx>> Jq;
    for (int j = 0; j < n; ++j) xq[j] = make_complex<QuadCplx, QuadReal>(x[j].real(), x[j].imag());
    for (int it = 0; it < 6; ++it) {
        gq.eval(xq, uq, Fq, &Jq);
        for (auto& f : Fq) f = -f;
        if (!linear_solve(Jq, Fq, dq)) {
            res.singular = true;
            return res;
        }
        for (int j = 0; j < n; ++j) xq[j] += dq[j];
    }
    QuadReal minp = gq.eval(xq, uq, Fq, nullptr);
    QuadReal resid = max_norm(Fq);
    if (!(resid < opt.residual_tol) || !(minp > opt.vanish_guard)) {
        res.reason = 3;
        return res;
    }
    res.ok = true;
    res.residual = static_cast<double>(resid);
    res.x.resize(n);
    for (int j = 0; j < n; ++j)
        res.x[j] = Cplx(static_cast<double>(xq[j].real()), static_cast<double>(xq[j].imag()));
    return res;
}

double dist(const CVec& a, const CVec& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

CriticalSolutionSet solve_multistart(const LikelihoodSystem& sys, const CVec& weights, const SolveOptions& opt) {
    if (weights.size() != sys.coords.size())
        fail(ErrorCode::invalid_argument, "expected " + std::to_string(sys.coords.size()) + " weights, got " +
                                              std::to_string(weights.size()));
    if (opt.budget < 1) fail(ErrorCode::invalid_argument, "budget must be positive");
    if (!(opt.start_rmin > 0 && opt.start_rmin < opt.start_rmax))
        fail(ErrorCode::invalid_argument, "start annulus needs 0 < rmin < rmax");
    for (const auto& p : sys.coords)
        if (p.is_zero()) fail(ErrorCode::invalid_argument, "a coordinate polynomial is zero");
    CriticalSolutionSet out;
    out.starts = opt.budget;
    if (sys.vars == 0) return out;
    GradientSystem<Cplx, double> gd(sys.vars, sys.coords);
    GradientSystem<QuadCplx, QuadReal> gq(sys.vars, sys.coords);
    std::vector<QuadCplx> uq;
    for (const auto& z : weights) uq.push_back(make_complex<QuadCplx, QuadReal>(z.real(), z.imag()));

    std::vector<double> powers = opt.clear_powers;
    if (powers.empty()) {
        const double n = static_cast<double>(sys.coords.size());
        powers = {1.75 / n, 2.0 / n};
    }
    if (!(opt.clear_spread >= 0 && opt.clear_spread < 1)) fail(ErrorCode::invalid_argument, "clear_spread must lie in [0, 1)");
    for (double c : powers)
        if (!std::isfinite(c) || c < 0) fail(ErrorCode::invalid_argument, "clearing powers must be finite and nonnegative");
    std::vector<StartResult> results(opt.budget);
    unsigned threads = std::max(1u, opt.threads);
    auto work = [&](unsigned t) {
        for (int s = static_cast<int>(t); s < opt.budget; s += static_cast<int>(threads))
            results[s] = run_start(gd, gq, weights, uq, opt, powers, static_cast<std::uint64_t>(s));
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (int s = 0; s < opt.budget; ++s) {
        const auto& r = results[s];
        if (r.singular) {
            ++out.singular;
            log().debug("start {} abandoned at a singular Jacobian", s);
        }
        if (r.reason == 1) ++out.diverged;
        if (r.reason == 2) ++out.unconverged;
        if (r.reason == 3) ++out.rejected;
        if (!r.ok) continue;
        ++out.converged;
        bool dup = false;
        for (std::size_t i = 0; i < out.points.size(); ++i)
            if (dist(out.points[i], r.x) < opt.dedup_radius) {
                dup = true;
                if (r.residual < out.residuals[i]) {
                    out.points[i] = r.x;
                    out.residuals[i] = r.residual;
                }
                break;
            }
        if (dup) continue;
        out.points.push_back(r.x);
        out.residuals.push_back(r.residual);
        out.last_new_start = s;
    }
    out.count = out.points.size();
    out.saturated = out.count > 0 ? out.last_new_start < opt.budget - opt.budget / 4 : opt.budget >= 4;
    std::vector<std::size_t> order(out.count);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto &pa = out.points[a], &pb = out.points[b];
        for (std::size_t j = 0; j < pa.size(); ++j) {
            if (pa[j].real() != pb[j].real()) return pa[j].real() < pb[j].real();
            if (pa[j].imag() != pb[j].imag()) return pa[j].imag() < pb[j].imag();
        }
        return false;
    });
    std::vector<CVec> pts;
    std::vector<double> res;
    for (auto i : order) {
        pts.push_back(out.points[i]);
        res.push_back(out.residuals[i]);
    }
    out.points = std::move(pts);
    out.residuals = std::move(res);
    out.separation = 0;
    for (std::size_t i = 0; i < out.count; ++i)
        for (std::size_t j = i + 1; j < out.count; ++j) {
            double dd = dist(out.points[i], out.points[j]);
            if (out.separation == 0 || dd < out.separation) out.separation = dd;
        }
    return out;
}

}  // namespace mld
