#include "mld/strata_euler.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace mld {

int StratPoset::add(const std::string& label, const Int& chi, const Int& fiber_chi) {
    nodes_.push_back({label, chi, fiber_chi});
    final_ = false;
    return static_cast<int>(nodes_.size()) - 1;
}

void StratPoset::relate(int lower, int upper) {
    const int n = static_cast<int>(nodes_.size());
    if (lower < 0 || upper < 0 || lower >= n || upper >= n || lower == upper)
        fail(ErrorCode::invalid_argument, "bad stratum relation");
    covers_.emplace_back(lower, upper);
    final_ = false;
}

void StratPoset::finalize() {
    const std::size_t n = nodes_.size();
    if (n == 0) fail(ErrorCode::invalid_argument, "empty stratification");
    leq_.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) leq_[i][i] = 1;
    for (auto [a, b] : covers_) leq_[a][b] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (leq_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (leq_[k][j]) leq_[i][j] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (!leq_[i][0]) fail(ErrorCode::invalid_argument, "stratum '" + nodes_[i].label + "' is not below the base");
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && leq_[i][j] && leq_[j][i]) fail(ErrorCode::invalid_argument, "cyclic stratum relation");
    }
    // Interval sizes give a linear extension for the recursion.
    std::vector<std::size_t> height(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (leq_[i][j]) ++height[i];
    mu_.assign(n, std::vector<Int>(n, Int(0)));
    for (std::size_t a = 0; a < n; ++a) {
        // Upward from a: process b in increasing size of [a,b].
        std::vector<std::size_t> up;
        for (std::size_t b = 0; b < n; ++b)
            if (leq_[a][b]) up.push_back(b);
        std::sort(up.begin(), up.end(), [&](std::size_t x, std::size_t y) { return height[x] > height[y]; });
        for (std::size_t b : up) {
            if (b == a) {
                mu_[a][b] = 1;
                continue;
            }
            Int s = 0;
            for (std::size_t c : up)
                if (c != b && leq_[c][b]) s += mu_[a][c];
            mu_[a][b] = -s;
        }
    }
    final_ = true;
}

bool StratPoset::mobius_consistent() const {
    if (!final_) return false;
    const std::size_t n = nodes_.size();
    for (std::size_t a = 0; a < n; ++a) {
        if (mu_[a][a] != 1) return false;
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b || !leq_[a][b]) continue;
            Int s = 0;
            for (std::size_t c = 0; c < n; ++c)
                if (leq_[a][c] && leq_[c][b]) s += mu_[a][c];
            if (s != 0) return false;
        }
    }
    return true;
}

ChiTotal chi_total(const StratPoset& p) {
    if (!p.mobius_consistent()) fail(ErrorCode::inconsistent, "Moebius function of the stratification is inconsistent");
    const int n = static_cast<int>(p.size());
    const Int& fy = p.node(0).fiber_chi;
    ChiTotal t{0, p.node(0).chi * fy};
    for (int s = 0; s < n; ++s) {
        Int direct = 0, deficit = 0;
        for (int u = 0; u < n; ++u) {
            if (!p.leq(s, u)) continue;
            direct += p.mobius(s, u) * p.node(u).fiber_chi;
            deficit += p.mobius(s, u) * (p.node(u).fiber_chi - fy);
        }
        t.direct += p.node(s).chi * direct;
        t.deficit += p.node(s).chi * deficit;
    }
    if (t.direct != t.deficit)
        fail(ErrorCode::inconsistent, "the two Euler characteristic expansions disagree: " + t.direct.get_str() +
                                          " vs " + t.deficit.get_str());
    return t;
}

Int fiber_deficit_sum(const StratPoset& p, int s) {
    const Int& fy = p.node(0).fiber_chi;
    Int r = 0;
    for (int u = 0; u < static_cast<int>(p.size()); ++u)
        if (p.leq(s, u)) r += p.mobius(s, u) * (fy - p.node(u).fiber_chi);
    return r;
}

namespace {

void check_profile(const StratumProfile& n) {
    for (auto [h, c] : n)
        if (h < 3 || c < 0) fail(ErrorCode::invalid_argument, "profile entries need h >= 3 and n_h >= 0");
}

StratumProfile clean(const StratumProfile& n) {
    StratumProfile r;
    for (auto [h, c] : n)
        if (c > 0) r[h] = c;
    return r;
}

}  // namespace

Int sigma(const StratumProfile& n) {
    check_profile(n);
    Int s = 0;
    for (auto [h, c] : n) s += binomial(h - 1, 2) * c;
    return s;
}

int rho(const StratumProfile& n) {
    check_profile(n);
    auto c = clean(n);
    if (c.size() == 1 && c.begin()->second == 1) return (c.begin()->first % 2 == 1) ? 1 : -1;
    return 0;
}

Int rho_recursive(const StratumProfile& n) {
    check_profile(n);
    std::map<StratumProfile, Int> memo;
    std::function<Int(const StratumProfile&)> go = [&](const StratumProfile& prof) -> Int {
        auto it = memo.find(prof);
        if (it != memo.end()) return it->second;
        // Each special point of multiplicity k survives in a sub-profile with
        // j in {3..k} of its lines (C(k,j) choices) or disappears.
        std::vector<int> pts;
        for (auto [h, c] : prof)
            for (int i = 0; i < c; ++i) pts.push_back(h);
        Int below = 0;
        std::vector<int> choice(pts.size());
        std::function<void(std::size_t, Int)> walk = [&](std::size_t i, Int weight) {
            if (i == pts.size()) {
                StratumProfile sub;
                bool same = true;
                for (std::size_t t = 0; t < pts.size(); ++t) {
                    if (choice[t] != pts[t]) same = false;
                    if (choice[t] >= 3) sub[choice[t]] += 1;
                }
                if (!same) below += weight * go(sub);
                return;
            }
            choice[i] = 0;
            walk(i + 1, weight);
            for (int j = 3; j <= pts[i]; ++j) {
                choice[i] = j;
                walk(i + 1, weight * binomial(pts[i], j));
            }
        };
        walk(0, Int(1));
        Int r = sigma(prof) - below;
        memo[prof] = r;
        return r;
    };
    return go(clean(n));
}

std::vector<StratumProfile> enumerate_profiles(int budget) {
    std::vector<StratumProfile> out;
    StratumProfile cur;
    std::function<void(int, int)> go = [&](int h, int left) {
        if (h > left) {
            out.push_back(cur);
            return;
        }
        for (int c = 0; c * h <= left; ++c) {
            if (c > 0) cur[h] = c;
            go(h + 1, left - c * h);
        }
        cur.erase(h);
    };
    go(3, budget);
    return out;
}

Int stratum_count(long m, long h) {
    if (h < 0 || m < 2 * h) fail(ErrorCode::invalid_argument, "stratum_count needs m >= 2h");
    Int p = 1;
    for (long i = 0; i < h; ++i) p *= binomial(m - 2 * i, 2);
    Int f = factorial(h);
    if (p % f != 0) fail(ErrorCode::inconsistent, "binomial product not divisible by h!");
    return p / f;
}

Int chi_X3_recursion(long m, const Int& chi_prev, const Int& fiber_chi, const std::map<long, Int>& strata_chis) {
    Int r = chi_prev * fiber_chi;
    for (const auto& [h, chi] : strata_chis) {
        if (h < 3 || m < 2 * h) fail(ErrorCode::invalid_argument, "stratum constant with h outside 3..m/2");
        Int p = 1;
        for (long i = 0; i < h; ++i) p *= binomial(m - 2 * i, 2);
        Int f = factorial(h);
        if (p % f != 0) fail(ErrorCode::inconsistent, "inexact division by h! in the recursion");
        Int term = p / f * chi;
        r += (h % 2 == 0) ? term : Int(-term);
    }
    return r;
}

Int orbit_size(const std::vector<Quadruple>& rep) {
    using Triple = std::array<int, 3>;
    std::vector<Triple> base;
    for (const auto& q : rep) {
        if (q[3] != 8) fail(ErrorCode::invalid_argument, "each quadruple must end in 8");
        Triple t{q[0], q[1], q[2]};
        for (int v : t)
            if (v < 1 || v > 7) fail(ErrorCode::invalid_argument, "quadruple indices must lie in 1..7 before the 8");
        if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2])
            fail(ErrorCode::invalid_argument, "quadruple indices must be distinct");
        std::sort(t.begin(), t.end());
        base.push_back(t);
    }
    std::set<std::vector<Triple>> seen;
    std::array<int, 8> perm{0, 1, 2, 3, 4, 5, 6, 7};
    do {
        std::vector<Triple> img;
        for (const auto& t : base) {
            Triple u{perm[t[0]], perm[t[1]], perm[t[2]]};
            std::sort(u.begin(), u.end());
            img.push_back(u);
        }
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        seen.insert(img);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return Int(static_cast<unsigned long>(seen.size()));
}

Int decomp_48(const SoftDecomposition48& d) {
    Int r = d.regular;
    for (const auto& t : d.types) r += t.A * t.B;
    return r;
}

}  // namespace mld
