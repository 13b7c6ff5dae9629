#include "mld/discriminantal.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <regex>
#include <set>

#include <spdlog/spdlog.h>

namespace mld {

namespace {

// Calls fn on every size-r subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(int n, int r, Fn&& fn) {
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    if (r > n) return;
    for (;;) {
        fn(idx);
        int i = r - 1;
        while (i >= 0 && idx[i] == n - r + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

Rat random_rational(Rng& rng, long bound) {
    std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
    return Rat(num(rng), den(rng));
}

std::string subset_str(const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
    return out + "}";
}

}  // namespace

Rat determinant(RatMat a) {
    const std::size_t n = a.size();
    Rat det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rat f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

ConfigMatrix ConfigMatrix::from_unknowns(int k, int m, const RatMat& x) {
    if (k < 2 || m <= k) fail(ErrorCode::invalid_argument, "configuration needs 2 <= k < m");
    const int cols = m - k - 1;
    if (static_cast<int>(x.size()) != k - 1 ||
        std::any_of(x.begin(), x.end(), [&](const RatVec& r) { return static_cast<int>(r.size()) != cols; }))
        fail(ErrorCode::invalid_argument, "unknowns must form a (k-1) x (m-k-1) matrix");
    ConfigMatrix c;
    c.k = k;
    c.m = m;
    c.entries.assign(k, RatVec(m, Rat(0)));
    for (int col = 0; col < k; ++col) {
        int r = k - 1 - col;
        c.entries[r][col] = ((k - r) % 2 == 0) ? 1 : -1;
    }
    for (int r = 0; r < k; ++r) c.entries[r][k] = 1;
    for (int j = 0; j < cols; ++j) {
        c.entries[0][k + 1 + j] = 1;
        for (int r = 1; r < k; ++r) c.entries[r][k + 1 + j] = x[r - 1][j];
    }
    return c;
}

RatMat ConfigMatrix::unknowns() const {
    RatMat x(k - 1, RatVec(m - k - 1));
    for (int r = 1; r < k; ++r)
        for (int j = 0; j < m - k - 1; ++j) x[r - 1][j] = entries[r][k + 1 + j];
    return x;
}

const RatVec ConfigMatrix::column(int j) const {
    RatVec v(k);
    for (int r = 0; r < k; ++r) v[r] = entries[r][j];
    return v;
}

std::vector<int> ConfigMatrix::vanishing_minor() const {
    std::vector<int> bad;
    for_each_subset(m, k, [&](const std::vector<int>& s) {
        if (!bad.empty()) return;
        RatMat sub(k, RatVec(k));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) sub[r][c] = entries[r][s[c]];
        if (determinant(sub) == 0) bad = s;
    });
    return bad;
}

std::vector<NormalEntry> hyperplane_normals(const ConfigMatrix& cfg) {
    const int k = cfg.k;
    std::vector<NormalEntry> out;
    for_each_subset(cfg.m, k - 1, [&](const std::vector<int>& s) {
        NormalEntry e;
        e.columns = s;
        e.normal.assign(k, Rat(0));
        for (int r = 0; r < k; ++r) {
            RatMat sub;
            for (int rr = 0; rr < k; ++rr) {
                if (rr == r) continue;
                RatVec row;
                for (int c : s) row.push_back(cfg.entries[rr][c]);
                sub.push_back(row);
            }
            Rat det = determinant(sub);
            e.normal[r] = (r % 2 == 0) ? det : Rat(-det);
        }
        e.zero = std::all_of(e.normal.begin(), e.normal.end(), [](const Rat& a) { return a == 0; });
        out.push_back(std::move(e));
    });
    return out;
}

namespace {

std::vector<NormalEntry> checked_normals(const ConfigMatrix& cfg, bool require_generic) {
    auto normals = hyperplane_normals(cfg);
    if (require_generic) {
        for (const auto& e : normals)
            if (e.zero)
                fail(ErrorCode::degenerate, "columns " + subset_str(e.columns) + " are dependent (zero normal)");
        auto bad = cfg.vanishing_minor();
        if (!bad.empty())
            fail(ErrorCode::degenerate, "configuration is not generic: minor " + subset_str(bad) + " vanishes");
    }
    return normals;
}

}  // namespace

Arrangement build_Btilde(const ConfigMatrix& cfg, bool require_generic) {
    Arrangement arr(cfg.k);
    for (const auto& e : checked_normals(cfg, require_generic))
        if (!e.zero) arr.add({e.normal, Rat(0)});
    return arr;
}

Arrangement build_B(const ConfigMatrix& cfg, bool require_generic) {
    Arrangement arr(cfg.k - 1);
    for (const auto& e : checked_normals(cfg, require_generic)) {
        if (e.zero) continue;
        RatVec a(e.normal.begin() + 1, e.normal.end());
        if (std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; })) continue;
        arr.add({a, Rat(-e.normal[0])});
    }
    return arr;
}

Arrangement build_A(const ConfigMatrix& cfg, const RatVec& section, bool require_generic) {
    if (static_cast<int>(section.size()) != cfg.k - 1)
        fail(ErrorCode::invalid_argument, "section vector must have k-1 entries");
    Arrangement arr(cfg.k - 1);
    for (const auto& e : checked_normals(cfg, require_generic)) {
        if (e.zero) continue;
        RatVec a(cfg.k - 1);
        for (int i = 1; i < cfg.k; ++i) a[i - 1] = e.normal[i] - e.normal[0] * section[i - 1];
        if (std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; }))
            fail(ErrorCode::degenerate, "section is parallel to the hyperplane of columns " + subset_str(e.columns));
        arr.add({a, Rat(-e.normal[0])});
    }
    return arr;
}

RatVec random_section(int k, Rng& rng) {
    RatVec s(k - 1);
    for (auto& x : s) x = random_rational(rng, 97);
    return s;
}

ConfigMatrix random_generic_config(int k, int m, Rng& rng, long bound, int budget) {
    if (k < 2 || m <= k) fail(ErrorCode::invalid_argument, "configuration needs 2 <= k < m");
    for (int attempt = 0; attempt < budget; ++attempt) {
        RatMat x(k - 1, RatVec(m - k - 1));
        for (auto& row : x)
            for (auto& v : row) v = random_rational(rng, bound);
        auto cfg = ConfigMatrix::from_unknowns(k, m, x);
        if (cfg.generic()) return cfg;
    }
    fail(ErrorCode::budget, "no generic configuration within " + std::to_string(budget) +
                                " draws; raise the coefficient bound");
}

namespace {

struct Elementary {
    std::array<std::pair<int, int>, 3> lines;  // 0-based point pairs
};

RatVec cross(const RatVec& a, const RatVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Rat concurrency(const ConfigMatrix& cfg, const Elementary& e) {
    RatMat rows;
    for (auto [a, b] : e.lines) rows.push_back(cross(cfg.column(a), cfg.column(b)));
    return determinant(rows);
}

}  // namespace

ConfigMatrix degenerate_config(int k, int m, const std::string& spec, Rng& rng, long bound) {
    if (k != 3) fail(ErrorCode::unsupported, "degenerate configurations are implemented for k = 3 only");
    if (m <= k) fail(ErrorCode::invalid_argument, "configuration needs k < m");
    std::vector<Elementary> conds;
    std::vector<std::set<int>> cond_points;
    std::regex pair_re(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(';', start);
        if (end == std::string::npos) end = spec.size();
        std::string part = spec.substr(start, end - start);
        start = end + 1;
        if (part.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<std::pair<int, int>> pairs;
        std::set<int> used;
        std::string rest = std::regex_replace(part, pair_re, "");
        if (rest.find_first_not_of(" \t") != std::string::npos)
            fail(ErrorCode::parse, "bad degenerate spec '" + part + "'");
        for (auto it = std::sregex_iterator(part.begin(), part.end(), pair_re); it != std::sregex_iterator(); ++it) {
            int a = std::stoi((*it)[1]) - 1, b = std::stoi((*it)[2]) - 1;
            if (a < 0 || b < 0 || a >= m || b >= m || a == b)
                fail(ErrorCode::invalid_argument, "bad point pair in '" + part + "'");
            if (used.count(a) || used.count(b))
                fail(ErrorCode::invalid_argument, "point pairs in one condition must be disjoint: '" + part + "'");
            used.insert(a);
            used.insert(b);
            pairs.emplace_back(a, b);
        }
        if (pairs.size() < 3) fail(ErrorCode::invalid_argument, "a concurrency condition needs at least 3 lines");
        for (std::size_t j = 2; j < pairs.size(); ++j) {
            conds.push_back({{pairs[0], pairs[1], pairs[j]}});
            std::set<int> pts{pairs[0].first, pairs[0].second, pairs[1].first, pairs[1].second, pairs[j].first,
                              pairs[j].second};
            cond_points.push_back(pts);
        }
    }
    if (conds.empty()) fail(ErrorCode::parse, "empty degenerate spec");

    // Each condition is solved for one coordinate of a free point of its last
    // line that no earlier condition mentions; the determinant is affine in it.
    std::vector<std::pair<int, int>> var(conds.size(), {-1, -1});  // (row, column) in unknowns
    std::set<int> earlier;
    for (std::size_t c = 0; c < conds.size(); ++c) {
        for (int p : {conds[c].lines[2].second, conds[c].lines[2].first}) {
            if (p >= k + 1 && !earlier.count(p)) {
                var[c] = {0, p - k - 1};
                break;
            }
        }
        if (var[c].first < 0)
            fail(ErrorCode::unsupported, "cannot solve condition " + std::to_string(c + 1) +
                                             ": its last line has no free point unused by earlier conditions");
        earlier.insert(cond_points[c].begin(), cond_points[c].end());
    }

    for (int attempt = 0; attempt < 500; ++attempt) {
        RatMat x(k - 1, RatVec(m - k - 1));
        for (auto& row : x)
            for (auto& v : row) v = random_rational(rng, bound);
        bool ok = true;
        for (std::size_t c = 0; c < conds.size() && ok; ++c) {
            ok = false;
            const int col = var[c].second;
            for (int row : {0, 1}) {
                x[row][col] = 0;
                Rat f0 = concurrency(ConfigMatrix::from_unknowns(k, m, x), conds[c]);
                x[row][col] = 1;
                Rat f1 = concurrency(ConfigMatrix::from_unknowns(k, m, x), conds[c]);
                if (f1 == f0) continue;
                x[row][col] = -f0 / (f1 - f0);
                ok = true;
                break;
            }
        }
        if (!ok) continue;
        auto cfg = ConfigMatrix::from_unknowns(k, m, x);
        if (!cfg.generic()) continue;
        if (std::all_of(conds.begin(), conds.end(), [&](const Elementary& e) { return concurrency(cfg, e) == 0; }))
            return cfg;
    }
    fail(ErrorCode::budget, "could not realize degenerate configuration '" + spec + "'");
}

std::vector<Rat> soft_poly_coefficients(int k) {
    // Expand (m - a) * P(m) / D with P given in ascending powers.
    std::vector<long> p;
    long a = 0, D = 1;
    if (k == 3) {
        p = {-14, 11, -6, 1};
        a = 4;
        D = 8;  // (2!)^3
    } else if (k == 4) {
        p = {-20736, 57276, -57510, 29198, -7934, 1019, -5, -13, 1};
        a = 5;
        D = 1296;  // (3!)^4
    } else {
        fail(ErrorCode::unsupported, "Soft polynomials are transcribed for k = 3, 4 only");
    }
    std::vector<Rat> out(p.size() + 1, Rat(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i + 1] += Rat(p[i], D);
        out[i] -= Rat(p[i] * a, D);
    }
    for (auto& c : out) c.canonicalize();
    return out;
}

Rat soft_poly_eval(int k, long m) {
    auto c = soft_poly_coefficients(k);
    if (m < k + 1) fail(ErrorCode::invalid_argument, "Soft polynomial needs m >= k+1");
    Rat r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * m + *it;
    r.canonicalize();
    return r;
}

DiscSummary discriminantal_summary(const ConfigMatrix& cfg, Rng& rng, bool with_A, bool require_generic) {
    DiscSummary s;
    s.k = cfg.k;
    s.m = cfg.m;
    s.B = build_B(cfg, require_generic);
    auto pB = build_poset(s.B);
    s.chi_B = char_poly(pB);
    s.regions_B = regions(s.chi_B);
    if (!with_A) return s;
    s.Btilde = build_Btilde(cfg, require_generic);
    auto pBt = build_poset(s.Btilde);
    s.chi_Btilde = char_poly(pBt);
    for (int attempt = 0; attempt < 8 && !s.section_generic; ++attempt) {
        s.section = random_section(cfg.k, rng);
        try {
            s.A = build_A(cfg, s.section, require_generic);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::degenerate) continue;
            throw;
        }
        auto pA = build_poset(s.A);
        bool same = s.A.size() == s.Btilde.size();
        for (int c = 1; c < cfg.k && same; ++c) same = pA.count(c) == pBt.count(c);
        if (!same) {
            log().info("affine section not generic, drawing another");
            continue;
        }
        s.section_generic = true;
        s.chi_A = char_poly(pA);
    }
    if (!s.section_generic) fail(ErrorCode::degenerate, "no generic affine section found");
    s.regions_A = regions(s.chi_A);
    auto dc = decone(s.chi_Btilde);
    s.decone_matches = dc.affine == s.chi_B && dc.restriction == s.chi_A;
    s.restriction_identity = decone_identity(s.chi_B, s.chi_A);
    s.derivative_identity = s.chi_B.eval(1) == s.chi_A.derivative_at(1) + s.chi_A.eval(1);
    return s;
}

}  // namespace mld
