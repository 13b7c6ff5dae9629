#include "mld/arrangement.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace mld {

Hyperplane make_hyperplane(RatVec normal, Rat offset) {
    auto it = std::find_if(normal.begin(), normal.end(), [](const Rat& a) { return a != 0; });
    if (it == normal.end()) fail(ErrorCode::invalid_argument, "hyperplane with zero normal");
    Rat s = *it;
    for (auto& a : normal) a /= s;
    offset /= s;
    return {std::move(normal), std::move(offset)};
}

Arrangement::Arrangement(int dim) : dim_(dim) {
    if (dim < 0) fail(ErrorCode::invalid_argument, "negative dimension");
}

Arrangement::Arrangement(int dim, const std::vector<Hyperplane>& hs) : Arrangement(dim) {
    for (const auto& h : hs) add(h);
}

bool Arrangement::add(const Hyperplane& h) {
    if (static_cast<int>(h.normal.size()) != dim_)
        fail(ErrorCode::invalid_argument, "hyperplane dimension mismatch");
    Hyperplane c = make_hyperplane(h.normal, h.offset);
    if (std::find(hs_.begin(), hs_.end(), c) != hs_.end()) {
        log().info("merged duplicate hyperplane");
        return false;
    }
    hs_.push_back(std::move(c));
    return true;
}

bool Arrangement::central() const {
    return std::all_of(hs_.begin(), hs_.end(), [](const Hyperplane& h) { return h.offset == 0; });
}

Arrangement parse_arrangement(std::string_view text) {
    std::vector<std::string> lines;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        lines.push_back(line);
    }
    if (lines.empty()) fail(ErrorCode::parse, "arrangement file is empty");
    std::istringstream head(lines[0]);
    long d = -1, n = -1;
    std::string kind;
    if (!(head >> d >> n >> kind) || d < 1 || n < 0 || (kind != "central" && kind != "affine"))
        fail(ErrorCode::parse, "bad header, expected 'd n central|affine'");
    if (static_cast<long>(lines.size()) - 1 != n)
        fail(ErrorCode::parse, "header announces " + std::to_string(n) + " hyperplanes, found " +
                                   std::to_string(lines.size() - 1));
    Arrangement arr(static_cast<int>(d));
    for (long i = 0; i < n; ++i) {
        std::istringstream row(lines[i + 1]);
        std::vector<Rat> vals;
        std::string tok;
        while (row >> tok) vals.push_back(parse_rational(tok));
        if (static_cast<long>(vals.size()) != d + 1)
            fail(ErrorCode::parse, "line " + std::to_string(i + 2) + ": expected " + std::to_string(d + 1) +
                                       " rationals");
        Rat b = vals.back();
        vals.pop_back();
        if (kind == "central" && b != 0)
            fail(ErrorCode::parse, "line " + std::to_string(i + 2) + ": nonzero offset in central arrangement");
        if (std::all_of(vals.begin(), vals.end(), [](const Rat& a) { return a == 0; }))
            fail(ErrorCode::parse, "line " + std::to_string(i + 2) + ": zero normal");
        arr.add({vals, b});
    }
    return arr;
}

std::string format_arrangement(const Arrangement& arr) {
    std::ostringstream out;
    out << arr.dim() << ' ' << arr.size() << ' ' << (arr.central() ? "central" : "affine") << '\n';
    for (const auto& h : arr.hyperplanes()) {
        for (const auto& a : h.normal) out << rat_str(a) << ' ';
        out << rat_str(h.offset) << '\n';
    }
    return out.str();
}

namespace {

enum class Meet { contained, empty, proper };

// Reduces the row (a | b) of h against the echelon form of f.
Meet reduce(const Flat& f, const Hyperplane& h, RatVec& v) {
    const std::size_t d = h.normal.size();
    v.assign(h.normal.begin(), h.normal.end());
    v.push_back(h.offset);
    Rat t;
    for (std::size_t r = 0; r < f.rref.size(); ++r) {
        const Rat& s = v[f.pivots[r]];
        if (s == 0) continue;
        Rat c = s;
        const RatVec& row = f.rref[r];
        for (std::size_t j = 0; j <= d; ++j) {
            if (row[j] == 0) continue;
            t = c * row[j];
            v[j] -= t;
        }
    }
    for (std::size_t j = 0; j < d; ++j)
        if (v[j] != 0) return Meet::proper;
    return v[d] == 0 ? Meet::contained : Meet::empty;
}

bool contains(const Flat& f, const Hyperplane& h, RatVec& scratch) {
    return reduce(f, h, scratch) == Meet::contained;
}

Flat extend(const Flat& f, RatVec v) {
    const std::size_t d = v.size() - 1;
    std::size_t p = 0;
    while (p < d && v[p] == 0) ++p;
    Rat s = v[p];
    for (auto& x : v) x /= s;
    Flat g;
    g.codim = f.codim + 1;
    g.rref = f.rref;
    g.pivots = f.pivots;
    for (auto& row : g.rref) {
        if (row[p] == 0) continue;
        Rat c = row[p];
        for (std::size_t j = 0; j <= d; ++j) row[j] -= c * v[j];
    }
    auto pos = std::lower_bound(g.pivots.begin(), g.pivots.end(), static_cast<int>(p)) - g.pivots.begin();
    g.pivots.insert(g.pivots.begin() + pos, static_cast<int>(p));
    g.rref.insert(g.rref.begin() + pos, std::move(v));
    return g;
}

struct BitsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& b) const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : b) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

int IntersectionPoset::rank() const {
    int r = 0;
    for (int c = 0; c <= dim; ++c)
        if (count(c) > 0) r = c;
    return r;
}

IntersectionPoset build_poset(const Arrangement& arr) {
    const int d = arr.dim();
    const std::size_t n = arr.size();
    const std::size_t words = (n + 63) / 64 + 1;
    const auto& hs = arr.hyperplanes();

    IntersectionPoset p;
    p.dim = d;
    p.flats.push_back(Flat{});
    p.below.emplace_back();
    p.level_start.assign(static_cast<std::size_t>(d) + 2, 1);
    p.level_start[0] = 0;

    // Flats are keyed by their closed support, which determines the subspace.
    std::unordered_map<std::vector<std::uint64_t>, int, BitsHash> index;
    RatVec v, scratch;
    std::vector<std::uint64_t> covered(words), key(words);
    std::vector<char> in_support(n);

    for (int c = 0; c < d; ++c) {
        const std::size_t begin = p.level_start[c];
        const std::size_t end = p.flats.size();
        p.level_start[c + 1] = end;
        if (begin == end) continue;
        index.clear();
        for (std::size_t f = begin; f < end; ++f) {
            std::fill(covered.begin(), covered.end(), 0);
            std::fill(in_support.begin(), in_support.end(), 0);
            for (int i : p.flats[f].support) {
                covered[i / 64] |= 1ull << (i % 64);
                in_support[i] = 1;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (covered[j / 64] >> (j % 64) & 1) continue;
                Meet m = reduce(p.flats[f], hs[j], v);
                if (m != Meet::proper) continue;
                Flat g = extend(p.flats[f], v);
                g.support = p.flats[f].support;
                for (std::size_t i = 0; i < n; ++i) {
                    if (in_support[i]) continue;
                    if (i == j || contains(g, hs[i], scratch)) g.support.push_back(static_cast<int>(i));
                }
                std::sort(g.support.begin(), g.support.end());
                std::fill(key.begin(), key.end(), 0);
                for (int i : g.support) key[i / 64] |= 1ull << (i % 64);
                for (std::size_t w = 0; w < words; ++w) covered[w] |= key[w];
                auto [it, fresh] = index.try_emplace(key, static_cast<int>(p.flats.size()));
                if (fresh) {
                    p.flats.push_back(std::move(g));
                    p.below.emplace_back();
                }
                p.below[it->second].push_back(static_cast<int>(f));
            }
        }
    }
    p.level_start[d + 1] = p.flats.size();

    // mu(F) = -sum of mu over everything strictly below F.
    const std::size_t total = p.flats.size();
    p.mobius.assign(total, Int(0));
    p.mobius[0] = 1;
    std::vector<std::size_t> stamp(total, 0);
    std::vector<int> stack;
    for (std::size_t f = 1; f < total; ++f) {
        Int s = 0;
        stack.assign(p.below[f].begin(), p.below[f].end());
        for (int g : stack) stamp[g] = f;
        while (!stack.empty()) {
            int g = stack.back();
            stack.pop_back();
            s += p.mobius[g];
            for (int h : p.below[g]) {
                if (stamp[h] == f) continue;
                stamp[h] = f;
                stack.push_back(h);
            }
        }
        p.mobius[f] = -s;
    }
    return p;
}

bool mobius_consistent(const IntersectionPoset& p) {
    if (p.flats.empty() || p.mobius[0] != 1) return false;
    const std::size_t total = p.flats.size();
    for (std::size_t f = 1; f < total; ++f) {
        // Below-relation recomputed from supports: G <= F iff supp(G) is a subset of supp(F).
        Int s = p.mobius[f];
        for (std::size_t g = 0; g < total; ++g) {
            if (g == f || p.flats[g].codim >= p.flats[f].codim) continue;
            if (std::includes(p.flats[f].support.begin(), p.flats[f].support.end(), p.flats[g].support.begin(),
                              p.flats[g].support.end()))
                s += p.mobius[g];
        }
        if (s != 0) return false;
    }
    return true;
}

Int CharPoly::eval(const Int& t) const {
    Int r = 0;
    for (const auto& c : coeffs) r = r * t + c;
    return r;
}

Int CharPoly::derivative_at(const Int& t) const {
    Int r = 0;
    const int d = degree();
    for (int i = 0; i < d; ++i) r = r * t + coeffs[i] * (d - i);
    return r;
}

std::vector<Int> CharPoly::betti() const {
    std::vector<Int> b(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) b[i] = (i % 2 == 0) ? coeffs[i] : Int(-coeffs[i]);
    return b;
}

std::string CharPoly::str() const {
    std::ostringstream out;
    const int d = degree();
    bool first = true;
    for (int i = 0; i <= d; ++i) {
        const Int& c = coeffs[i];
        if (c == 0) continue;
        int e = d - i;
        Int a = abs(c);
        if (first) {
            if (c < 0) out << '-';
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (a != 1 || e == 0) out << a.get_str();
        if (e >= 1) out << 't';
        if (e >= 2) out << '^' << e;
        first = false;
    }
    if (first) out << '0';
    return out.str();
}

CharPoly char_poly(const IntersectionPoset& p) {
    CharPoly cp;
    cp.coeffs.assign(static_cast<std::size_t>(p.dim) + 1, Int(0));
    for (std::size_t f = 0; f < p.flats.size(); ++f) cp.coeffs[p.flats[f].codim] += p.mobius[f];
    return cp;
}

RegionCount regions(const CharPoly& cp) {
    RegionCount r;
    r.total = abs(cp.eval(-1));
    r.bounded = cp.coeffs.back() == 0 ? Int(0) : Int(abs(cp.eval(1)));
    return r;
}

Decone decone(const CharPoly& central) {
    const int d = central.degree();
    if (d < 1) fail(ErrorCode::invalid_argument, "decone needs a polynomial of degree >= 1");
    Decone out;
    Int carry = 0;
    for (int i = 0; i < d; ++i) {
        carry += central.coeffs[i];
        out.affine.coeffs.push_back(carry);
    }
    if (carry + central.coeffs[d] != 0)
        fail(ErrorCode::invalid_argument, "characteristic polynomial not divisible by t-1: input is not central");
    out.restriction.coeffs.assign(central.coeffs.begin(), central.coeffs.end() - 1);
    return out;
}

bool decone_identity(const CharPoly& affine, const CharPoly& restriction) {
    // Compare coefficient lists in ascending order.
    auto asc = [](const CharPoly& c) { return std::vector<Int>(c.coeffs.rbegin(), c.coeffs.rend()); };
    std::vector<Int> r = asc(restriction), b = asc(affine);
    std::vector<Int> lhs(r.size() + 1, Int(0)), rhs(b.size() + 1, Int(0));
    for (std::size_t i = 0; i < r.size(); ++i) lhs[i + 1] += r[i];
    lhs[0] -= restriction.eval(1);
    for (std::size_t i = 0; i < b.size(); ++i) {
        rhs[i + 1] += b[i];
        rhs[i] -= b[i];
    }
    std::size_t n = std::max(lhs.size(), rhs.size());
    lhs.resize(n, Int(0));
    rhs.resize(n, Int(0));
    return lhs == rhs;
}

DeleteRestrict delete_restrict(const Arrangement& arr, std::size_t i) {
    if (i >= arr.size()) fail(ErrorCode::invalid_argument, "hyperplane index out of range");
    const int d = arr.dim();
    DeleteRestrict out{Arrangement(d), Arrangement(d - 1)};
    for (std::size_t j = 0; j < arr.size(); ++j)
        if (j != i) out.deleted.add(arr[j]);
    // On H_i solve for the pivot coordinate (first nonzero normal entry, equal to 1).
    const Hyperplane& h = arr[i];
    std::size_t piv = 0;
    while (h.normal[piv] == 0) ++piv;
    for (std::size_t j = 0; j < arr.size(); ++j) {
        if (j == i) continue;
        const Hyperplane& g = arr[j];
        const Rat& s = g.normal[piv];
        RatVec a;
        for (int c = 0; c < d; ++c)
            if (static_cast<std::size_t>(c) != piv) a.push_back(g.normal[c] - s * h.normal[c]);
        Rat b = g.offset - s * h.offset;
        if (std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; })) continue;  // parallel trace
        out.restricted.add({a, b});
    }
    return out;
}

std::vector<int> sign_vector(const Arrangement& arr, const RatVec& x) {
    std::vector<int> s;
    s.reserve(arr.size());
    for (const auto& h : arr.hyperplanes()) {
        Rat v = -h.offset;
        for (std::size_t j = 0; j < x.size(); ++j) v += h.normal[j] * x[j];
        s.push_back(sgn(v));
    }
    return s;
}

bool lp_maximize(const RatVec& c, const RatMat& G, const RatVec& h, Rat& value, RatVec* z) {
    const std::size_t m = G.size(), nv = c.size();
    const std::size_t cols = nv + m;
    // Tableau rows: constraints with slack, last row the objective (reduced costs).
    RatMat T(m + 1, RatVec(cols + 1, Rat(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (h[i] < 0) fail(ErrorCode::internal, "lp_maximize needs h >= 0");
        for (std::size_t j = 0; j < nv; ++j) T[i][j] = G[i][j];
        T[i][nv + i] = 1;
        T[i][cols] = h[i];
        basis[i] = nv + i;
    }
    for (std::size_t j = 0; j < nv; ++j) T[m][j] = -c[j];
    for (;;) {
        // Bland: smallest index with negative reduced cost enters.
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (T[m][j] < 0) { enter = j; break; }
        if (enter == cols) break;
        std::size_t leave = m;
        Rat best;
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] <= 0) continue;
            Rat ratio = T[i][cols] / T[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == m) return false;
        Rat piv = T[leave][enter];
        for (auto& x : T[leave]) x /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || T[i][enter] == 0) continue;
            Rat f = T[i][enter];
            for (std::size_t j = 0; j <= cols; ++j)
                if (T[leave][j] != 0) T[i][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }
    value = T[m][cols];
    if (z) {
        z->assign(nv, Rat(0));
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < nv) (*z)[basis[i]] = T[i][cols];
    }
    return true;
}

namespace {

// Is {x : s_j (a_j.x - b_j) > 0 for all j} nonempty?
bool open_cell_nonempty(const Arrangement& arr, const std::vector<int>& s) {
    const std::size_t n = arr.size();
    const int d = arr.dim();
    if (n == 0) return true;
    // Anchor at x0 = 0: slack_j = s_j(-b_j); s0 below every slack.
    RatVec base(n);
    Rat s0 = 0;
    for (std::size_t j = 0; j < n; ++j) {
        base[j] = -arr[j].offset * s[j];
        if (j == 0 || base[j] < s0) s0 = base[j];
    }
    s0 -= 1;
    // Variables: y+ (d), y- (d), r. Maximize r.
    const std::size_t nv = 2 * static_cast<std::size_t>(d) + 1;
    RatMat G;
    RatVec h;
    for (std::size_t j = 0; j < n; ++j) {
        RatVec row(nv, Rat(0));
        for (int k = 0; k < d; ++k) {
            row[k] = -arr[j].normal[k] * s[j];
            row[d + k] = arr[j].normal[k] * s[j];
        }
        row[nv - 1] = 1;
        G.push_back(row);
        h.push_back(base[j] - s0);
    }
    RatVec cap(nv, Rat(0));
    cap[nv - 1] = 1;
    G.push_back(cap);
    h.push_back(Rat(1) - s0);
    RatVec c(nv, Rat(0));
    c[nv - 1] = 1;
    Rat best;
    lp_maximize(c, G, h, best);
    return s0 + best > 0;
}

bool recession_trivial(const Arrangement& arr, const std::vector<int>& s) {
    const int d = arr.dim();
    const std::size_t nv = 2 * static_cast<std::size_t>(d);
    RatMat G;
    RatVec h;
    for (std::size_t j = 0; j < arr.size(); ++j) {
        RatVec row(nv, Rat(0));
        for (int k = 0; k < d; ++k) {
            row[k] = -arr[j].normal[k] * s[j];
            row[d + k] = arr[j].normal[k] * s[j];
        }
        G.push_back(row);
        h.push_back(0);
    }
    for (int k = 0; k < d; ++k) {
        RatVec up(nv, Rat(0)), down(nv, Rat(0));
        up[k] = 1;
        up[d + k] = -1;
        down[k] = -1;
        down[d + k] = 1;
        G.push_back(up);
        h.push_back(1);
        G.push_back(down);
        h.push_back(1);
    }
    for (int k = 0; k < d; ++k) {
        for (int sign : {1, -1}) {
            RatVec c(nv, Rat(0));
            c[k] = sign;
            c[d + k] = -sign;
            Rat best;
            if (!lp_maximize(c, G, h, best) || best > 0) return false;
        }
    }
    return true;
}

}  // namespace

RegionCount brute_force_regions(const Arrangement& arr, const OracleLimits& lim) {
    if (arr.dim() > lim.max_dim || arr.size() > lim.max_hyperplanes)
        fail(ErrorCode::budget, "brute-force region oracle limited to d <= " + std::to_string(lim.max_dim) +
                                    " and n <= " + std::to_string(lim.max_hyperplanes) + " (got d = " +
                                    std::to_string(arr.dim()) + ", n = " + std::to_string(arr.size()) + ")");
    const std::size_t n = arr.size();
    const int d = arr.dim();
    // Starting witness: a point of the moment curve off every hyperplane.
    RatVec x(d);
    for (long base = 7;; base += 3) {
        for (int k = 0; k < d; ++k) {
            Rat v = 1;
            for (int e = 0; e <= k; ++e) v *= Rat(base, 13);
            x[k] = v;
        }
        auto s = sign_vector(arr, x);
        if (std::find(s.begin(), s.end(), 0) == s.end()) break;
    }
    std::map<std::vector<int>, bool> seen;  // sign vector -> nonempty
    std::deque<std::vector<int>> queue;
    auto s0 = sign_vector(arr, x);
    seen[s0] = true;
    queue.push_back(s0);
    RegionCount rc{0, 0};
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        rc.total += 1;
        if (d > 0 && recession_trivial(arr, s)) rc.bounded += 1;
        if (d == 0) rc.bounded += 1;
        for (std::size_t j = 0; j < n; ++j) {
            auto t = s;
            t[j] = -t[j];
            if (seen.count(t)) continue;
            bool ok = open_cell_nonempty(arr, t);
            seen[t] = ok;
            if (ok) queue.push_back(t);
        }
    }
    return rc;
}

}  // namespace mld
