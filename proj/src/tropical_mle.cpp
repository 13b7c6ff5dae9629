#include "mld/tropical_mle.hpp"

#include "mld/discriminantal.hpp"
#include "mld/linalg.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace mld {

std::vector<int> mask_elements(Mask m) {
    std::vector<int> out;
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

Mask mask_of(const std::vector<int>& elems) {
    Mask m = 0;
    for (int e : elems) {
        if (e < 0 || e >= 64) fail(ErrorCode::invalid_argument, "element index out of range");
        m |= Mask(1) << e;
    }
    return m;
}

namespace {

std::string mask_str(Mask m) {
    std::string s = "{";
    bool first = true;
    for (int e : mask_elements(m)) {
        if (!first) s += ",";
        s += std::to_string(e);
        first = false;
    }
    return s + "}";
}

int column_rank(const RatMat& a, Mask cols) {
    RatMat t;
    for (int c : mask_elements(cols)) {
        RatVec v(a.size());
        for (std::size_t r = 0; r < a.size(); ++r) v[r] = a[r][c];
        t.push_back(std::move(v));
    }
    return matrix_rank(std::move(t));
}

}  // namespace

Matroid Matroid::from_matrix(const RatMat& a) {
    if (a.empty() || a[0].empty()) fail(ErrorCode::invalid_argument, "empty matrix");
    const int n = static_cast<int>(a[0].size());
    if (n > 62) fail(ErrorCode::unsupported, "ground sets above 62 elements are not supported");
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != n) fail(ErrorCode::invalid_argument, "ragged matrix");
    Matroid m;
    m.n_ = n;
    for (int c = 0; c < n; ++c)
        if (column_rank(a, Mask(1) << c) == 0)
            fail(ErrorCode::invalid_argument, "column " + std::to_string(c) + " is zero (loops are not supported)");
    m.rank_ = column_rank(a, m.all());
    for (int s = 2; s <= std::min(n, m.rank_ + 1); ++s) {
        Mask sub = (Mask(1) << s) - 1;
        while (sub < (Mask(1) << n)) {
            bool has = false;
            for (Mask c : m.circuits_)
                if ((c & ~sub) == 0) {
                    has = true;
                    break;
                }
            if (!has && column_rank(a, sub) < s) m.circuits_.push_back(sub);
            Mask t = sub | (sub - 1);
            sub = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(sub) + 1));
        }
    }
    return m;
}

Matroid Matroid::from_circuits(int ground, std::vector<Mask> circuits) {
    if (ground <= 0 || ground > 62) fail(ErrorCode::invalid_argument, "ground set size must lie in 1..62");
    Matroid m;
    m.n_ = ground;
    std::sort(circuits.begin(), circuits.end());
    circuits.erase(std::unique(circuits.begin(), circuits.end()), circuits.end());
    for (Mask c : circuits) {
        if (c == 0 || (c & ~m.all())) fail(ErrorCode::invalid_argument, "circuit outside the ground set");
        if (std::popcount(c) == 1) fail(ErrorCode::invalid_argument, "loops are not supported");
    }
    for (Mask a : circuits)
        for (Mask b : circuits)
            if (a != b && (a & ~b) == 0) fail(ErrorCode::invalid_argument, "circuit " + mask_str(a) + " lies inside " + mask_str(b));
    if (ground <= 12) {
        for (Mask a : circuits)
            for (Mask b : circuits) {
                if (a >= b) continue;
                for (int e : mask_elements(a & b)) {
                    Mask u = (a | b) & ~(Mask(1) << e);
                    bool ok = std::any_of(circuits.begin(), circuits.end(), [&](Mask c) { return (c & ~u) == 0; });
                    if (!ok) fail(ErrorCode::invalid_argument, "circuit exchange fails for " + mask_str(a) + " and " + mask_str(b));
                }
            }
    }
    m.circuits_ = std::move(circuits);
    m.rank_ = m.rank_of(m.all());
    return m;
}

Matroid Matroid::graphic(int vertices, const std::vector<std::pair<int, int>>& edges) {
    RatMat inc(vertices, RatVec(edges.size(), Rat(0)));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [u, v] = edges[e];
        if (u < 0 || v < 0 || u >= vertices || v >= vertices || u == v)
            fail(ErrorCode::invalid_argument, "bad graph edge");
        inc[u][e] = 1;
        inc[v][e] = -1;
    }
    return from_matrix(inc);
}

Mask Matroid::closure(Mask s) const {
    bool changed = true;
    while (changed) {
        changed = false;
        for (Mask c : circuits_) {
            Mask out = c & ~s;
            if (out && (out & (out - 1)) == 0) {
                s |= out;
                changed = true;
            }
        }
    }
    return s;
}

int Matroid::rank_of(Mask s) const {
    Mask indep = 0;
    int r = 0;
    for (int e : mask_elements(s)) {
        Mask t = indep | (Mask(1) << e);
        bool dep = false;
        for (Mask c : circuits_)
            if (((c >> e) & 1) && (c & ~t) == 0) {
                dep = true;
                break;
            }
        if (!dep) {
            indep = t;
            ++r;
        }
    }
    return r;
}

std::vector<std::vector<Mask>> Matroid::flats_by_rank() const {
    std::vector<std::vector<Mask>> out(rank_ + 1);
    out[0].push_back(closure(0));
    for (int r = 0; r < rank_; ++r) {
        std::set<Mask> next;
        for (Mask f : out[r])
            for (int e = 0; e < n_; ++e)
                if (!((f >> e) & 1)) next.insert(closure(f | (Mask(1) << e)));
        out[r + 1].assign(next.begin(), next.end());
    }
    return out;
}

std::vector<std::vector<Mask>> Matroid::flags(int len) const {
    if (len < 0 || len > rank_) fail(ErrorCode::invalid_argument, "flag length exceeds the rank");
    auto fl = flats_by_rank();
    std::vector<std::vector<Mask>> out;
    std::vector<Mask> cur;
    std::function<void(int, Mask)> go = [&](int r, Mask below) {
        if (r > len) {
            out.push_back(cur);
            return;
        }
        for (Mask f : fl[r])
            if ((below & ~f) == 0) {
                cur.push_back(f);
                go(r + 1, f);
                cur.pop_back();
            }
    };
    go(1, 0);
    return out;
}

bool Matroid::connected(Mask s) const {
    if (s == 0) return false;
    auto elems = mask_elements(s);
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (Mask c : circuits_) {
        if (c & ~s) continue;
        auto ce = mask_elements(c);
        for (std::size_t i = 1; i < ce.size(); ++i) parent[find(ce[i])] = find(ce[0]);
    }
    int root = find(elems[0]);
    return std::all_of(elems.begin(), elems.end(), [&](int e) { return find(e) == root; });
}

bool bergman_member(const Matroid& m, const TropVec& v) {
    if (static_cast<int>(v.size()) != m.ground())
        fail(ErrorCode::invalid_argument, "vector length " + std::to_string(v.size()) + " does not match ground set size " +
                                              std::to_string(m.ground()));
    for (Mask c : m.circuits()) {
        auto el = mask_elements(c);
        const Rat* mn = &v[el[0]];
        int cnt = 0;
        for (int e : el) {
            if (v[e] < *mn) {
                mn = &v[e];
                cnt = 1;
            } else if (v[e] == *mn) {
                ++cnt;
            }
        }
        if (cnt < 2) return false;
    }
    return true;
}

BergmanComplex bergman_complex(const Matroid& m) {
    BergmanComplex bc;
    auto fl = m.flats_by_rank();
    for (int r = 1; r < m.rank(); ++r)
        for (Mask f : fl[r])
            if (m.connected(f)) bc.rays.push_back(f);
    for (std::size_t i = 0; i < bc.rays.size(); ++i)
        for (std::size_t j = i + 1; j < bc.rays.size(); ++j) {
            Mask a = bc.rays[i], b = bc.rays[j];
            bool comparable = (a & ~b) == 0 || (b & ~a) == 0;
            if (comparable || !m.connected(m.closure(a | b)))
                bc.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    return bc;
}

LinearModel::LinearModel(RatMat forms, RatVec h) : forms_(std::move(forms)), h_(std::move(h)) {
    if (forms_.empty() || forms_[0].empty()) fail(ErrorCode::invalid_argument, "empty linear model");
    d_ = static_cast<int>(forms_.size()) - 1;
    n_ = static_cast<int>(forms_[0].size()) - 1;
    if (static_cast<int>(h_.size()) != d_ + 1) fail(ErrorCode::invalid_argument, "infinity form has the wrong length");
    RatMat full = forms_;
    for (int r = 0; r <= d_; ++r) {
        if (static_cast<int>(full[r].size()) != n_ + 1) fail(ErrorCode::invalid_argument, "ragged form matrix");
        full[r].push_back(h_[r]);
    }
    if (matrix_rank(forms_) != d_ + 1) fail(ErrorCode::invalid_argument, "the forms p_i do not have full rank");
    mx_ = Matroid::from_matrix(full);
    // Restrict the forms to the hyperplane h = 0.
    RatMat z = nullspace(RatMat{h_}, d_ + 1);
    RatMat a(d_, RatVec(n_ + 1, Rat(0)));
    for (int j = 0; j < d_; ++j)
        for (int i = 0; i <= n_; ++i)
            for (int r = 0; r <= d_; ++r) a[j][i] += z[j][r] * forms_[r][i];
    perp_ = nullspace(a, n_ + 1);
    if (perp_.empty()) fail(ErrorCode::degenerate, "orthogonal complement is trivial");
    for (int i = 0; i <= n_; ++i) {
        bool zero = std::all_of(perp_.begin(), perp_.end(), [&](const RatVec& row) { return row[i] == 0; });
        if (zero)
            fail(ErrorCode::degenerate, "coordinate " + std::to_string(i) +
                                            " is a coloop after contracting infinity; its tropical complement is empty");
    }
    mperp_ = Matroid::from_matrix(perp_);
}

LinearModel LinearModel::from_span(const RatMat& span) {
    if (span.empty()) fail(ErrorCode::invalid_argument, "empty span");
    RatVec h;
    for (const auto& row : span) {
        Rat s = 0;
        for (const auto& x : row) s += x;
        h.push_back(s);
    }
    return LinearModel(span, h);
}

LinearModel LinearModel::from_arrangement(const Arrangement& arr) {
    const int d = arr.dim();
    if (arr.size() == 0) fail(ErrorCode::invalid_argument, "empty arrangement");
    RatMat forms(d + 1, RatVec(arr.size(), Rat(0)));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        for (int r = 0; r < d; ++r) forms[r][i] = arr[i].normal[r];
        forms[d][i] = -arr[i].offset;
    }
    RatVec h(d + 1, Rat(0));
    h[d] = 1;
    return LinearModel(forms, h);
}

Arrangement LinearModel::arrangement() const {
    // x = x0 + Z^T y parametrizes the chart h = 1.
    RatMat z = nullspace(RatMat{h_}, d_ + 1);
    RatVec x0(d_ + 1, Rat(0));
    for (int r = 0; r <= d_; ++r)
        if (h_[r] != 0) {
            x0[r] = 1 / h_[r];
            break;
        }
    Arrangement arr(d_);
    for (int i = 0; i <= n_; ++i) {
        RatVec normal(d_, Rat(0));
        Rat c = 0;
        for (int r = 0; r <= d_; ++r) c += forms_[r][i] * x0[r];
        bool zero = true;
        for (int j = 0; j < d_; ++j) {
            for (int r = 0; r <= d_; ++r) normal[j] += z[j][r] * forms_[r][i];
            if (normal[j] != 0) zero = false;
        }
        if (zero) {
            log().info("coordinate {} is constant on the chart and contributes no hyperplane", i);
            continue;
        }
        arr.add(make_hyperplane(normal, -c));
    }
    return arr;
}

bool LinearModel::in_trop_X(const TropVec& q) const {
    if (static_cast<int>(q.size()) != n_ + 1) fail(ErrorCode::invalid_argument, "vector length does not match the model");
    TropVec v = q;
    v.push_back(Rat(0));
    return bergman_member(mx_, v);
}

bool LinearModel::in_trop_perp(const TropVec& r) const {
    if (static_cast<int>(r.size()) != n_ + 1) fail(ErrorCode::invalid_argument, "vector length does not match the model");
    return bergman_member(mperp_, r);
}

namespace {

bool mul_ok(__int128 a, __int128 b, __int128& r) { return !__builtin_mul_overflow(a, b, &r); }
bool sub_ok(__int128 a, __int128 b, __int128& r) { return !__builtin_sub_overflow(a, b, &r); }

// Fraction-free elimination of [a | rhs]. Returns false on overflow. det == 0 means singular.
template <typename T>
bool bareiss_solve(std::vector<std::vector<T>>& a, T& det, std::vector<T>& num);

template <>
bool bareiss_solve<__int128>(std::vector<std::vector<__int128>>& a, __int128& det, std::vector<__int128>& num) {
    const int n = static_cast<int>(a.size());
    __int128 prev = 1;
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) {
            det = 0;
            return true;
        }
        if (p != k) std::swap(a[p], a[k]);
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j <= n; ++j) {
                __int128 x, y, z;
                if (!mul_ok(a[i][j], a[k][k], x) || !mul_ok(a[i][k], a[k][j], y) || !sub_ok(x, y, z)) return false;
                a[i][j] = z / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    det = a[n - 1][n - 1];
    num.assign(n, 0);
    for (int k = n - 1; k >= 0; --k) {
        __int128 s;
        if (!mul_ok(a[k][n], det, s)) return false;
        for (int j = k + 1; j < n; ++j) {
            __int128 t;
            if (!mul_ok(a[k][j], num[j], t) || !sub_ok(s, t, s)) return false;
        }
        num[k] = s / a[k][k];
    }
    return true;
}

template <>
bool bareiss_solve<Int>(std::vector<std::vector<Int>>& a, Int& det, std::vector<Int>& num) {
    const int n = static_cast<int>(a.size());
    Int prev = 1;
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) {
            det = 0;
            return true;
        }
        if (p != k) std::swap(a[p], a[k]);
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j <= n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    det = a[n - 1][n - 1];
    num.assign(n, Int(0));
    for (int k = n - 1; k >= 0; --k) {
        Int s = a[k][n] * det;
        for (int j = k + 1; j < n; ++j) s -= a[k][j] * num[j];
        num[k] = s / a[k][k];
    }
    return true;
}

Int to_int(__int128 x) {
    bool neg = x < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(x) : static_cast<unsigned __int128>(x);
    Int r = static_cast<unsigned long>(u >> 64);
    r <<= 64;
    r += static_cast<unsigned long>(u & 0xffffffffffffffffULL);
    return neg ? Int(-r) : r;
}

struct PairResult {
    enum Kind { none, point, boundary } kind = none;
    Int det;
    std::vector<Int> num;
};

// Solves sum lambda_i e_{G_i} + sum mu_j e_{H_j} + nu 1 = W for one cone pair.
PairResult solve_pair(const std::vector<Mask>& cols, const std::vector<Int>& W, const std::vector<__int128>* W128,
                      int positive) {
    const int n = static_cast<int>(W.size());
    PairResult res;
    Int det;
    std::vector<Int> num;
    bool done = false;
    if (W128) {
        std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n + 1, 0));
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) a[r][c] = (cols[c] >> r) & 1;
        for (int r = 0; r < n; ++r) a[r][n] = (*W128)[r];
        __int128 d128;
        std::vector<__int128> n128;
        if (bareiss_solve(a, d128, n128)) {
            if (d128 == 0) return res;
            int sd = d128 > 0 ? 1 : -1;
            for (int k = 0; k < positive; ++k)
                if (n128[k] * sd < 0) return res;
            det = to_int(d128);
            for (auto x : n128) num.push_back(to_int(x));
            done = true;
        }
    }
    if (!done) {
        std::vector<std::vector<Int>> a(n, std::vector<Int>(n + 1, Int(0)));
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) a[r][c] = static_cast<int>((cols[c] >> r) & 1);
        for (int r = 0; r < n; ++r) a[r][n] = W[r];
        bareiss_solve(a, det, num);
        if (det == 0) return res;
    }
    int sd = sgn(det);
    bool zero = false;
    for (int k = 0; k < positive; ++k) {
        int s = sgn(num[k]) * sd;
        if (s < 0) return res;
        if (s == 0) zero = true;
    }
    res.kind = zero ? PairResult::boundary : PairResult::point;
    res.det = det;
    res.num = std::move(num);
    return res;
}

// A circuit attaining its minimum at least three times, if any.
bool tied_circuit(const Matroid& m, const TropVec& v, Mask& out, int& times) {
    for (Mask c : m.circuits()) {
        auto el = mask_elements(c);
        Rat mn = v[el[0]];
        for (int e : el) mn = std::min(mn, v[e]);
        int cnt = 0;
        for (int e : el) cnt += v[e] == mn;
        if (cnt >= 3) {
            out = c;
            times = cnt;
            return true;
        }
    }
    return false;
}

}  // namespace

bool bergman_smooth_point(const Matroid& m, const TropVec& v) {
    if (!bergman_member(m, v)) fail(ErrorCode::invalid_argument, "vector is not in the Bergman fan");
    std::set<Rat, std::greater<Rat>> values(v.begin(), v.end());
    Mask prev = 0;
    for (const auto& c : values) {
        Mask level = 0;
        for (int i = 0; i < m.ground(); ++i)
            if (v[i] >= c) level |= Mask(1) << i;
        // Circuits of the minor M|level / prev.
        std::vector<Mask> minor;
        for (Mask circ : m.circuits())
            if ((circ & ~level) == 0 && (circ & ~prev)) minor.push_back(circ & ~prev);
        std::sort(minor.begin(), minor.end(), [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
        std::vector<Mask> minimal;
        for (Mask a : minor)
            if (std::none_of(minimal.begin(), minimal.end(), [&](Mask b) { return (b & ~a) == 0; })) minimal.push_back(a);
        const int base = m.rank_of(prev);
        Mask left = level & ~prev;
        while (left) {
            Mask comp = left & -left, grown = 0;
            while (comp != grown) {
                grown = comp;
                for (Mask circ : minimal)
                    if (circ & comp) comp |= circ;
            }
            if (m.rank_of(comp | prev) - base != 1) return false;
            left &= ~comp;
        }
        prev = level;
    }
    return true;
}

std::vector<TropVec> trop_critical_points(const LinearModel& model, const TropVec& w, const TropOptions& opt) {
    const int n1 = model.n() + 1, d = model.d();
    if (static_cast<int>(w.size()) != n1)
        fail(ErrorCode::invalid_argument, "w has length " + std::to_string(w.size()) + ", expected " + std::to_string(n1));
    const auto fx = model.matroid().flags(d);
    const auto fp = model.perp_matroid().flags(n1 - 1 - d);
    const Mask low = (Mask(1) << n1) - 1;
    const Mask inf_bit = Mask(1) << n1;

    Int D = 1;
    for (const auto& x : w) D = lcm(D, Int(x.get_den()));
    std::vector<Int> W;
    bool small = true;
    for (const auto& x : w) {
        W.push_back(Int(x.get_num() * (D / x.get_den())));
        if (!W.back().fits_slong_p() || abs(W.back()) > Int(1L << 40)) small = false;
    }
    std::vector<__int128> W128;
    if (small)
        for (const auto& x : W) W128.push_back(x.get_si());

    unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(fx.size())));
    std::vector<std::set<TropVec>> found(threads);

    auto work = [&](unsigned t) {
        std::vector<Mask> cols(n1);
        for (std::size_t a = t; a < fx.size(); a += threads) {
            for (int i = 0; i < d; ++i) cols[i] = fx[a][i] & low;
            cols[n1 - 1] = low;
            for (const auto& hp : fp) {
                for (int j = 0; j < n1 - 1 - d; ++j) cols[d + j] = hp[j];
                auto res = solve_pair(cols, W, small ? &W128 : nullptr, n1 - 1);
                if (res.kind == PairResult::none) continue;
                // Zero weights are walls of the flag subdivision, not necessarily of the fan.
                TropVec q(n1, Rat(0));
                Rat shift = 0;
                for (int i = 0; i < d; ++i) {
                    Rat lam(res.num[i], res.det * D);
                    lam.canonicalize();
                    for (int e : mask_elements(cols[i])) q[e] += lam;
                    if (fx[a][i] & inf_bit) shift += lam;
                }
                for (auto& x : q) x -= shift;
                found[t].insert(std::move(q));
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

    std::set<TropVec> all;
    for (auto& f : found) all.insert(f.begin(), f.end());
    std::vector<TropVec> out;
    for (const auto& q : all) {
        TropVec ext = q, r(n1);
        ext.push_back(Rat(0));
        for (int i = 0; i < n1; ++i) r[i] = w[i] - q[i];
        if (!model.in_trop_X(q) || !model.in_trop_perp(r))
            fail(ErrorCode::internal, "cone solution " + trop_str(q) + " fails the circuit test");
        // A transverse intersection needs q and w - q in the interiors of maximal cones.
        bool sx = bergman_smooth_point(model.matroid(), ext);
        bool sp = bergman_smooth_point(model.perp_matroid(), r);
        if (!sx || !sp) {
            Mask c = 0;
            int times = 0;
            std::string why;
            if (!sx && tied_circuit(model.matroid(), ext, c, times))
                why = "circuit " + mask_str(c) + " of the model matroid attains its minimum " + std::to_string(times) +
                      " times at " + trop_str(q);
            else if (!sp && tied_circuit(model.perp_matroid(), r, c, times))
                why = "circuit " + mask_str(c) + " of the complement matroid attains its minimum " +
                      std::to_string(times) + " times at w - " + trop_str(q);
            else
                why = "intersection point " + trop_str(q) + " lies on a lower-dimensional cone";
            fail(ErrorCode::degenerate, "tropical data vector is not generic: " + why + "; perturb w");
        }
        out.push_back(q);
    }
    return out;
}

std::vector<TropVec> corollary_points(int n, int d, const TropVec& w) {
    if (n < 0 || d < 0 || d > n) fail(ErrorCode::invalid_argument, "need 0 <= d <= n");
    if (static_cast<int>(w.size()) != n + 1) fail(ErrorCode::invalid_argument, "w must have n+1 coordinates");
    for (int i = 1; i <= n; ++i) {
        if (w[i] < w[0]) fail(ErrorCode::invalid_argument, "w_0 must be the smallest coordinate");
        if (w[i] == w[0]) fail(ErrorCode::degenerate, "w_0 ties with w_" + std::to_string(i) + " for the minimum");
    }
    std::vector<TropVec> out;
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 1);
    for (;;) {
        TropVec q(n + 1, Rat(0));
        for (int i : idx) q[i] = w[i] - w[0];
        out.push_back(std::move(q));
        int i = d - 1;
        while (i >= 0 && idx[i] == n - d + 1 + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

int flag_determinant(const Matroid& mx, const Matroid& mperp, const std::vector<Mask>& flag,
                     const std::vector<Mask>& flag_perp) {
    const int n1 = mperp.ground();
    if (mx.ground() != n1 + 1) fail(ErrorCode::invalid_argument, "ground sets do not fit: need n+2 and n+1 elements");
    const int d = mx.rank() - 1;
    if (static_cast<int>(flag.size()) != d || static_cast<int>(flag_perp.size()) != n1 - 1 - d)
        fail(ErrorCode::invalid_argument, "flags must have lengths d and n-d");
    auto check = [](const Matroid& m, const std::vector<Mask>& f, const char* what) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!m.is_flat(f[i])) fail(ErrorCode::invalid_argument, std::string(what) + " contains a non-flat " + mask_str(f[i]));
            if (m.rank_of(f[i]) != static_cast<int>(i) + 1)
                fail(ErrorCode::invalid_argument, std::string(what) + " flat " + mask_str(f[i]) + " has the wrong rank");
            if (i > 0 && (f[i - 1] & ~f[i])) fail(ErrorCode::invalid_argument, std::string(what) + " is not nested");
        }
    };
    check(mx, flag, "flag");
    check(mperp, flag_perp, "complement flag");
    const Mask low = (Mask(1) << n1) - 1;
    if (!flag.empty() && (flag.back() & ~low)) fail(ErrorCode::invalid_argument, "the top flat of the flag contains infinity");
    std::vector<Mask> cols(flag.begin(), flag.end());
    cols.insert(cols.end(), flag_perp.begin(), flag_perp.end());
    cols.push_back(low);
    RatMat m(n1, RatVec(n1, Rat(0)));
    for (int c = 0; c < n1; ++c)
        for (int r = 0; r < n1; ++r) m[r][c] = static_cast<int>((cols[c] >> r) & 1);
    Rat det = determinant(m);
    if (det != 0 && det != 1 && det != -1)
        fail(ErrorCode::inconsistent, "flag matrix determinant " + rat_str(det) + " is not in {-1,0,1}");
    return static_cast<int>(det.get_num().get_si());
}

TropVec perturb(const TropVec& w, Rng& rng, long denom) {
    const long span = denom / static_cast<long>(w.size() + 2);
    if (span < static_cast<long>(w.size()) + 1) fail(ErrorCode::invalid_argument, "perturbation denominator too small");
    std::uniform_int_distribution<long> dist(1, span - 1);
    std::set<long> used;
    TropVec out = w;
    for (auto& x : out) {
        long c;
        do c = dist(rng);
        while (!used.insert(c).second);
        x += Rat(c) / denom;
        x.canonicalize();
    }
    return out;
}

ChyModel chy_model(int m) {
    if (m < 5) fail(ErrorCode::invalid_argument, "the scattering model needs m >= 5");
    // Homogeneous coordinates (x_0, x_4, ..., x_m); vertex potentials 2 -> 0, 3 -> x_0, j -> x_j.
    const int dim = m - 2;
    auto potential = [&](int v) {
        RatVec p(dim, Rat(0));
        if (v == 3) p[0] = 1;
        if (v >= 4) p[v - 3] = 1;
        return p;
    };
    std::vector<std::pair<int, int>> coords;
    for (int i = 2; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j)
            if (!(i == 2 && j == 3)) coords.emplace_back(i, j);
    RatMat forms(dim, RatVec(coords.size(), Rat(0)));
    for (std::size_t c = 0; c < coords.size(); ++c) {
        auto pi = potential(coords[c].first), pj = potential(coords[c].second);
        for (int r = 0; r < dim; ++r) forms[r][c] = pj[r] - pi[r];
    }
    RatVec h(dim, Rat(0));
    h[0] = 1;
    return ChyModel{m, LinearModel(forms, h), coords};
}

std::string trop_str(const TropVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += rat_str(v[i]);
    }
    return s + ")";
}

}  // namespace mld
