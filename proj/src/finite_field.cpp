#include "mld/finite_field.hpp"

#include <cmath>
#include <thread>

namespace mld {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

namespace {

void require_field(std::int64_t q) {
    if (!is_prime(q)) fail(ErrorCode::unsupported, "only prime q is supported (got " + std::to_string(q) + ")");
    if (q <= 3) fail(ErrorCode::unsupported, "characteristic 2 and 3 are not supported");
}

std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<Int> ints(std::initializer_list<long> v) {
    std::vector<Int> r;
    for (long x : v) r.emplace_back(x);
    return r;
}

Int poly_eval(const std::vector<Int>& p, const Int& x) {
    Int r = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

}  // namespace

int quad_roots(QuadRoot which, std::int64_t q) {
    require_field(q);
    int c = 0;
    for (std::int64_t x = 0; x < q; ++x) {
        std::int64_t v = 0;
        switch (which) {
            case QuadRoot::b: v = x * x + x + 1; break;
            case QuadRoot::d: v = x * x + x - 1; break;
            case QuadRoot::e: v = x * x + 1; break;
        }
        if (((v % q) + q) % q == 0) ++c;
    }
    return c;
}

Int CountFormula::eval(const Int& q, const Int& b, const Int& d, const Int& e) const {
    return poly_eval(poly, q) + poly_eval(b_cofactor, q) * b + poly_eval(d_cofactor, q) * d +
           poly_eval(e_cofactor, q) * e;
}

CountFormula count_formula_for(int m) {
    CountFormula f;
    f.m = m;
    f.b_cofactor = f.d_cofactor = f.e_cofactor = ints({0});
    switch (m) {
        case 6:  // (q-2)(q-3)(q^2-9q+21)
            f.poly = poly_mul(poly_mul(ints({-2, 1}), ints({-3, 1})), ints({21, -9, 1}));
            break;
        case 7:  // (q-3)(q-5)(q^4-20q^3+148q^2-468q+498)
            f.poly = poly_mul(poly_mul(ints({-3, 1}), ints({-5, 1})), ints({498, -468, 148, -20, 1}));
            break;
        case 8:  // (q-5)(q^7-43q^6+788q^5-7937q^4+47097q^3-162834q^2+299280q-222960) + 840 b
            f.poly = poly_mul(ints({-5, 1}), ints({-222960, 299280, -162834, 47097, -7937, 788, -43, 1}));
            f.b_cofactor = ints({840});
            break;
        case 9:
            f.poly = ints({389442480, -588513120, 386490120, -146288034, 35563770, -5835825, 657739, -50466, 2530,
                           -75, 1});
            f.b_cofactor = poly_mul(ints({840}), ints({1684, -243, 9}));
            f.d_cofactor = ints({30240 * 9});
            f.e_cofactor = ints({30240 * 2});
            break;
        default:
            fail(ErrorCode::invalid_argument, "point-count formulas exist for m = 6..9 only");
    }
    return f;
}

Int count_formula(int m, std::int64_t q) {
    auto f = count_formula_for(m);
    require_field(q);
    return f.eval(Int(static_cast<long>(q)), quad_roots(QuadRoot::b, q), quad_roots(QuadRoot::d, q),
                  quad_roots(QuadRoot::e, q));
}

Int euler_from_count(int m) { return count_formula_for(m).eval(1, 2, 2, 2); }

namespace {

std::int64_t det_mod(std::vector<std::int64_t> a, int k, std::int64_t q) {
    std::int64_t det = 1;
    for (int c = 0; c < k; ++c) {
        int p = c;
        while (p < k && a[p * k + c] == 0) ++p;
        if (p == k) return 0;
        if (p != c) {
            for (int j = 0; j < k; ++j) std::swap(a[p * k + j], a[c * k + j]);
            det = q - det;
        }
        std::int64_t piv = a[c * k + c];
        det = det * piv % q;
        // inverse by Fermat
        std::int64_t inv = 1, base = piv, e = q - 2;
        while (e > 0) {
            if (e & 1) inv = inv * base % q;
            base = base * base % q;
            e >>= 1;
        }
        for (int r = c + 1; r < k; ++r) {
            std::int64_t f = a[r * k + c] * inv % q;
            if (f == 0) continue;
            for (int j = c; j < k; ++j) a[r * k + j] = ((a[r * k + j] - f * a[c * k + j]) % q + q) % q;
        }
    }
    return det % q;
}

}  // namespace

Int brute_count(int k, int m, std::int64_t q, const BruteOptions& opt) {
    require_field(q);
    if (k < 2 || m <= k) fail(ErrorCode::invalid_argument, "brute_count needs 2 <= k < m");
    const int nx = (k - 1) * (m - k - 1);
    const double tuples = std::pow(static_cast<double>(q), nx);
    if (tuples > opt.max_tuples)
        fail(ErrorCode::budget, "brute force needs " + std::to_string(static_cast<long double>(tuples)) +
                                    " tuples, above the budget of " + std::to_string(opt.max_tuples));
    // Template matrix mod q; free entries filled per tuple.
    std::vector<std::int64_t> tmpl(k * m, 0);
    for (int col = 0; col < k; ++col) {
        int r = k - 1 - col;
        tmpl[r * m + col] = ((k - r) % 2 == 0) ? 1 : q - 1;
    }
    for (int r = 0; r < k; ++r) tmpl[r * m + k] = 1;
    for (int j = k + 1; j < m; ++j) tmpl[j] = 1;
    // Minors that touch a free column; the others are +-1.
    std::vector<std::vector<int>> minors;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (idx.back() > k) minors.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    const std::int64_t total = static_cast<std::int64_t>(std::llround(tuples));
    unsigned threads = std::max(1u, opt.threads);
    std::vector<std::int64_t> partial(threads, 0);
    auto work = [&](unsigned t) {
        std::vector<std::int64_t> mat = tmpl, sub(k * k);
        std::int64_t lo = total * t / threads, hi = total * (t + 1) / threads, good = 0;
        for (std::int64_t code = lo; code < hi; ++code) {
            std::int64_t c = code;
            for (int r = 1; r < k; ++r)
                for (int j = k + 1; j < m; ++j) {
                    mat[r * m + j] = c % q;
                    c /= q;
                }
            bool ok = true;
            for (const auto& s : minors) {
                for (int r = 0; r < k; ++r)
                    for (int cc = 0; cc < k; ++cc) sub[r * k + cc] = mat[r * m + s[cc]];
                if (det_mod(sub, k, q) == 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) ++good;
        }
        partial[t] = good;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    Int sum = 0;
    for (auto p : partial) sum += Int(static_cast<long>(p));
    return sum;
}

std::vector<std::pair<Int, int>> factorize(Int n) {
    std::vector<std::pair<Int, int>> out;
    if (n < 0) n = -n;
    if (n < 2) return out;
    for (Int p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace mld
