#pragma once

#include "mld/polynomial.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace mld {

using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;
using QuadReal = boost::multiprecision::cpp_bin_float_quad;
using QuadCplx = boost::multiprecision::cpp_complex_quad;
using Real50 = boost::multiprecision::cpp_bin_float_50;
using Cplx50 = boost::multiprecision::cpp_complex_50;

template <typename C>
auto cabs(const C& z) {
    using std::abs;
    return abs(z);
}

template <typename C, typename R>
C make_complex(double re, double im) {
    return C(R(re), R(im));
}

// Gradient sum_a u_a grad(p_a)/p_a and its Jacobian for a fixed list of coordinates.
template <typename C, typename R>
class GradientSystem {
public:
    GradientSystem(int vars, const std::vector<Poly>& coords) : n_(vars) {
        max_deg_ = 1;
        for (const auto& p : coords) {
            max_deg_ = std::max(max_deg_, p.degree());
            p_.emplace_back(p);
            std::vector<CompiledPoly<C, R>> d1;
            std::vector<std::vector<CompiledPoly<C, R>>> d2;
            for (int j = 0; j < n_; ++j) {
                Poly dj = p.derivative(j);
                d1.emplace_back(dj);
                std::vector<CompiledPoly<C, R>> row;
                for (int k = 0; k < n_; ++k) row.emplace_back(dj.derivative(k));
                d2.push_back(std::move(row));
            }
            d1_.push_back(std::move(d1));
            d2_.push_back(std::move(d2));
        }
    }

    int vars() const { return n_; }
    std::size_t size() const { return p_.size(); }

    void powers(const std::vector<C>& x, std::vector<std::vector<C>>& pw) const {
        pw.assign(n_, std::vector<C>(max_deg_ + 1, C(1)));
        for (int j = 0; j < n_; ++j)
            for (int e = 1; e <= max_deg_; ++e) pw[j][e] = pw[j][e - 1] * x[j];
    }

    std::vector<C> coords(const std::vector<C>& x) const {
        std::vector<std::vector<C>> pw;
        powers(x, pw);
        std::vector<C> out;
        for (const auto& p : p_) out.push_back(p.eval(pw));
        return out;
    }

    // Per coordinate, the sum of absolute values of its terms.
    std::vector<R> term_scales(const std::vector<C>& x) const {
        std::vector<std::vector<C>> pw;
        powers(x, pw);
        std::vector<R> out;
        for (const auto& p : p_) out.push_back(p.abs_eval(pw));
        return out;
    }

    // max_j sum_a |u_a d_j p_a / p_a|, the scale against which F is small.
    R gradient_scale(const std::vector<C>& x, const std::vector<C>& u) const {
        using std::abs;
        std::vector<std::vector<C>> pw;
        powers(x, pw);
        std::vector<R> s(n_, R(0));
        for (std::size_t a = 0; a < p_.size(); ++a) {
            C inv = C(1) / p_[a].eval(pw);
            for (int j = 0; j < n_; ++j) s[j] += abs(u[a] * d1_[a][j].eval(pw) * inv);
        }
        R m = 0;
        for (const auto& v : s) m = std::max(m, v);
        return m;
    }

    // Returns min_a |p_a(x)|. With clearing powers c_a, J becomes the Jacobian of
    // prod_a p_a^{c_a} F divided by that factor: J + F s^T, s = sum_a c_a grad(p_a)/p_a,
    // and log_prod receives sum_a c_a log|p_a|.
    R eval(const std::vector<C>& x, const std::vector<C>& u, std::vector<C>& F, std::vector<std::vector<C>>* J,
           const std::vector<double>* clear = nullptr, R* log_prod = nullptr) const {
        std::vector<std::vector<C>> pw;
        powers(x, pw);
        F.assign(n_, C(0));
        if (J) J->assign(n_, std::vector<C>(n_, C(0)));
        R minp = -1;
        if (log_prod) *log_prod = 0;
        std::vector<C> g(n_), sum(n_, C(0));
        for (std::size_t a = 0; a < p_.size(); ++a) {
            C pa = p_[a].eval(pw);
            R ab = cabs(pa);
            if (minp < 0 || ab < minp) minp = ab;
            const C ca = clear ? C(R((*clear)[a])) : C(0);
            if (log_prod && clear) {
                using std::log;
                *log_prod += R((*clear)[a]) * log(ab);
            }
            C inv = C(1) / pa;
            for (int j = 0; j < n_; ++j) {
                g[j] = d1_[a][j].eval(pw) * inv;
                F[j] += u[a] * g[j];
                if (clear) sum[j] += ca * g[j];
            }
            if (J)
                for (int j = 0; j < n_; ++j)
                    for (int k = 0; k < n_; ++k) (*J)[j][k] += u[a] * (d2_[a][j][k].eval(pw) * inv - g[j] * g[k]);
        }
        if (J && clear)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k) (*J)[j][k] += F[j] * sum[k];
        return minp;
    }

private:
    int n_;
    int max_deg_;
    std::vector<CompiledPoly<C, R>> p_;
    std::vector<std::vector<CompiledPoly<C, R>>> d1_;
    std::vector<std::vector<std::vector<CompiledPoly<C, R>>>> d2_;
};

template <typename C>
auto max_norm(const std::vector<C>& v) {
    decltype(cabs(C(0))) m = 0;
    for (const auto& z : v) m = std::max<decltype(m)>(m, cabs(z));
    return m;
}

// Solves a x = b with row and column equilibration and partial pivoting.
template <typename C>
bool linear_solve(std::vector<std::vector<C>> a, std::vector<C> b, std::vector<C>& x) {
    using R = decltype(cabs(C(0)));
    const std::size_t n = a.size();
    std::vector<R> cs(n, R(0));
    for (std::size_t i = 0; i < n; ++i) {
        R rs = 0;
        for (std::size_t j = 0; j < n; ++j) rs = std::max<R>(rs, cabs(a[i][j]));
        if (!(rs > 0)) return false;
        for (std::size_t j = 0; j < n; ++j) a[i][j] /= rs;
        b[i] /= rs;
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) cs[j] = std::max<R>(cs[j], cabs(a[i][j]));
        if (!(cs[j] > 0)) return false;
        for (std::size_t i = 0; i < n; ++i) a[i][j] /= cs[j];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < n; ++i)
            if (cabs(a[i][c]) > cabs(a[p][c])) p = i;
        if (!(cabs(a[p][c]) > R(1e-300))) return false;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t i = c + 1; i < n; ++i) {
            C f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            b[i] -= f * b[c];
        }
    }
    x.assign(n, C(0));
    for (std::size_t i = n; i-- > 0;) {
        C s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    for (std::size_t j = 0; j < n; ++j) x[j] /= cs[j];
    return true;
}

}  // namespace mld
